import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigError
from ..utils.validators import ConfigValidator


class Activation(Enum):
    TANH = "tanh"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"


class MutationVariant(Enum):
    LITERAL = "paper"
    STANDARD = "standard"

    @classmethod
    def _missing_(cls, value):
        if value == "literal":
            return cls.LITERAL
        return None


class CrossoverMode(Enum):
    SIMULTANEOUS = "simultaneous"
    SEQUENTIAL = "sequential"


@dataclass(frozen=True)
class NetShape:
    n_in: int = 8
    n_hidden: int = 10
    n_out: int = 1

    def __post_init__(self):
        for name in ("n_in", "n_hidden", "n_out"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be at least 1")

    @property
    def gene_length(self) -> int:
        """Genes needed for W1, b1, W2 and b2"""
        return (self.n_in * self.n_hidden + self.n_hidden
                + self.n_hidden * self.n_out + self.n_out)

    def to_dict(self) -> Dict[str, int]:
        return {'n_in': self.n_in, 'n_hidden': self.n_hidden, 'n_out': self.n_out}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NetShape":
        return cls(
            n_in=int(data.get('n_in', 8)),
            n_hidden=int(data.get('n_hidden', 10)),
            n_out=int(data.get('n_out', 1)),
        )


@dataclass(frozen=True)
class GaConfig:
    pop_size: int = 40
    generations: int = 30
    crossover_prob: float = 0.7
    mutation_prob: float = 0.1
    gene_min: float = -3.0
    gene_max: float = 3.0
    fitness_bp_epochs: int = 10
    fitness_bp_lr: float = 0.01
    fitness_k: float = 1.0
    seed: int = 0
    elite_count: int = 1
    mutation_variant: MutationVariant = MutationVariant.LITERAL
    crossover_mode: CrossoverMode = CrossoverMode.SIMULTANEOUS

    @property
    def bounds(self) -> Tuple[float, float]:
        return (self.gene_min, self.gene_max)

    def errors(self) -> List[str]:
        """Collect validation errors for the GA knobs"""
        errors = []
        checks = [
            ConfigValidator.validate_count(self.pop_size, "Population size", minimum=2),
            ConfigValidator.validate_count(self.generations, "Generations", minimum=1),
            ConfigValidator.validate_probability(self.crossover_prob, "Crossover probability"),
            ConfigValidator.validate_probability(self.mutation_prob, "Mutation probability"),
            ConfigValidator.validate_bounds(self.gene_min, self.gene_max),
            ConfigValidator.validate_count(self.fitness_bp_epochs, "Fitness BP epochs", minimum=0),
            ConfigValidator.validate_positive(self.fitness_bp_lr, "Fitness BP learning rate"),
            ConfigValidator.validate_positive(self.fitness_k, "Fitness coefficient k"),
            ConfigValidator.validate_count(self.elite_count, "Elite count", minimum=1,
                                           maximum=self.pop_size - 1),
        ]
        for ok, message in checks:
            if not ok:
                errors.append(message)
        return errors

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pop_size': self.pop_size,
            'generations': self.generations,
            'crossover_prob': self.crossover_prob,
            'mutation_prob': self.mutation_prob,
            'gene_min': self.gene_min,
            'gene_max': self.gene_max,
            'fitness_bp_epochs': self.fitness_bp_epochs,
            'fitness_bp_lr': self.fitness_bp_lr,
            'fitness_k': self.fitness_k,
            'seed': self.seed,
            'elite_count': self.elite_count,
            'mutation_variant': self.mutation_variant.value,
            'crossover_mode': self.crossover_mode.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GaConfig":
        return cls(
            pop_size=int(data.get('pop_size', 40)),
            generations=int(data.get('generations', 30)),
            crossover_prob=float(data.get('crossover_prob', 0.7)),
            mutation_prob=float(data.get('mutation_prob', 0.1)),
            gene_min=float(data.get('gene_min', -3.0)),
            gene_max=float(data.get('gene_max', 3.0)),
            fitness_bp_epochs=int(data.get('fitness_bp_epochs', 10)),
            fitness_bp_lr=float(data.get('fitness_bp_lr', 0.01)),
            fitness_k=float(data.get('fitness_k', 1.0)),
            seed=int(data.get('seed', 0)),
            elite_count=int(data.get('elite_count', 1)),
            mutation_variant=MutationVariant(data.get('mutation_variant', 'paper')),
            crossover_mode=CrossoverMode(data.get('crossover_mode', 'simultaneous')),
        )


@dataclass(frozen=True)
class BpConfig:
    lr: float = 0.01
    epochs: int = 1000

    def to_dict(self) -> Dict[str, Any]:
        return {'lr': self.lr, 'epochs': self.epochs}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BpConfig":
        return cls(lr=float(data.get('lr', 0.01)), epochs=int(data.get('epochs', 1000)))


@dataclass(frozen=True)
class ColumnMap:
    """Names of the raw CSV columns feeding each feature role"""
    close: str = "close"
    volume: str = "volume"
    sse50: str = "sse50"
    bond3m: str = "bond3m"
    bond6m: str = "bond6m"
    fx: str = "fx"

    def schema(self) -> List[str]:
        """Raw columns the loader must find, in role order"""
        return [self.close, self.volume, self.sse50, self.bond3m, self.bond6m, self.fx]

    def to_dict(self) -> Dict[str, str]:
        return {
            'close': self.close,
            'volume': self.volume,
            'sse50': self.sse50,
            'bond3m': self.bond3m,
            'bond6m': self.bond6m,
            'fx': self.fx,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ColumnMap":
        defaults = cls()
        return cls(**{role: str(data.get(role, getattr(defaults, role)))
                      for role in defaults.to_dict()})


@dataclass
class RunConfig:
    # Data
    data_path: str = ""
    columns: ColumnMap = field(default_factory=ColumnMap)
    vol_window: int = 21
    z_threshold: float = 5.0
    train_frac: float = 0.8

    # Model
    shape: NetShape = field(default_factory=NetShape)
    hidden_activation: Activation = Activation.TANH
    bp: BpConfig = field(default_factory=BpConfig)
    ga: GaConfig = field(default_factory=GaConfig)

    # Run
    output_dir: str = "runs/latest"
    seed: int = 0
    workers: int = 1
    skip_ga: bool = False
    write_svg: bool = True

    def seeded_ga(self) -> GaConfig:
        """GA settings with the master seed applied"""
        return replace(self.ga, seed=self.seed)

    def is_valid(self) -> Tuple[bool, List[str]]:
        """Validate the run configuration and return validation errors"""
        errors = []

        checks = [
            ConfigValidator.validate_count(self.vol_window, "Volatility window d", minimum=1),
            ConfigValidator.validate_positive(self.z_threshold, "Outlier z threshold"),
            ConfigValidator.validate_fraction(self.train_frac, "Train fraction"),
            ConfigValidator.validate_positive(self.bp.lr, "Learning rate"),
            ConfigValidator.validate_count(self.bp.epochs, "Training epochs", minimum=1),
            ConfigValidator.validate_count(self.workers, "Workers", minimum=1, maximum=256),
            ConfigValidator.validate_column_names(self.columns.schema()),
        ]
        for ok, message in checks:
            if not ok:
                errors.append(message)

        if self.shape.n_in != 8:
            errors.append("Input layer must have 8 nodes, one per feature")
        if self.hidden_activation == Activation.IDENTITY:
            errors.append("Hidden activation must be tanh or sigmoid")

        errors.extend(self.ga.errors())

        if self.data_path:
            ok, message = ConfigValidator.validate_file_path(self.data_path)
            if not ok:
                errors.append(message)

        return len(errors) == 0, errors

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary for serialization"""
        return {
            'data_path': self.data_path,
            'columns': self.columns.to_dict(),
            'vol_window': self.vol_window,
            'z_threshold': self.z_threshold,
            'train_frac': self.train_frac,
            'shape': self.shape.to_dict(),
            'hidden_activation': self.hidden_activation.value,
            'bp': self.bp.to_dict(),
            'ga': self.ga.to_dict(),
            'output_dir': self.output_dir,
            'seed': self.seed,
            'workers': self.workers,
            'skip_ga': self.skip_ga,
            'write_svg': self.write_svg,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build a configuration from a dictionary, defaulting missing keys"""
        try:
            return cls(
                data_path=str(data.get('data_path', '')),
                columns=ColumnMap.from_dict(data.get('columns', {})),
                vol_window=int(data.get('vol_window', 21)),
                z_threshold=float(data.get('z_threshold', 5.0)),
                train_frac=float(data.get('train_frac', 0.8)),
                shape=NetShape.from_dict(data.get('shape', {})),
                hidden_activation=Activation(data.get('hidden_activation', 'tanh')),
                bp=BpConfig.from_dict(data.get('bp', {})),
                ga=GaConfig.from_dict(data.get('ga', {})),
                output_dir=str(data.get('output_dir', 'runs/latest')),
                seed=int(data.get('seed', 0)),
                workers=int(data.get('workers', 1)),
                skip_ga=bool(data.get('skip_ga', False)),
                write_svg=bool(data.get('write_svg', True)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid configuration value: {e}") from e

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        """Load configuration from a JSON file"""
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigError(f"Cannot read configuration file {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Configuration file {path} is not valid JSON: {e}") from e

        if not isinstance(data, dict):
            raise ConfigError(f"Configuration file {path} must contain a JSON object")
        return cls.from_dict(data)

    def save(self, path: str) -> Path:
        """Write configuration as JSON, creating parent directories"""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")
        return target


def load_run_config(path: Optional[str]) -> RunConfig:
    """Configuration from file, or the full defaults when no file is given"""
    if not path:
        return RunConfig()
    return RunConfig.from_file(path)
