import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from ..errors import GabpError, ModelParseError
from .dataset import NormParams
from .run_config import Activation, ColumnMap, NetShape

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelDocument:
    """Everything ``predict`` needs to replay a trained network on new data"""
    shape: NetShape
    genes: Tuple[float, ...]
    hidden_activation: Activation
    output_activation: Activation
    norm_params: NormParams
    feature_names: Tuple[str, ...]
    columns: ColumnMap
    vol_window: int
    z_threshold: float = 5.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format_version': FORMAT_VERSION,
            'shape': self.shape.to_dict(),
            'genes': [float(g) for g in self.genes],
            'hidden_activation': self.hidden_activation.value,
            'output_activation': self.output_activation.value,
            'norm_params': self.norm_params.to_dict(),
            'feature_names': list(self.feature_names),
            'columns': self.columns.to_dict(),
            'vol_window': self.vol_window,
            'z_threshold': self.z_threshold,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelDocument":
        if not isinstance(data, dict):
            raise ModelParseError("model document must be a JSON object")
        required = ['shape', 'genes', 'norm_params', 'feature_names', 'vol_window']
        missing = [key for key in required if key not in data]
        if missing:
            raise ModelParseError(f"model document is missing: {', '.join(missing)}", issues=missing)

        try:
            shape = NetShape.from_dict(data['shape'])
            genes = tuple(float(g) for g in data['genes'])
            norm_params = NormParams.from_dict(data['norm_params'])
            document = cls(
                shape=shape,
                genes=genes,
                hidden_activation=Activation(data.get('hidden_activation', 'tanh')),
                output_activation=Activation(data.get('output_activation', 'identity')),
                norm_params=norm_params,
                feature_names=tuple(str(name) for name in data['feature_names']),
                columns=ColumnMap.from_dict(data.get('columns', {})),
                vol_window=int(data['vol_window']),
                z_threshold=float(data.get('z_threshold', 5.0)),
            )
        except (GabpError, KeyError, TypeError, ValueError) as e:
            raise ModelParseError(f"invalid model document: {e}") from e

        document._check()
        return document

    def _check(self):
        if len(self.genes) != self.shape.gene_length:
            raise ModelParseError(
                f"model has {len(self.genes)} genes but shape needs {self.shape.gene_length}")
        if not np.isfinite(self.genes).all():
            raise ModelParseError("model genes must be finite")
        n_features = len(self.feature_names)
        if n_features != self.shape.n_in:
            raise ModelParseError(f"model lists {n_features} features for {self.shape.n_in} inputs")
        if len(self.norm_params.mins) != n_features or len(self.norm_params.maxs) != n_features:
            raise ModelParseError("normalization ranges do not match the feature list")
        if not np.all(self.norm_params.maxs > self.norm_params.mins):
            raise ModelParseError("normalization ranges must satisfy max > min")
        if self.vol_window < 1:
            raise ModelParseError(f"volatility window must be positive, got {self.vol_window}")

    def save(self, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        return target

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ModelDocument":
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except OSError as e:
            raise ModelParseError(f"cannot read model file {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ModelParseError(f"model file {path} is not valid JSON: {e}") from e
        return cls.from_dict(data)
