import os
import shlex
from typing import List, Optional

from ..models.run_config import MutationVariant, RunConfig


class TrainCommandBuilder:
    """Builds ``gabp train`` invocations from run configurations"""

    def __init__(self, program: str = "gabp"):
        self.program = program

    def build_command(self, config: RunConfig, config_path: Optional[str] = None) -> str:
        """Generate the train command; settings without a flag travel in ``config_path``"""
        defaults = RunConfig()
        parts = [self.program, "train"]

        # Config file carries everything that has no flag of its own
        if config_path:
            parts.append(f"--config {shlex.quote(config_path)}")

        if config.data_path:
            parts.append(f"--data {shlex.quote(config.data_path)}")

        parts.append(f"--seed {config.seed}")

        if config.workers != defaults.workers:
            parts.append(f"--workers {config.workers}")

        if config.skip_ga:
            parts.append("--skip-ga")

        if config.ga.mutation_variant != MutationVariant.LITERAL:
            parts.append(f"--mutation-variant {config.ga.mutation_variant.value}")

        if config.output_dir:
            parts.append(f"--out-dir {shlex.quote(config.output_dir)}")

        if not config.write_svg:
            parts.append("--no-svg")

        return " ".join(parts)

    def unflagged_settings(self, config: RunConfig) -> List[str]:
        """Top-level settings that differ from the defaults and need a config file"""
        defaults = RunConfig().to_dict()
        current = config.to_dict()
        flagged = {'data_path', 'seed', 'workers', 'skip_ga', 'output_dir', 'write_svg'}

        changed = []
        for key, value in current.items():
            if key in flagged:
                continue
            if key == 'ga':
                ga = {k: v for k, v in value.items() if k not in ('mutation_variant', 'seed')}
                ga_defaults = {k: v for k, v in defaults['ga'].items() if k not in ('mutation_variant', 'seed')}
                if ga != ga_defaults:
                    changed.append(key)
            elif value != defaults[key]:
                changed.append(key)
        return changed

    def validate_configuration(self, config: RunConfig, config_path: Optional[str] = None) -> List[str]:
        """Validate configuration and return list of warnings"""
        warnings = []

        if not config.data_path:
            warnings.append("No data file set; pass --data when running the command")

        if not config_path and self.unflagged_settings(config):
            warnings.append("Settings changed for " + ", ".join(self.unflagged_settings(config))
                            + " need a saved config file (--config)")

        cpus = os.cpu_count() or 1
        if config.workers > cpus:
            warnings.append(f"{config.workers} workers exceeds the {cpus} available CPUs")

        if config.skip_ga and config.ga != RunConfig().ga:
            warnings.append("GA settings are ignored when the GA is skipped")

        if config.train_frac > 0.95 or config.train_frac < 0.5:
            warnings.append(f"Train fraction {config.train_frac:.2f} leaves a lopsided split")

        if self.estimate_epochs(config) > 5_000_000:
            warnings.append("Training budget is large; expect a long run")

        return warnings

    def estimate_evaluations(self, config: RunConfig) -> int:
        """Fitness evaluations the GA will perform (elite fitness is cached)"""
        if config.skip_ga:
            return 0
        ga = config.ga
        return ga.pop_size + (ga.generations - 1) * (ga.pop_size - ga.elite_count)

    def estimate_epochs(self, config: RunConfig) -> int:
        """Total full-batch BP epochs: short fitness runs plus the final training"""
        return self.estimate_evaluations(config) * config.ga.fitness_bp_epochs + config.bp.epochs

    def generate_run_script(self, config: RunConfig, config_path: Optional[str] = None) -> str:
        """Generate a shell script running the configured training"""
        script_lines = [
            "#!/bin/bash",
            "",
            "# Generated by the gabp wizard",
            f"# Seed: {config.seed}",
            f"# Output: {config.output_dir}",
            "",
            "set -euo pipefail",
            "",
            "# Train",
            self.build_command(config, config_path),
        ]
        return "\n".join(script_lines) + "\n"

    def get_example_commands(self) -> List[str]:
        """Example invocations covering the pipeline"""
        return [
            f"{self.program} synth --seed 7 --out data.csv",
            f"{self.program} stats data.csv --json",
            f"{self.program} train --data data.csv --seed 7 --out-dir runs/seed7",
            f"{self.program} train --data data.csv --seed 7 --skip-ga --out-dir runs/baseline7",
            f"{self.program} predict runs/seed7/model.json data.csv --out predictions.csv",
            f"{self.program} evaluate runs/seed7/predictions.csv --split test",
        ]
