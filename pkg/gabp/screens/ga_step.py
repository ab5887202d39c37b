from dataclasses import replace
from typing import Any, Dict, List

from textual.app import ComposeResult
from textual.containers import Container, Horizontal
from textual.widgets import Checkbox, Select, Static

from ..models.run_config import CrossoverMode, MutationVariant
from .base import FieldSpec, FormStep


class GaStep(FormStep):
    """Genetic algorithm knobs"""

    STEP_NAME = "Genetic Algorithm"
    TITLE = "🧬 Step 3: Genetic Algorithm"
    INTRO = """
Each individual is the full weight vector. Fitness is the training-set absolute
error after a short BP run; the best individual survives every generation.
"""
    FIELDS = [
        FieldSpec("pop_size", "Population size N", "int"),
        FieldSpec("generations", "Generations", "int"),
        FieldSpec("crossover_prob", "Crossover probability", "float"),
        FieldSpec("mutation_prob", "Mutation probability", "float"),
        FieldSpec("gene_min", "Gene lower bound", "float"),
        FieldSpec("gene_max", "Gene upper bound", "float"),
        FieldSpec("fitness_bp_epochs", "Fitness BP epochs", "int", "0 scores the untrained network"),
        FieldSpec("fitness_bp_lr", "Fitness BP learning rate", "float"),
        FieldSpec("fitness_k", "Fitness coefficient k", "float", "Scales G; selection does not depend on it"),
        FieldSpec("elite_count", "Elite individuals", "int"),
    ]

    def current_values(self) -> Dict[str, Any]:
        return self.run_config.ga.to_dict()

    def compose_extra(self) -> ComposeResult:
        ga = self.run_config.ga
        with Container(classes="info-section"):
            with Horizontal():
                yield Static("Mutation:")
                yield Select([(v.value, v.value) for v in MutationVariant],
                             value=ga.mutation_variant.value, allow_blank=False,
                             id="mutation-select")
                yield Static("Crossover:")
                yield Select([(m.value, m.value) for m in CrossoverMode],
                             value=ga.crossover_mode.value, allow_blank=False,
                             id="crossover-select")
            yield Checkbox("Skip the GA (plain BP baseline)", value=self.run_config.skip_ga,
                           id="skip-ga-checkbox")

    def apply(self, values: Dict[str, Any]) -> List[str]:
        ga = replace(
            self.run_config.ga,
            mutation_variant=MutationVariant(self.query_one("#mutation-select", Select).value),
            crossover_mode=CrossoverMode(self.query_one("#crossover-select", Select).value),
            **values,
        )
        candidate = replace(self.run_config, ga=ga,
                            skip_ga=self.query_one("#skip-ga-checkbox", Checkbox).value)
        valid, errors = candidate.is_valid()
        if valid:
            self.wizard_app.update_config(candidate)
        return errors
