from dataclasses import replace
from typing import Any, Dict, List

from textual.app import ComposeResult
from textual.containers import Container
from textual.widgets import Select, Static

from ..errors import ConfigError
from ..models.run_config import Activation, BpConfig
from .base import FieldSpec, FormStep


class ModelStep(FormStep):
    """Network shape, final BP training budget and run-level settings"""

    STEP_NAME = "Network & Training"
    TITLE = "🧠 Step 2: Network & Training"
    INTRO = """
A three-layer network maps the eight inputs to one volatility output. After the
GA picks initial weights, full-batch gradient descent trains the winner.
"""
    FIELDS = [
        FieldSpec("n_hidden", "Hidden nodes", "int"),
        FieldSpec("lr", "Learning rate", "float", "Divergence at a large rate aborts the run"),
        FieldSpec("epochs", "Training epochs", "int"),
        FieldSpec("seed", "Master seed", "int", "Drives the split, the GA and every derived stream"),
        FieldSpec("workers", "Fitness workers", "int", "Results do not depend on this"),
        FieldSpec("output_dir", "Output directory", "text"),
    ]

    def current_values(self) -> Dict[str, Any]:
        return {
            'n_hidden': self.run_config.shape.n_hidden,
            'lr': self.run_config.bp.lr,
            'epochs': self.run_config.bp.epochs,
            'seed': self.run_config.seed,
            'workers': self.run_config.workers,
            'output_dir': self.run_config.output_dir,
        }

    def compose_extra(self) -> ComposeResult:
        with Container(classes="info-section"):
            yield Static("Hidden activation:")
            yield Select([("tanh (recommended)", Activation.TANH.value),
                          ("sigmoid", Activation.SIGMOID.value)],
                         value=self.run_config.hidden_activation.value,
                         allow_blank=False, id="activation-select")

    def apply(self, values: Dict[str, Any]) -> List[str]:
        activation = Activation(self.query_one("#activation-select", Select).value)
        try:
            shape = replace(self.run_config.shape, n_hidden=values['n_hidden'])
        except ConfigError as e:
            return [str(e)]

        candidate = replace(
            self.run_config,
            shape=shape,
            hidden_activation=activation,
            bp=BpConfig(lr=values['lr'], epochs=values['epochs']),
            seed=values['seed'],
            workers=values['workers'],
            output_dir=values['output_dir'] or "runs/latest",
        )
        valid, errors = candidate.is_valid()
        if valid:
            self.wizard_app.update_config(candidate)
        return errors
