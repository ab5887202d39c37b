from dataclasses import replace
from typing import Any, Dict, List

from textual.app import ComposeResult
from textual.containers import Container
from textual.widgets import Static

from ..models.feature_catalog import CATALOG, FeatureGroup
from ..models.run_config import ColumnMap
from .base import FieldSpec, FormStep


class DataStep(FormStep):
    """Data file, column mapping and feature construction settings"""

    STEP_NAME = "Data & Features"
    TITLE = "📈 Step 1: Data & Features"
    INTRO = """
Point the run at a daily market CSV with a `date` column and map each raw column
to its role. Realized volatility uses a forward window of **d** trading days.
"""
    FIELDS = [
        FieldSpec("data_path", "Data CSV", "text", "Leave empty to pass --data later"),
        FieldSpec("close", "Close price column", "text"),
        FieldSpec("volume", "Volume column", "text"),
        FieldSpec("sse50", "SSE 50 index column", "text"),
        FieldSpec("bond3m", "3-month bond yield column", "text"),
        FieldSpec("bond6m", "6-month bond yield column", "text"),
        FieldSpec("fx", "Exchange rate column", "text"),
        FieldSpec("vol_window", "Volatility window d", "int", "21 trading days is about one month"),
        FieldSpec("z_threshold", "Outlier z threshold", "float", "Cells beyond this many std devs are repaired"),
        FieldSpec("train_frac", "Train fraction", "float", "Random split; the rest is the test set"),
    ]

    def current_values(self) -> Dict[str, Any]:
        values = self.run_config.columns.to_dict()
        values.update(
            data_path=self.run_config.data_path,
            vol_window=self.run_config.vol_window,
            z_threshold=self.run_config.z_threshold,
            train_frac=self.run_config.train_frac,
        )
        return values

    def compose_extra(self) -> ComposeResult:
        with Container(classes="info-section"):
            yield Static("🧮 Network inputs", classes="info-title")
            lines = []
            for group in FeatureGroup:
                for spec in CATALOG.get_features_for_group(group):
                    lines.append(f"• {spec.display_name}: {spec.description}")
            yield Static("\n".join(lines))

    def apply(self, values: Dict[str, Any]) -> List[str]:
        columns = ColumnMap.from_dict({role: values[role] for role in ColumnMap().to_dict()})
        candidate = replace(
            self.run_config,
            data_path=values['data_path'],
            columns=columns,
            vol_window=values['vol_window'],
            z_threshold=values['z_threshold'],
            train_frac=values['train_frac'],
        )
        valid, errors = candidate.is_valid()
        if valid:
            self.wizard_app.update_config(candidate)
        return errors
