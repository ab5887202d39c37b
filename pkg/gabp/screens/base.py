from typing import Any, Dict, List, NamedTuple, Tuple

from textual.app import ComposeResult
from textual.containers import Container, Grid, Vertical
from textual.validation import Integer, Number
from textual.widget import Widget
from textual.widgets import Input, Markdown, Static

from ..utils.validators import ConfigValidator


class FieldSpec(NamedTuple):
    key: str
    label: str
    kind: str = "float"  # "int", "float" or "text"
    help: str = ""


class FormStep(Widget):
    """A wizard step made of labelled inputs bound to the run configuration"""

    DEFAULT_CSS = """
    .step-container {
        height: 100%;
        padding: 1 2;
        background: $surface;
    }

    .section-title {
        text-align: center;
        background: $primary;
        color: $text;
        padding: 1;
        margin: 1 0;
    }

    .form-grid {
        height: auto;
        grid-size: 2;
        grid-gutter: 1;
    }

    .form-item {
        height: auto;
        background: $surface-lighten-1;
        padding: 1;
        border: solid $primary;
    }

    .help-text {
        color: $text-muted;
    }

    .info-title {
        text-style: bold;
    }

    .info-section {
        height: auto;
        background: $surface-darken-1;
        padding: 1;
        margin: 1 0;
        border: solid $accent;
    }
    """

    STEP_NAME = ""
    TITLE = ""
    INTRO = ""
    FIELDS: List[FieldSpec] = []

    def __init__(self, wizard_app, run_config):
        super().__init__()
        self.wizard_app = wizard_app
        self.run_config = run_config

    def current_values(self) -> Dict[str, Any]:
        """Field key -> value shown when the step opens"""
        raise NotImplementedError

    def apply(self, values: Dict[str, Any]) -> List[str]:
        """Write parsed values into the configuration; return validation errors"""
        raise NotImplementedError

    def compose_extra(self) -> ComposeResult:
        yield from ()

    def compose(self) -> ComposeResult:
        with Container(classes="step-container"):
            with Vertical():
                yield Static(self.TITLE, classes="section-title")
                if self.INTRO:
                    yield Markdown(self.INTRO)

                with Grid(classes="form-grid"):
                    for field in self.FIELDS:
                        with Container(classes="form-item"):
                            yield Static(f"{field.label}:")
                            yield Input(id=f"{field.key}-input", validators=self._validators(field))
                            if field.help:
                                yield Static(f"💡 {field.help}", classes="help-text")

                yield from self.compose_extra()

    def _validators(self, field: FieldSpec):
        if field.kind == "int":
            return [Integer()]
        if field.kind == "float":
            return [Number()]
        return []

    def on_mount(self) -> None:
        """Fill the inputs from the configuration"""
        values = self.current_values()
        for field in self.FIELDS:
            self.query_one(f"#{field.key}-input", Input).value = str(values[field.key])

    def read_fields(self) -> Tuple[Dict[str, Any], List[str]]:
        values: Dict[str, Any] = {}
        errors: List[str] = []
        for field in self.FIELDS:
            text = self.query_one(f"#{field.key}-input", Input).value.strip()
            if field.kind == "text":
                values[field.key] = text
                continue

            valid, error = ConfigValidator.validate_number_text(text, field.label, field.kind == "int")
            if not valid:
                errors.append(error)
                continue
            values[field.key] = int(text) if field.kind == "int" else float(text)
        return values, errors

    def validate(self) -> bool:
        """Parse, apply and report; False keeps the wizard on this step"""
        values, errors = self.read_fields()
        if not errors:
            errors = self.apply(values)

        if errors:
            self.wizard_app.show_error_message(f"{self.STEP_NAME} Errors", errors)
            return False
        return True
