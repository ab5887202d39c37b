from textual.app import ComposeResult
from textual.binding import Binding
from textual.containers import Container, Horizontal
from textual.screen import ModalScreen
from textual.widgets import Button, Input, Static

from ..errors import GabpError
from ..utils.validators import ConfigValidator

DEFAULT_CONFIG_PATH = "configs/run.json"

HELP_TEXT = """
Navigation:
• Next/Back buttons, or Escape to go back
• Tab moves between fields

Steps:
1. Data & Features: data file, column names, window d, split
2. Network & Training: hidden layer, BP learning rate and epochs, seed
3. Genetic Algorithm: population, operators, fitness training
4. Review: the equivalent `gabp train` command

Configuration:
• Ctrl+S saves the run configuration as JSON
• Run it with `gabp train --config <file>`
"""


class MessageScreen(ModalScreen):
    """Error or success notice closed with OK"""

    ICONS = {'error': "❌", 'success': "✅"}

    BINDINGS = [
        Binding("escape", "dismiss", "Close", priority=True),
    ]

    def __init__(self, title: str, message: str, kind: str = "error"):
        super().__init__()
        self.notice_title = title
        self.message = message
        self.kind = kind

    def compose(self) -> ComposeResult:
        with Container(classes=f"message {self.kind}"):
            yield Static(f"{self.ICONS.get(self.kind, '')} {self.notice_title}")
            yield Static(self.message)
            yield Button("OK", id="ok-button", variant="primary")

    def on_button_pressed(self, event: Button.Pressed) -> None:
        if event.button.id == "ok-button":
            self.dismiss()


class SaveConfigScreen(ModalScreen):
    """Ask where to write the run configuration, then save it through the wizard"""

    BINDINGS = [
        Binding("escape", "dismiss", "Cancel", priority=True),
    ]

    def __init__(self, wizard_app):
        super().__init__()
        self.wizard_app = wizard_app

    def compose(self) -> ComposeResult:
        with Container(classes="dialog-container"):
            yield Static("💾 Save Run Configuration", classes="dialog-title")
            yield Static("JSON file:")
            yield Input(value=self.wizard_app.config_path or DEFAULT_CONFIG_PATH, id="config-path-input")
            with Horizontal():
                yield Button("Cancel", id="cancel-save-button")
                yield Button("Save", id="confirm-save-button", variant="primary")

    def on_mount(self) -> None:
        self.query_one("#config-path-input", Input).focus()

    def on_input_submitted(self, event: Input.Submitted) -> None:
        self._save()

    def on_button_pressed(self, event: Button.Pressed) -> None:
        if event.button.id == "cancel-save-button":
            self.dismiss()
        elif event.button.id == "confirm-save-button":
            self._save()

    def _save(self) -> None:
        path = self.query_one("#config-path-input", Input).value.strip()
        valid, error = ConfigValidator.validate_file_path(path)
        if not path or not valid:
            self.app.push_screen(MessageScreen("Invalid Path", error or "Enter a file path"))
            return

        try:
            target = self.wizard_app.save_config(path)
        except (OSError, GabpError) as e:
            self.app.push_screen(MessageScreen("Save Failed", f"Could not write {path}: {e}"))
            return

        command = self.wizard_app.command_builder.build_command(self.wizard_app.run_config, str(target))
        self.dismiss()
        self.app.push_screen(MessageScreen("Configuration Saved", f"Saved to {target}\n\n{command}",
                                           kind="success"))


class HelpScreen(ModalScreen):
    BINDINGS = [
        Binding("escape", "dismiss", "Close", priority=True),
    ]

    def compose(self) -> ComposeResult:
        with Container(classes="help-container"):
            yield Static("❓ GA-BP Wizard Help", classes="dialog-title")
            yield Static(HELP_TEXT)
            yield Button("Close", id="close-help-button", variant="primary")

    def on_button_pressed(self, event: Button.Pressed) -> None:
        if event.button.id == "close-help-button":
            self.dismiss()
