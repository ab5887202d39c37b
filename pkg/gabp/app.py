from pathlib import Path
from typing import List, Optional

from textual.app import App, ComposeResult
from textual.binding import Binding
from textual.containers import Container, Horizontal, Vertical
from textual.reactive import reactive
from textual.widgets import Button, Footer, Header, Static

from .models.run_config import RunConfig
from .screens.data_step import DataStep
from .screens.dialogs import HelpScreen, MessageScreen, SaveConfigScreen
from .screens.ga_step import GaStep
from .screens.model_step import ModelStep
from .screens.review_step import ReviewStep
from .utils.command_builder import TrainCommandBuilder


class GabpWizardApp(App):
    """Step-by-step editor for GA-BP run configurations"""

    CSS = """
    #wizard {
        height: 100%;
    }

    #progress {
        height: 3;
        background: $primary;
        color: $text;
        padding: 1;
    }

    #content-area {
        height: 1fr;
        overflow-y: auto;
    }

    #nav {
        height: 3;
        align: center middle;
        background: $surface-lighten-1;
    }

    Button {
        margin: 0 1;
        min-width: 12;
    }

    .message {
        height: auto;
        padding: 1;
        margin: 1;
        color: $text;
    }

    .message.error {
        background: $error;
    }

    .message.success {
        background: $success;
    }

    .dialog-container, .help-container {
        border: solid $primary;
        background: $surface;
        padding: 2;
        margin: 2;
    }

    .dialog-container {
        width: 60%;
        max-width: 80;
        height: auto;
    }

    .help-container {
        width: 80%;
        max-width: 120;
        height: 80%;
    }

    .dialog-title {
        text-align: center;
        background: $primary;
        padding: 1;
        margin-bottom: 1;
    }
    """

    BINDINGS = [
        Binding("ctrl+q", "quit", "Quit", priority=True),
        Binding("ctrl+c", "quit", "Quit", priority=True),
        Binding("ctrl+s", "save_config", "Save"),
        Binding("escape", "back", "Back"),
        Binding("f1", "help", "Help"),
    ]

    TITLE = "GA-BP Wizard"
    SUB_TITLE = "Configure a volatility forecasting run"

    current_step = reactive(0)

    def __init__(self, run_config: Optional[RunConfig] = None, config_path: Optional[str] = None):
        super().__init__()
        self.run_config = run_config or RunConfig()
        self.config_path = config_path
        self.command_builder = TrainCommandBuilder()
        self.config_modified = False

        self.steps = [
            ("Data & Features", DataStep),
            ("Network & Training", ModelStep),
            ("Genetic Algorithm", GaStep),
            ("Review", ReviewStep),
        ]
        self.total_steps = len(self.steps)

    def compose(self) -> ComposeResult:
        yield Header()
        with Vertical(id="wizard"):
            yield Static("", id="progress")
            yield Container(id="content-area")
            with Horizontal(id="nav"):
                yield Button("← Back", id="back-button")
                yield Button("Next →", id="next-button", variant="primary")
                yield Button("Save Config", id="save-button")
                yield Button("Help", id="help-button")
        yield Footer()

    def on_mount(self) -> None:
        self._mount_step()

    def _base(self, selector: str, expect_type=None):
        """Query the wizard screen even while a dialog is on top of it"""
        base = self.screen_stack[0]
        return base.query_one(selector, expect_type) if expect_type else base.query_one(selector)

    def _progress_text(self) -> str:
        name = self.steps[self.current_step][0]
        unsaved = "   ● unsaved changes" if self.config_modified else ""
        return f"Step {self.current_step + 1} of {self.total_steps}: {name}{unsaved}"

    def _mount_step(self) -> None:
        """Replace the content area with the widget for the current step"""
        step_class = self.steps[self.current_step][1]
        content = self._base("#content-area")
        content.remove_children()
        content.mount(step_class(wizard_app=self, run_config=self.run_config))

        self._base("#progress", Static).update(self._progress_text())
        self._base("#back-button", Button).disabled = self.current_step == 0
        last = self.current_step == self.total_steps - 1
        self._base("#next-button", Button).label = "Save & Finish" if last else "Next →"

    def _current_widget(self):
        step_class = self.steps[self.current_step][1]
        mounted = self._base("#content-area").query(step_class)
        return mounted.first() if mounted else None

    def update_config(self, run_config: RunConfig) -> None:
        """Replace the working configuration after a step validated it"""
        if run_config.to_dict() != self.run_config.to_dict():
            self.config_modified = True
        self.run_config = run_config

    def action_next(self) -> None:
        step = self._current_widget()
        if step is not None and hasattr(step, 'validate') and not step.validate():
            return

        if self.current_step < self.total_steps - 1:
            self.current_step += 1
            self._mount_step()
        else:
            self._finish()

    def action_back(self) -> None:
        if self.current_step > 0:
            self.current_step -= 1
            self._mount_step()

    def action_save_config(self) -> None:
        self.push_screen(SaveConfigScreen(self))

    def action_help(self) -> None:
        self.push_screen(HelpScreen())

    def _finish(self) -> None:
        valid, errors = self.run_config.is_valid()
        if not valid:
            self.show_error_message("Configuration errors", errors)
            return
        self.action_save_config()

    def save_config(self, path: str) -> Path:
        target = self.run_config.save(path)
        self.config_path = str(target)
        self.config_modified = False
        self._base("#progress", Static).update(self._progress_text())

        step = self._current_widget()
        if isinstance(step, ReviewStep):
            step.refresh_review()
        return target

    def show_error_message(self, title: str, messages: List[str]) -> None:
        self.push_screen(MessageScreen(title, "\n".join(messages)))

    def show_success_message(self, title: str, message: str) -> None:
        self.push_screen(MessageScreen(title, message, kind="success"))

    def on_button_pressed(self, event: Button.Pressed) -> None:
        actions = {
            'next-button': self.action_next,
            'back-button': self.action_back,
            'save-button': self.action_save_config,
            'help-button': self.action_help,
        }
        action = actions.get(event.button.id)
        if action is not None:
            action()


def run_wizard(run_config: Optional[RunConfig] = None, config_path: Optional[str] = None):
    """Entry point to run the wizard"""
    GabpWizardApp(run_config, config_path).run()
