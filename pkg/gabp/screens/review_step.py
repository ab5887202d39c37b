from pathlib import Path

import pyperclip
from rich.text import Text
from textual.app import ComposeResult
from textual.containers import Horizontal, Vertical
from textual.widget import Widget
from textual.widgets import Button, Markdown, Static, TextArea


class ReviewStep(Widget):
    """Final step: summary, warnings, and the equivalent ``gabp train`` command"""

    DEFAULT_CSS = """
    ReviewStep {
        height: auto;
        padding: 1 2;
    }

    ReviewStep .section-title {
        text-align: center;
        background: $primary;
        padding: 1;
        margin: 1 0;
    }

    ReviewStep .panel {
        height: auto;
        padding: 1;
        margin: 1 0;
        border: round $primary;
    }

    ReviewStep #warnings-panel {
        border: round $warning;
        color: $warning;
    }

    ReviewStep TextArea {
        height: 6;
    }

    ReviewStep #review-actions {
        height: auto;
    }
    """

    def __init__(self, wizard_app, run_config):
        super().__init__()
        self.wizard_app = wizard_app
        self.run_config = run_config
        self.final_command = ""

    def compose(self) -> ComposeResult:
        yield Static("✅ Step 4: Review", classes="section-title")
        yield Markdown("Check the settings, save them as a config file, then run the command.")

        with Vertical(classes="panel"):
            yield Static(Text("📋 Run summary", style="bold"))
            yield Static("", id="run-summary")

        with Vertical(classes="panel", id="warnings-panel"):
            yield Static(Text("⚠️ Warnings", style="bold"))
            yield Static("", id="warnings-text")

        with Vertical(classes="panel"):
            yield Static(Text("🚀 Train command", style="bold"))
            yield TextArea("", id="command-display", read_only=True)
            yield Static(Text("📜 Run script", style="bold"))
            yield TextArea("", id="script-display", read_only=True)

        with Horizontal(id="review-actions"):
            yield Button("📋 Copy Command", id="copy-command-button", variant="primary")
            yield Button("💾 Save Config", id="save-config-button")
            yield Button("📤 Export Script", id="export-script-button")

    def on_mount(self) -> None:
        self.refresh_review()

    def refresh_review(self) -> None:
        """Rebuild the command, script, summary and warnings"""
        builder = self.wizard_app.command_builder
        config_path = self.wizard_app.config_path
        self.final_command = builder.build_command(self.run_config, config_path)

        self.query_one("#command-display", TextArea).text = self.final_command
        self.query_one("#script-display", TextArea).text = builder.generate_run_script(
            self.run_config, config_path)
        self.query_one("#run-summary", Static).update(self._summary())

        warnings = builder.validate_configuration(self.run_config, config_path)
        self.query_one("#warnings-panel").display = bool(warnings)
        self.query_one("#warnings-text", Static).update(Text("\n".join(f"• {w}" for w in warnings)))

    def _summary(self) -> Text:
        config = self.run_config
        builder = self.wizard_app.command_builder
        shape = config.shape
        if config.skip_ga:
            ga_line = "skipped (plain BP baseline)"
        else:
            ga = config.ga
            ga_line = (f"N={ga.pop_size}, {ga.generations} generations, pc={ga.crossover_prob:g}, "
                       f"pm={ga.mutation_prob:g}, genes in [{ga.gene_min:g}, {ga.gene_max:g}], "
                       f"{ga.mutation_variant.value} mutation")

        rows = [
            ("Data", config.data_path or "(not set)"),
            ("Window d", f"{config.vol_window}, train fraction {config.train_frac:.2f}"),
            ("Network", f"{shape.n_in}-{shape.n_hidden}-{shape.n_out}, "
                        f"{config.hidden_activation.value} hidden"),
            ("BP", f"{config.bp.epochs} epochs at lr {config.bp.lr:g}"),
            ("GA", ga_line),
            ("Fitness evaluations", f"{builder.estimate_evaluations(config):,}"),
            ("Total BP epochs", f"{builder.estimate_epochs(config):,}"),
            ("Seed", f"{config.seed}, output in {config.output_dir}"),
        ]
        summary = Text()
        for i, (label, value) in enumerate(rows):
            if i:
                summary.append("\n")
            summary.append(f"{label}: ", style="bold")
            summary.append(value)
        return summary

    def on_button_pressed(self, event: Button.Pressed) -> None:
        button_id = event.button.id

        if button_id == "copy-command-button":
            self._copy_command()
        elif button_id == "save-config-button":
            self.wizard_app.action_save_config()
        elif button_id == "export-script-button":
            self._export_script()

    def _copy_command(self) -> None:
        """Copy the train command to clipboard"""
        try:
            pyperclip.copy(self.final_command)
            self.wizard_app.show_success_message("Command Copied", "Train command copied to clipboard!")
        except pyperclip.PyperclipException:
            self.wizard_app.show_success_message("Copy Command",
                                                 f"Copy this command:\n\n{self.final_command}")

    def _export_script(self) -> None:
        """Write the run script into the working directory"""
        script = self.wizard_app.command_builder.generate_run_script(
            self.run_config, self.wizard_app.config_path)
        target = Path("run_gabp.sh")
        try:
            target.write_text(script)
            target.chmod(0o755)
        except OSError as e:
            self.wizard_app.show_error_message("Export Error", [f"Failed to write {target}: {e}"])
            return
        self.wizard_app.show_success_message("Script Exported", f"Run script written to {target}")
