import logging

import typer
from rich.logging import RichHandler

from cli.commands.router import register_commands
from cli.settings import echo_settings


def configure_logging() -> None:
    logging.basicConfig(
        level=echo_settings.log_level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
    )


def create_app() -> typer.Typer:
    """Create the gamma-echo Typer App"""

    # Create Typer App
    app: typer.Typer = typer.Typer(
        name="gamma-echo",
        help="Loschmidt echo, roughness and Wigner-field experiments for the gamma oscillator.",
        no_args_is_help=True,
        add_completion=False,
    )

    @app.callback()
    def main() -> None:
        configure_logging()

    # Add subcommands
    return register_commands(app)


# Create the Typer app
app = create_app()

if __name__ == "__main__":
    app()
