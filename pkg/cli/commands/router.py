import typer

from cli.commands.echo import echo
from cli.commands.roughness import roughness, roughness_ensemble_command
from cli.commands.saturation import saturation
from cli.commands.tables import tables
from cli.commands.wigner import wigner


def register_commands(app: typer.Typer) -> typer.Typer:
    """Attach every subcommand to the application"""

    # Echo statistics
    app.command("echo")(echo)
    app.command("tables")(tables)
    app.command("saturation")(saturation)

    # Phase space
    app.command("roughness")(roughness)
    app.command("roughness-ensemble")(roughness_ensemble_command)
    app.command("wigner")(wigner)
    return app
