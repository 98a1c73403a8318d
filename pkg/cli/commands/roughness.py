from typing import Annotated
import logging

import typer
from rich.console import Console
from rich.table import Table

from cli.commands.common import (
    AlphaOption,
    ConfigOption,
    FormatOption,
    GammaOption,
    GridPointsOption,
    OutOption,
    ROption,
    SeedOption,
    TMaxOption,
    export,
    handle_errors,
    resolve_config,
)
from cli.settings import echo_settings
from experiments.selector import state_label
from experiments.sweeps import roughness_ensemble, roughness_series

logger = logging.getLogger(__name__)


def roughness(
    config_path: ConfigOption = None,
    gamma: GammaOption = None,
    alpha: AlphaOption = None,
    r: ROption = None,
    t_max: TMaxOption = None,
    grid_points: GridPointsOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
    negativity: Annotated[bool, typer.Option("--negativity", help="Add the Wigner negative volume per sample")] = False,
) -> None:
    """Roughness R(t) of the evolving state"""

    with handle_errors():
        config = resolve_config(
            config_path,
            gamma=gamma,
            alpha=alpha,
            r=r,
            t_max=t_max,
            grid_points=grid_points,
            seed=seed,
            out=out,
            format=output_format,
        )
        logger.info(f"Roughness of {state_label(config)} at {config.samples} times in [0, {config.t_max:g}]")
        frame = roughness_series(config, negativity=negativity, max_workers=echo_settings.max_workers)
        export(frame, config, {"state": state_label(config)})

    logger.info(f"R ranges over [{frame['R'].min():.4f}, {frame['R'].max():.4f}], mean {frame['R'].mean():.4f}")


def roughness_ensemble_command(
    config_path: ConfigOption = None,
    gamma: GammaOption = None,
    t_max: TMaxOption = None,
    grid_points: GridPointsOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
) -> None:
    """Time-averaged roughness of random states, ensemble statistics per basis size"""

    with handle_errors():
        config = resolve_config(
            config_path,
            gamma=gamma,
            t_max=t_max,
            grid_points=grid_points,
            seed=seed,
            out=out,
            format=output_format,
        )
        frame = roughness_ensemble(config, echo_settings.max_workers)
        export(frame, config)

    report = Table(title=f"Random-state roughness, gamma={config.gamma:g}, {config.seeds_per_size} seeds per size")
    for column in ("basis_size", "ensemble_mean", "ensemble_spread"):
        report.add_column(column, justify="right")
    for row in frame.itertuples(index=False):
        report.add_row(str(row.basis_size), f"{row.ensemble_mean:.4f}", f"{row.ensemble_spread:.4f}")
    Console().print(report)
