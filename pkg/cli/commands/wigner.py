from typing import Annotated, List, Optional
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
    handle_errors,
    resolve_config,
    suffixed_path,
)
from core.overlap import field_energy
from experiments.config import WignerTarget
from experiments.export import write_table
from experiments.sweeps import field_frame, grid_header, wigner_fields

logger = logging.getLogger(__name__)


def wigner(
    config_path: ConfigOption = None,
    gamma: GammaOption = None,
    alpha: AlphaOption = None,
    r: ROption = None,
    t: Annotated[Optional[float], typer.Option("--t", help="Evaluation time")] = None,
    target: Annotated[
        Optional[List[WignerTarget]], typer.Option("--target", help="Field to export, repeatable")
    ] = None,
    grid_points: GridPointsOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
) -> None:
    """Wigner fields of rho(t) and of the overlap operator, split into diagonal and non-diagonal parts"""

    with handle_errors():
        config = resolve_config(
            config_path,
            gamma=gamma,
            alpha=alpha,
            r=r,
            t=t,
            targets=target or None,
            grid_points=grid_points,
            out=out,
            format=output_format,
        )
        fields = wigner_fields(config)
        for name, field in fields.items():
            header = grid_header(config, field.grid)
            header["target"] = name.value
            write_table(field_frame(field), suffixed_path(config.out, name.value), config.format, header)

    report = Table(title=f"Wigner fields at t={config.t:g}")
    for column in ("target", "integral", "max |value|", "energy"):
        report.add_column(column, justify="right")
    for name, field in fields.items():
        report.add_row(name.value, f"{field.integral():.6f}", f"{field.max_abs():.6f}", f"{field_energy(field):.6f}")
    Console().print(report)

    if WignerTarget.ROP_D in fields and WignerTarget.ROP_ND in fields:
        diagonal, non_diagonal = fields[WignerTarget.ROP_D], fields[WignerTarget.ROP_ND]
        dominated = non_diagonal.max_abs() > diagonal.max_abs()
        logger.info(f"Overlap field {'is' if dominated else 'is not'} dominated by its non-diagonal part")
