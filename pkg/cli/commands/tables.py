import logging

import pandas as pd
from rich.console import Console
from rich.table import Table

from cli.commands.common import (
    AlphaOption,
    ConfigOption,
    DtOption,
    EpsilonOption,
    FormatOption,
    OutOption,
    ROption,
    TMaxOption,
    export,
    handle_errors,
    resolve_config,
)
from cli.settings import echo_settings
from experiments.reference import load_reference_values
from experiments.sweeps import REFERENCE_COLUMNS, echo_tables

logger = logging.getLogger(__name__)


def _cell(value: object) -> str:
    if isinstance(value, str):
        return value
    return "-" if pd.isna(value) else f"{value:.4f}"


def tables(
    config_path: ConfigOption = None,
    epsilon: EpsilonOption = None,
    alpha: AlphaOption = None,
    r: ROption = None,
    t_max: TMaxOption = None,
    dt: DtOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
) -> None:
    """Long-time echo mean and variance per gamma, compared with the reference tables"""

    with handle_errors():
        config = resolve_config(
            config_path, epsilon=epsilon, alpha=alpha, r=r, t_max=t_max, dt=dt, out=out, format=output_format
        )
        frame = echo_tables(config, echo_settings.max_workers)
        export(frame, config, nullable=REFERENCE_COLUMNS)

    tolerance = load_reference_values().tolerance
    report = Table(title=f"Long-time echo statistics, T={config.t_max:g}, dt={config.dt:g}")
    for column in frame.columns:
        report.add_column(column, justify="left" if column == "state" else "right")
    for row in frame.itertuples(index=False):
        report.add_row(*(_cell(value) for value in row))
    Console().print(report)

    if "delta_mean" in frame.columns:
        compared = frame.dropna(subset=["delta_mean", "delta_var"])
        misses = compared[(compared["delta_mean"].abs() > tolerance) | (compared["delta_var"].abs() > tolerance)]
        for row in misses.itertuples(index=False):
            logger.warning(
                f"{row.state}, gamma={row.gamma:g}: mean off by {row.delta_mean:+.4f}, "
                f"variance off by {row.delta_var:+.4f} (resonance oracle {row.oracle_mean:.4f}/{row.oracle_var:.4f})"
            )
