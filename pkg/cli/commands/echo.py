from pathlib import Path
from typing import Annotated, Optional
import logging

import pandas as pd
import typer

from cli.commands.common import (
    AlphaOption,
    ConfigOption,
    DtOption,
    EpsilonOption,
    FormatOption,
    GammaOption,
    OutOption,
    ROption,
    SeedOption,
    TMaxOption,
    export,
    handle_errors,
    resolve_config,
)
from cli.settings import echo_settings
from core.echo import echo_series, fit_decay_rate, windowed_stats
from experiments.selector import get_state, state_label

logger = logging.getLogger(__name__)

# Short-time window for the exponential decay fit
DECAY_WINDOW = 1.0


def echo(
    config_path: ConfigOption = None,
    gamma: GammaOption = None,
    epsilon: EpsilonOption = None,
    alpha: AlphaOption = None,
    r: ROption = None,
    t_max: TMaxOption = None,
    dt: DtOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
    windowed: Annotated[bool, typer.Option("--windowed", help="Log trailing-window stats and decay rate")] = False,
) -> Optional[Path]:
    """Sample O(t) with cumulative mean and variance"""

    with handle_errors():
        config = resolve_config(
            config_path,
            gamma=gamma,
            epsilon=epsilon,
            alpha=alpha,
            r=r,
            t_max=t_max,
            dt=dt,
            seed=seed,
            out=out,
            format=output_format,
        )
        psi = get_state(config)
        logger.info(f"Echo of {state_label(config)}, gamma={config.gamma}, T={config.t_max}, dt={config.dt}")
        series = echo_series(
            psi, config.gamma, config.epsilon, config.delta_scale, config.t_max, config.dt, echo_settings.chunk_size
        )
        logger.info(f"Final cumulative mean {series.final_mean:.6f}, variance {series.final_variance:.6f}")

        if windowed:
            mean, variance = windowed_stats(series)
            logger.info(f"Trailing-half mean {mean:.6f}, variance {variance:.6f}")
            logger.info(f"Short-time decay rate {fit_decay_rate(series, DECAY_WINDOW):.6f}")

        frame = pd.DataFrame(
            {"t": series.times, "O": series.values, "cum_mean": series.cum_mean, "cum_var": series.cum_var}
        )
        return export(frame, config, {"state": state_label(config)})
