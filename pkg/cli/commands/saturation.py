import logging

from cli.commands.common import (
    ConfigOption,
    DtOption,
    EpsilonOption,
    FormatOption,
    GammaOption,
    OutOption,
    TMaxOption,
    export,
    handle_errors,
    resolve_config,
)
from cli.settings import echo_settings
from experiments.reference import load_reference_values
from experiments.sweeps import saturation_sweep

logger = logging.getLogger(__name__)


def saturation(
    config_path: ConfigOption = None,
    gamma: GammaOption = None,
    epsilon: EpsilonOption = None,
    t_max: TMaxOption = None,
    dt: DtOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
) -> None:
    """Fit Z(sigma_N) = mu / (pi sigma_N) over phase and coherent sweeps"""

    with handle_errors():
        config = resolve_config(
            config_path, gamma=gamma, epsilon=epsilon, t_max=t_max, dt=dt, out=out, format=output_format
        )
        frame, mu = saturation_sweep(config, echo_settings.max_workers)
        export(frame, config, {"mu": f"{mu:.16e}"})

    logger.info(f"Fitted mu = {mu:.4f} over {len(frame)} states (reference {load_reference_values().saturation_mu})")
