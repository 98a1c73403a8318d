from typing import List

from core.errors import ConfigError
from core.fock import PureState, cat_state, coherent_state, fock_state, phase_state, random_pure_state
from experiments.config import ExperimentConfig, StateKind


def get_available_states() -> List[str]:
    """Returns a list of all initial-state families."""
    return [kind.value for kind in StateKind]


def get_state(config: ExperimentConfig) -> PureState:
    kind = config.state
    if kind == StateKind.COHERENT:
        return coherent_state(config.complex_alpha, n_max=config.n_max)
    elif kind == StateKind.PHASE:
        return phase_state(config.r, n_max=config.n_max)
    elif kind == StateKind.FOCK:
        return fock_state(config.n, n_max=config.n_max)
    elif kind == StateKind.CAT:
        return cat_state(config.complex_alpha, sign=config.sign, n_max=config.n_max)
    elif kind == StateKind.RANDOM:
        if config.n_max is None:
            raise ConfigError("n_max", "random states need an explicit n_max")
        return random_pure_state(config.n_max, config.seed)

    raise ConfigError("state", f"{kind} not found, choose one of {get_available_states()}")


def state_label(config: ExperimentConfig) -> str:
    kind = config.state
    if kind == StateKind.COHERENT:
        return f"coherent(alpha={config.alpha:g})"
    elif kind == StateKind.PHASE:
        return f"phase(r={config.r})"
    elif kind == StateKind.FOCK:
        return f"fock(n={config.n})"
    elif kind == StateKind.CAT:
        return f"cat(alpha={config.alpha:g}, sign={config.sign:+d})"
    return f"random(n_max={config.n_max}, seed={config.seed})"
