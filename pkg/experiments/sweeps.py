"""
Experiment drivers behind the CLI subcommands.

Each driver takes a resolved ExperimentConfig, fans independent entries out
over a thread pool and returns a pandas DataFrame in submission order, so a
rerun with the same config yields the same table.
"""

from concurrent.futures import ThreadPoolExecutor
from math import sqrt
from typing import Callable, Dict, Iterable, List, Optional, Tuple, TypeVar
import logging

import numpy as np
import pandas as pd

from core.dynamics import evolve, rotating_frame
from core.echo import (
    SaturationPoint,
    asymptotic_mean_oracle,
    asymptotic_variance_oracle,
    cumulative_stats,
    echo_series,
    fit_saturation,
)
from core.errors import DegenerateSweep
from core.fock import (
    PureState,
    coherent_state,
    number_stats,
    phase_state,
    random_pure_state,
    split_diagonal,
    to_density,
)
from core.overlap import field_energy, wigner_overlap_components
from core.phase_space import PhaseSpaceField, PhaseSpaceGrid, grid_auto, roughness, wigner, wigner_negativity
from experiments.config import ExperimentConfig, StateKind, WignerTarget
from experiments.reference import COHERENT_TABLE, PHASE_TABLE, load_reference_values
from experiments.selector import get_state, state_label

logger = logging.getLogger(__name__)

# Filled only for rows with a published value, missing elsewhere
REFERENCE_COLUMNS = ("reference_mean", "reference_var", "delta_mean", "delta_var")

Item = TypeVar("Item")
Result = TypeVar("Result")


def parallel_map(fn: Callable[[Item], Result], items: Iterable[Item], max_workers: int = 1) -> List[Result]:
    """Apply fn to every item, results in input order"""
    items = list(items)
    if max_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(fn, items))


######################################################
## Echo tables
######################################################


def replace_state(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return config.model_copy(update=changes)


def _table_states(config: ExperimentConfig) -> List[Tuple[str, Optional[str], PureState]]:
    coherent = replace_state(config, state=StateKind.COHERENT)
    phase = replace_state(config, state=StateKind.PHASE)
    reference_run = config.epsilon == 1 and config.delta_scale == 1
    return [
        (state_label(coherent), COHERENT_TABLE if reference_run and config.alpha == 2 else None, get_state(coherent)),
        (state_label(phase), PHASE_TABLE if reference_run and config.r == 6 else None, get_state(phase)),
    ]


def echo_tables(config: ExperimentConfig, max_workers: int = 1) -> pd.DataFrame:
    """Long-time mean/variance of O(t) for a coherent and a phase state over config.gammas"""
    reference = load_reference_values()
    jobs = [(label, table, psi, gamma) for label, table, psi in _table_states(config) for gamma in config.gammas]

    def run(job) -> Dict[str, object]:
        label, table, psi, gamma = job
        series = echo_series(psi, gamma, config.epsilon, config.delta_scale, config.t_max, config.dt)
        row: Dict[str, object] = {
            "state": label,
            "gamma": gamma,
            "mean_infty": series.final_mean,
            "var_infty": series.final_variance,
            "oracle_mean": asymptotic_mean_oracle(psi, gamma, config.epsilon),
            "oracle_var": asymptotic_variance_oracle(psi, gamma, config.epsilon),
        }
        published = reference.lookup(table, gamma) if table else None
        if published is not None:
            row["reference_mean"], row["reference_var"] = published
            row["delta_mean"] = series.final_mean - published[0]
            row["delta_var"] = series.final_variance - published[1]
        logger.debug(f"{label}, gamma={gamma}: mean {series.final_mean:.4f}, var {series.final_variance:.4f}")
        return row

    frame = pd.DataFrame(parallel_map(run, jobs, max_workers))
    if "reference_mean" in frame.columns:
        unmatched = int(frame["reference_mean"].isna().sum())
        if unmatched:
            logger.warning(f"{unmatched} of {len(frame)} rows have no reference value, comparison left empty")
    return frame


######################################################
## Saturation sweep
######################################################


def saturation_sweep(config: ExperimentConfig, max_workers: int = 1) -> Tuple[pd.DataFrame, float]:
    """Long-time means of phase and coherent states against sigma_N, plus the fitted mu"""
    states: List[Tuple[str, PureState]] = [(f"phase(r={r})", phase_state(r)) for r in config.sweep_r]
    states += [(f"coherent(alpha={alpha:g})", coherent_state(alpha)) for alpha in config.sweep_alpha]
    if len(states) < 2:
        raise DegenerateSweep(f"Saturation fit needs at least 2 states, got {len(states)}")

    def run(entry: Tuple[str, PureState]) -> SaturationPoint:
        label, psi = entry
        sigma = sqrt(number_stats(to_density(psi)).variance)
        series = echo_series(psi, config.gamma, config.epsilon, config.delta_scale, config.t_max, config.dt)
        return SaturationPoint(sigma_n=sigma, mean_infty=series.final_mean, state_label=label)

    points = parallel_map(run, states, max_workers)
    sigmas = np.array([point.sigma_n for point in points])
    if np.allclose(sigmas, sigmas[0]):
        raise DegenerateSweep("All sweep states share the same sigma_N")

    mu = fit_saturation(points)
    frame = pd.DataFrame(
        {
            "sigma_n": sigmas,
            "mean_infty": [point.mean_infty for point in points],
            "fit": mu / (np.pi * sigmas),
            "label": [point.state_label for point in points],
        }
    )
    return frame, mu


######################################################
## Roughness
######################################################


def sample_times(config: ExperimentConfig) -> np.ndarray:
    return np.linspace(0.0, config.t_max, config.samples)


def config_grid(config: ExperimentConfig, psi: PureState) -> PhaseSpaceGrid:
    if config.half_width is not None:
        return PhaseSpaceGrid.symmetric(config.half_width, config.grid_points)
    return grid_auto(to_density(psi), config.grid_points)


def roughness_series(config: ExperimentConfig, negativity: bool = False, max_workers: int = 1) -> pd.DataFrame:
    """R(t) at config.samples times in [0, t_max], taken in the frame rotating with omega"""
    psi = get_state(config)
    rho0 = to_density(psi)
    params = config.gamma_params()
    grid = config_grid(config, psi)
    times = sample_times(config)

    def run(t: float) -> Tuple[float, float]:
        rho_t = evolve(rho0, params, float(t))
        if params.omega != 0:
            rho_t = rotating_frame(rho_t, params.omega, float(t))
        volume = wigner_negativity(wigner(rho_t, grid)) if negativity else 0.0
        return roughness(rho_t, grid), volume

    results = parallel_map(run, times, max_workers)
    values = np.array([value for value, _ in results])
    cum_mean, cum_var = cumulative_stats(values)
    frame = pd.DataFrame({"t": times, "R": values, "cum_mean": cum_mean, "cum_var": cum_var})
    if negativity:
        frame["negativity"] = [volume for _, volume in results]
    return frame


def _ensemble_entry(config: ExperimentConfig, basis_size: int, seed: int) -> float:
    rho0 = to_density(random_pure_state(basis_size - 1, seed))
    params = config.gamma_params()
    grid = grid_auto(rho0, config.grid_points)
    values = [roughness(evolve(rho0, params, float(t)), grid) for t in sample_times(config)]
    return float(np.mean(values))


def roughness_ensemble(config: ExperimentConfig, max_workers: int = 1) -> pd.DataFrame:
    """Ensemble mean and spread of the time-averaged roughness of random states, per basis size"""
    jobs = [(size, config.seed + i) for size in config.basis_sizes for i in range(config.seeds_per_size)]
    means = parallel_map(lambda job: _ensemble_entry(config, *job), jobs, max_workers)

    rows = []
    for size in config.basis_sizes:
        values = np.array([mean for (entry_size, _), mean in zip(jobs, means) if entry_size == size])
        rows.append(
            {
                "basis_size": size,
                "ensemble_mean": float(np.mean(values)),
                "ensemble_spread": float(np.std(values)),
                "seeds": values.size,
            }
        )
    frame = pd.DataFrame(rows)
    monotone = bool(np.all(np.diff(frame["ensemble_mean"].to_numpy()) > 0))
    logger.info(f"Ensemble roughness {'grows' if monotone else 'does not grow'} monotonically with basis size")
    return frame


######################################################
## Wigner grids
######################################################


def wigner_fields(config: ExperimentConfig) -> Dict[WignerTarget, PhaseSpaceField]:
    """Requested Wigner targets at time config.t on a shared grid"""
    psi = get_state(config)
    grid = config_grid(config, psi)
    fields: Dict[WignerTarget, PhaseSpaceField] = {}

    state_targets = {WignerTarget.RHO, WignerTarget.RHO_D, WignerTarget.RHO_ND}
    if state_targets.intersection(config.targets):
        rho_t = evolve(to_density(psi), config.gamma_params(), config.t)
        diagonal, non_diagonal = split_diagonal(rho_t)
        fields[WignerTarget.RHO_D] = wigner(diagonal, grid)
        fields[WignerTarget.RHO_ND] = wigner(non_diagonal, grid)
        fields[WignerTarget.RHO] = wigner(rho_t, grid)

    overlap_targets = {WignerTarget.ROP, WignerTarget.ROP_D, WignerTarget.ROP_ND}
    if overlap_targets.intersection(config.targets):
        components = wigner_overlap_components(psi, config.gamma, config.epsilon, config.delta_scale, config.t, grid)
        fields[WignerTarget.ROP] = components.total
        fields[WignerTarget.ROP_D] = components.diagonal
        fields[WignerTarget.ROP_ND] = components.non_diagonal

    for target, field in fields.items():
        logger.debug(f"{target.value}: max|W| {field.max_abs():.4e}, energy {field_energy(field):.4e}")
    return {target: fields[target] for target in config.targets}


def field_frame(field: PhaseSpaceField) -> pd.DataFrame:
    q, p = field.grid.mesh()
    return pd.DataFrame({"q": q.ravel(), "p": p.ravel(), "value": field.real().ravel()})


def grid_header(config: ExperimentConfig, grid: PhaseSpaceGrid) -> Dict[str, str]:
    header = {
        "grid": f"q=[{grid.q_min:.6g}, {grid.q_max:.6g}] x p=[{grid.p_min:.6g}, {grid.p_max:.6g}], "
        f"{grid.n_q}x{grid.n_p} points",
    }
    header.update(config.provenance())
    return header
