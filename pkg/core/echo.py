from dataclasses import dataclass
from math import floor, pi
from typing import Sequence, Tuple
import logging

import numpy as np
from scipy.linalg import eigh, eigvalsh

from core.dynamics import evolve_delta, fundamental_period, phase_frequencies, reduce_time
from core.errors import DimensionMismatch, EmptyInput, InvalidGrid, InvalidParams, NotPSD
from core.fock import DensityMatrix, PureState, to_density

logger = logging.getLogger(__name__)

# Eigenvalues below -PSD_REPAIR_TOLERANCE are an error, the rest are clipped at 0
PSD_REPAIR_TOLERANCE = 1e-8
# Relative tolerance on phase gaps when grouping resonant frequencies
RESONANCE_TOLERANCE = 1e-12
# Time samples evaluated per vectorised block
ECHO_CHUNK_SIZE = 4096


@dataclass(frozen=True, eq=False)
class EchoSeries:
    """Sampled O(t) with cumulative mean and population-variance tracks"""

    times: np.ndarray
    values: np.ndarray
    cum_mean: np.ndarray
    cum_var: np.ndarray

    @property
    def final_mean(self) -> float:
        return float(self.cum_mean[-1])

    @property
    def final_variance(self) -> float:
        return float(self.cum_var[-1])


@dataclass(frozen=True)
class SaturationPoint:
    sigma_n: float
    mean_infty: float
    state_label: str

    def __post_init__(self):
        if not self.sigma_n > 0:
            raise InvalidParams(f"sigma_n must be > 0 for {self.state_label}, got {self.sigma_n}")


def _echo_values(
    psi0: PureState, gamma: float, epsilon: float, delta_scale: float, times: np.ndarray, chunk_size: int
) -> np.ndarray:
    """|sum_n p_n exp(-i t theta_n)|^2 for every sample time"""
    populations = psi0.populations
    occupied = populations > 0
    weights = populations[occupied]
    theta = phase_frequencies(gamma, epsilon, delta_scale, psi0.n_max)[occupied]
    period = fundamental_period(gamma, epsilon, delta_scale)

    values = np.empty(times.size, dtype=float)
    for start in range(0, times.size, chunk_size):
        block = reduce_time(times[start : start + chunk_size], period)
        amplitude = np.exp(-1j * np.outer(block, theta)) @ weights
        values[start : start + chunk_size] = np.abs(amplitude) ** 2
    return values


def echo_pure(psi0: PureState, gamma: float, epsilon: float, delta_scale: float = 1.0, t: float = 0.0) -> float:
    """Loschmidt echo Tr(rho(0) rho_Delta(t)) of a pure state from its populations"""
    times = np.array([t], dtype=float)
    return float(_echo_values(psi0, gamma, epsilon, delta_scale, times, ECHO_CHUNK_SIZE)[0])


def echo_dense(psi0: PureState, gamma: float, epsilon: float, delta_scale: float = 1.0, t: float = 0.0) -> float:
    """Same echo by full matrix contraction; slow, kept as a cross-check"""
    rho0 = to_density(psi0)
    rho_t = evolve_delta(rho0, gamma, epsilon, delta_scale, t)
    return float(np.real(np.sum(rho0.entries * rho_t.entries.T)))


def _spectral_floor(values: np.ndarray) -> float:
    return 64 * np.finfo(float).eps * values.size * max(1.0, float(np.max(np.abs(values))))


def _psd_sqrt(rho: DensityMatrix) -> np.ndarray:
    values, vectors = eigh(rho.entries)
    if values[0] < -PSD_REPAIR_TOLERANCE:
        raise NotPSD(f"Eigenvalue {values[0]:.3e} below -{PSD_REPAIR_TOLERANCE:.0e}")
    values = np.where(values < _spectral_floor(values), 0.0, values)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def echo_general(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2"""
    if rho1.dim != rho2.dim:
        raise DimensionMismatch(f"Cannot compare dimensions {rho1.dim} and {rho2.dim}")
    smallest = float(eigvalsh(rho2.entries)[0])
    if smallest < -PSD_REPAIR_TOLERANCE:
        raise NotPSD(f"Eigenvalue {smallest:.3e} below -{PSD_REPAIR_TOLERANCE:.0e}")

    root = _psd_sqrt(rho1)
    inner = root @ rho2.entries @ root
    inner = 0.5 * (inner + inner.conj().T)
    values = eigvalsh(inner)
    values = np.where(values < _spectral_floor(values), 0.0, values)
    fidelity = float(np.sum(np.sqrt(values)) ** 2)
    return min(max(fidelity, 0.0), 1.0)


def cumulative_stats(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Running mean and population variance of values[0..i], one serial prefix pass"""
    counts = np.arange(1, values.size + 1, dtype=float)
    centered = values - values[0]
    running = np.cumsum(centered) / counts
    cum_var = np.cumsum(centered**2) / counts - running**2
    return values[0] + running, np.maximum(cum_var, 0.0)


def echo_series(
    psi0: PureState,
    gamma: float,
    epsilon: float,
    delta_scale: float = 1.0,
    t_max: float = 2000.0,
    dt: float = 0.01,
    chunk_size: int = ECHO_CHUNK_SIZE,
) -> EchoSeries:
    """O(t_i) at t_i = i*dt, i = 1..floor(t_max/dt), with cumulative statistics"""
    if not dt > 0 or not t_max >= dt:
        raise InvalidGrid(f"Need dt > 0 and t_max >= dt, got dt={dt}, t_max={t_max}")
    count = floor(t_max / dt + 1e-9)
    times = dt * np.arange(1, count + 1, dtype=float)
    logger.debug(f"Sampling echo at {count} times, gamma={gamma}, epsilon={epsilon}")
    values = _echo_values(psi0, gamma, epsilon, delta_scale, times, chunk_size)
    cum_mean, cum_var = cumulative_stats(values)
    for array in (times, values, cum_mean, cum_var):
        array.setflags(write=False)
    return EchoSeries(times=times, values=values, cum_mean=cum_mean, cum_var=cum_var)


def windowed_stats(series: EchoSeries, fraction: float = 0.5) -> Tuple[float, float]:
    """Mean and variance over the trailing fraction of the samples"""
    if not 0 < fraction <= 1:
        raise InvalidGrid(f"Window fraction must lie in (0, 1], got {fraction}")
    start = int(series.values.size * (1 - fraction))
    window = series.values[start:]
    if window.size == 0:
        raise EmptyInput("Window holds no samples")
    return float(np.mean(window)), float(np.var(window))


def fit_decay_rate(series: EchoSeries, t_window: float) -> float:
    """Gamma of the short-time decay O(t) ~ exp(-Gamma t), by a log-linear fit"""
    mask = (series.times <= t_window) & (series.values > 0)
    if np.count_nonzero(mask) < 2:
        raise EmptyInput(f"Fewer than two positive samples below t={t_window}")
    slope = np.polyfit(series.times[mask], np.log(series.values[mask]), 1)[0]
    return float(-slope)


def resonance_spectrum(
    psi0: PureState, gamma: float, epsilon: float, delta_scale: float = 1.0
) -> Tuple[np.ndarray, np.ndarray]:
    """Group O(t) = sum_d S_d exp(-i d t) by distinct gap d; returns (d, S_d)"""
    populations = psi0.populations
    occupied = populations > 0
    weights = populations[occupied]
    theta = phase_frequencies(gamma, epsilon, delta_scale, psi0.n_max)[occupied]

    gaps = (theta[:, None] - theta[None, :]).ravel()
    pair_weights = np.outer(weights, weights).ravel()
    order = np.argsort(gaps, kind="stable")
    gaps, pair_weights = gaps[order], pair_weights[order]

    tolerance = RESONANCE_TOLERANCE * np.maximum(1.0, np.abs(gaps))
    starts = np.empty(gaps.size, dtype=bool)
    starts[0] = True
    starts[1:] = np.diff(gaps) > tolerance[1:]
    group = np.cumsum(starts) - 1
    return gaps[starts], np.bincount(group, weights=pair_weights)


def _asymptotic_moments(psi0: PureState, gamma: float, epsilon: float) -> Tuple[float, float]:
    frequencies, strengths = resonance_spectrum(psi0, gamma, epsilon)
    zero = int(np.argmin(np.abs(frequencies)))
    mean = float(strengths[zero])
    variance = float(np.sum(strengths**2)) - mean**2
    return mean, max(variance, 0.0)


def asymptotic_mean_oracle(psi0: PureState, gamma: float, epsilon: float) -> float:
    """Long-time average of O(t): total weight of the resonant (zero-gap) pairs"""
    return _asymptotic_moments(psi0, gamma, epsilon)[0]


def asymptotic_variance_oracle(psi0: PureState, gamma: float, epsilon: float) -> float:
    """Long-time variance of O(t): sum of S_d^2 over non-zero gaps"""
    return _asymptotic_moments(psi0, gamma, epsilon)[1]


def fit_saturation(points: Sequence[SaturationPoint]) -> float:
    """Least-squares mu for Z(sigma) = mu / (pi sigma_N)"""
    if not points:
        raise EmptyInput("Saturation fit needs at least one point")
    x = np.array([1.0 / (pi * point.sigma_n) for point in points])
    y = np.array([point.mean_infty for point in points])
    return float(np.dot(x, y) / np.dot(x, x))
