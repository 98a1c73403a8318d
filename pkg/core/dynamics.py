from dataclasses import dataclass
from math import isfinite, pi
from typing import Optional
import logging

import numpy as np

from core.errors import InvalidParams
from core.fock import DensityMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaParams:
    """Constants of H = hbar*omega*N + lam*hbar^(2 gamma) (N^2 + epsilon)^gamma"""

    omega: float = 0.0
    lam: float = 1.0
    gamma: float = 1.0
    epsilon: float = 1.0
    hbar: float = 1.0
    delta_scale: float = 1.0

    def __post_init__(self):
        _check_model(self.gamma, self.epsilon)
        if not self.hbar > 0:
            raise InvalidParams(f"hbar must be > 0, got {self.hbar}")
        for name in ("omega", "lam", "delta_scale"):
            if not isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite, got {getattr(self, name)}")


@dataclass(frozen=True, eq=False)
class PhaseSpectrum:
    energies: np.ndarray

    @property
    def n_max(self) -> int:
        return self.energies.size - 1


def _check_model(gamma: float, epsilon: float) -> None:
    if not epsilon > 0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    if not isfinite(gamma) or not isfinite(epsilon):
        raise InvalidParams(f"gamma and epsilon must be finite, got gamma={gamma}, epsilon={epsilon}")


def _is_whole(value: float) -> bool:
    return float(value).is_integer()


def _nonlinear_levels(gamma: float, epsilon: float, n_max: int) -> np.ndarray:
    """(n^2 + epsilon)^gamma, in exact integer arithmetic when both exponents are whole"""
    if _is_whole(gamma) and gamma >= 0 and _is_whole(epsilon):
        return np.array([float((n * n + int(epsilon)) ** int(gamma)) for n in range(n_max + 1)])
    levels = np.arange(n_max + 1, dtype=float)
    return np.power(levels**2 + epsilon, gamma)


def spectrum(params: GammaParams, n_max: int) -> PhaseSpectrum:
    """E_n = hbar*omega*n + lam*hbar^(2 gamma) (n^2 + epsilon)^gamma"""
    levels = np.arange(n_max + 1, dtype=float)
    nonlinear = params.lam * params.hbar ** (2 * params.gamma) * _nonlinear_levels(params.gamma, params.epsilon, n_max)
    energies = params.hbar * params.omega * levels + nonlinear
    energies.setflags(write=False)
    return PhaseSpectrum(energies)


def phase_frequencies(gamma: float, epsilon: float, delta_scale: float, n_max: int) -> np.ndarray:
    """theta_n = delta_scale * (n^2 + epsilon)^gamma, the Delta-H phase rates"""
    _check_model(gamma, epsilon)
    return delta_scale * _nonlinear_levels(gamma, epsilon, n_max)


def fundamental_period(gamma: float, epsilon: float, delta_scale: float = 1.0) -> Optional[float]:
    """2*pi/delta_scale when every theta gap is an integer multiple of delta_scale"""
    if delta_scale == 0:
        return None
    if _is_whole(gamma) and gamma > 0 and _is_whole(epsilon) and epsilon > 0:
        return 2 * pi / abs(delta_scale)
    return None


def reduce_time(t: np.ndarray, period: Optional[float]) -> np.ndarray:
    """Fold sample times into one period; identical phases, smaller rounding"""
    if period is None:
        return t
    return np.fmod(t, period)


def _conjugate_by_phases(rho: DensityMatrix, phases: np.ndarray) -> DensityMatrix:
    return DensityMatrix(phases[:, None] * rho.entries * phases.conj()[None, :])


def evolve(rho0: DensityMatrix, params: GammaParams, t: float) -> DensityMatrix:
    """A_{m,n} -> exp(-i t (E_m - E_n)/hbar) A_{m,n}"""
    energies = spectrum(params, rho0.n_max).energies
    return _conjugate_by_phases(rho0, np.exp(-1j * t * energies / params.hbar))


def evolve_delta(
    rho0: DensityMatrix, gamma: float, epsilon: float, delta_scale: float = 1.0, t: float = 0.0
) -> DensityMatrix:
    """Interaction-picture evolution under Delta-H, theta_n = delta_scale (n^2 + epsilon)^gamma"""
    theta = phase_frequencies(gamma, epsilon, delta_scale, rho0.n_max)
    t_reduced = float(reduce_time(np.asarray(t, dtype=float), fundamental_period(gamma, epsilon, delta_scale)))
    return _conjugate_by_phases(rho0, np.exp(-1j * t_reduced * theta))


def rotating_frame(rho: DensityMatrix, omega: float, t: float) -> DensityMatrix:
    """Remove the harmonic phase exp(-i omega t (m - n))"""
    levels = np.arange(rho.dim, dtype=float)
    return _conjugate_by_phases(rho, np.exp(1j * omega * t * levels))
