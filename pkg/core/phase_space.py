"""
Phase-space representations on a uniform (q, p) lattice, with hbar = 1.

Conventions: beta = (q + i p)/sqrt(2), Wigner kernels normalised so that
the integral of W{|m><n|} over dq dp is delta_{mn}, Husimi H = <beta|rho|beta>/(2 pi).
"""

from dataclasses import dataclass
from math import pi, sqrt
from typing import Iterator, Optional, Tuple, Union
import logging

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import gammaln

from core.errors import GridTooCoarse, InvalidGrid
from core.fock import DensityMatrix, FockOperator, number_stats

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 201
GRID_MARGIN = 4.0
# Trace-reproduction self-test threshold
TRACE_TOLERANCE = 1e-3

OperatorLike = Union[FockOperator, np.ndarray]


@dataclass(frozen=True)
class PhaseSpaceGrid:
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    n_q: int = DEFAULT_GRID_POINTS
    n_p: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if not self.q_max > self.q_min or not self.p_max > self.p_min:
            raise InvalidGrid(
                f"Empty phase-space window q=[{self.q_min}, {self.q_max}], p=[{self.p_min}, {self.p_max}]"
            )
        for name in ("n_q", "n_p"):
            count = getattr(self, name)
            if count < 3 or count % 2 == 0:
                raise InvalidGrid(f"{name} must be an odd integer >= 3, got {count}")

    @classmethod
    def symmetric(cls, half_width: float, points: int = DEFAULT_GRID_POINTS) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @classmethod
    def centered(cls, q0: float, p0: float, half_width: float, points: int = DEFAULT_GRID_POINTS) -> "PhaseSpaceGrid":
        return cls(q0 - half_width, q0 + half_width, p0 - half_width, p0 + half_width, points, points)

    @property
    def q(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n_q - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.n_p - 1)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Q[i, j] = q_i, P[i, j] = p_j"""
        return np.meshgrid(self.q, self.p, indexing="ij")

    def beta(self) -> np.ndarray:
        q, p = self.mesh()
        return (q + 1j * p) / sqrt(2)

    def integrate(self, values: np.ndarray):
        """Trapezoidal rule over both axes"""
        return trapezoid(trapezoid(values, dx=self.dp, axis=1), dx=self.dq)


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    grid: PhaseSpaceGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.n_q, self.grid.n_p):
            raise InvalidGrid(f"Field shape {self.values.shape} does not match grid {(self.grid.n_q, self.grid.n_p)}")

    def real(self) -> np.ndarray:
        return np.real(self.values)

    def imag_defect(self) -> float:
        return float(np.max(np.abs(np.imag(self.values))))

    def integral(self) -> float:
        return float(np.real(self.grid.integrate(self.values)))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __add__(self, other: "PhaseSpaceField") -> "PhaseSpaceField":
        _require_same_grid(self, other)
        return PhaseSpaceField(self.grid, self.values + other.values)


def _require_same_grid(a: PhaseSpaceField, b: PhaseSpaceField) -> None:
    if a.grid != b.grid:
        raise InvalidGrid("Fields are sampled on different grids")


def _entries(op: OperatorLike) -> np.ndarray:
    return op.entries if isinstance(op, FockOperator) else np.asarray(op, dtype=complex)


def _kernel_band(beta: np.ndarray, k: int, count: int) -> Iterator[np.ndarray]:
    """Yield Pi_{m, m+k}(beta) for m = 0..count-1.

    Pi_{m, m+k} = (-1)^m sqrt(m!/(m+k)!) (2 beta)^k exp(-2|beta|^2) L_m^k(4|beta|^2) / pi,
    built by the three-term Laguerre recurrence on the normalised sequence so that
    neither the factorial ratio nor the polynomial is ever formed on its own.
    """
    x = 4.0 * np.abs(beta) ** 2
    log_magnitude = -0.5 * x - 0.5 * gammaln(k + 1)
    if k:
        with np.errstate(divide="ignore"):
            log_magnitude = log_magnitude + k * np.log(2.0 * np.abs(beta))
    previous = np.zeros_like(beta)
    current = np.exp(log_magnitude) * np.exp(1j * k * np.angle(beta)) / pi
    yield current
    for m in range(count - 1):
        scale = 1.0 / sqrt((m + 1) * (m + k + 1))
        damping = sqrt(m * (m + k)) * scale
        previous, current = current, -((2 * m + 1 + k - x) * scale * current + damping * previous)
        yield current


def pi_mn(beta, m: int, n: int):
    """Wigner kernel Pi_{m,n}(beta) = W{|m><n|}; Pi_{n,m} is its complex conjugate"""
    if m < 0 or n < 0:
        raise InvalidGrid(f"Fock indices must be >= 0, got ({m}, {n})")
    beta_array = np.asarray(beta, dtype=complex)
    low, k = min(m, n), abs(n - m)
    kernel = None
    for kernel in _kernel_band(beta_array, k, low + 1):
        pass
    value = kernel if m <= n else np.conj(kernel)
    return value if value.ndim else complex(value)


def _check_trace(grid: PhaseSpaceGrid, values: np.ndarray, expected: complex, what: str) -> None:
    integral = complex(grid.integrate(values))
    miss = abs(integral - expected)
    if miss > TRACE_TOLERANCE:
        raise GridTooCoarse(f"{what} integrates to {integral:.6f}, expected {expected:.6f} (miss {miss:.2e})")


def wigner(op: OperatorLike, grid: PhaseSpaceGrid, check: bool = True) -> PhaseSpaceField:
    """W{A} = sum_{m,n} A_{m,n} Pi_{m,n}, linear in A"""
    entries = _entries(op)
    dim = entries.shape[0]
    beta = grid.beta()
    values = np.zeros(beta.shape, dtype=complex)

    for k in range(dim):
        upper = np.diagonal(entries, k)
        lower = np.diagonal(entries, -k)
        used = np.flatnonzero((upper != 0) | (lower != 0))
        if used.size == 0:
            continue
        for m, kernel in enumerate(_kernel_band(beta, k, int(used[-1]) + 1)):
            if upper[m] != 0:
                values += upper[m] * kernel
            if k and lower[m] != 0:
                values += lower[m] * np.conj(kernel)

    if check:
        _check_trace(grid, values, complex(np.trace(entries)), "Wigner field")
    return PhaseSpaceField(grid, values)


def husimi(rho: DensityMatrix, grid: PhaseSpaceGrid, check: bool = True) -> PhaseSpaceField:
    """H(q, p) = <beta|rho|beta>/(2 pi) from coherent-state overlaps"""
    beta = grid.beta().ravel()
    overlaps = np.empty((rho.dim, beta.size), dtype=complex)
    overlaps[0] = np.exp(-0.5 * np.abs(beta) ** 2)
    for n in range(rho.dim - 1):
        overlaps[n + 1] = overlaps[n] * beta / sqrt(n + 1)
    values = np.real(np.sum(overlaps.conj() * (rho.entries @ overlaps), axis=0)) / (2 * pi)
    values = values.reshape(grid.n_q, grid.n_p)
    if check:
        _check_trace(grid, values, rho.trace(), "Husimi field")
    return PhaseSpaceField(grid, values.astype(complex))


def grid_auto(rho: DensityMatrix, points: int = DEFAULT_GRID_POINTS) -> PhaseSpaceGrid:
    """Square grid of half-width sqrt(2(n_eff + 1)) + 4 with n_eff = <N> + 3 sigma_N"""
    stats = number_stats(rho)
    n_eff = stats.mean + 3.0 * sqrt(stats.variance)
    return PhaseSpaceGrid.symmetric(sqrt(2.0 * (n_eff + 1.0)) + GRID_MARGIN, points)


def overlap_integral(a: PhaseSpaceField, b: PhaseSpaceField) -> float:
    """2 pi times the integral of W_a W_b, i.e. Tr(AB) for Hermitian A, B"""
    _require_same_grid(a, b)
    return float(2 * pi * a.grid.integrate(a.real() * b.real()))


def roughness(rho: DensityMatrix, grid: Optional[PhaseSpaceGrid] = None) -> float:
    """R = sqrt(2 pi * integral |W - H|^2)"""
    grid = grid or grid_auto(rho)
    difference = wigner(rho, grid).real() - husimi(rho, grid).real()
    squared = 2 * pi * float(grid.integrate(difference**2))
    return sqrt(max(squared, 0.0))


def richardson_roughness(rho: DensityMatrix, points: int = DEFAULT_GRID_POINTS) -> Tuple[float, float, float]:
    """Roughness on a grid and on its 2x refinement, plus the h^2 extrapolation"""
    coarse_grid = grid_auto(rho, points)
    fine_grid = grid_auto(rho, 2 * points - 1)
    coarse = roughness(rho, coarse_grid)
    fine = roughness(rho, fine_grid)
    return coarse, fine, fine + (fine - coarse) / 3.0


def wigner_negativity(field: PhaseSpaceField) -> float:
    """Volume of the negative part of a real field"""
    values = field.real()
    return float(field.grid.integrate(0.5 * (np.abs(values) - values)))
