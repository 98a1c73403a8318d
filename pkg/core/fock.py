from dataclasses import dataclass
from math import ceil, sqrt
from typing import Optional, Sequence, Tuple
import logging

import numpy as np
from scipy.linalg import eigvalsh
from scipy.stats import poisson

from core.errors import InvalidCutoff, InvalidState, NotPSD, TruncationTooSmall

logger = logging.getLogger(__name__)

# Truncation and invariant tolerances
TAIL_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10

# Cutoff rule for coherent and cat states: max(30, ceil(|a|^2 + 8|a|))
MIN_COHERENT_CUTOFF = 30
PHASE_STATE_HEADROOM = 2


def _frozen(values) -> np.ndarray:
    """Copy into a read-only complex array"""
    array = np.array(values, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Complex amplitudes c_0..c_{n_max} over the truncated Fock basis"""

    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = _frozen(self.amplitudes)
        if amplitudes.ndim != 1 or amplitudes.size == 0:
            raise InvalidState(f"Amplitudes must be a non-empty vector, got shape {amplitudes.shape}")
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidState(f"State norm {norm:.15f} differs from 1")
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def populations(self) -> np.ndarray:
        """Occupation probabilities p_n = |c_n|^2"""
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Square matrix over the truncated Fock basis, no state invariants"""

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise InvalidState(f"Operator must be a non-empty square matrix, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)
        self._validate()

    def _validate(self) -> None:
        pass

    @property
    def n_max(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermitian_defect(self) -> float:
        """Largest entrywise deviation from Hermiticity"""
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


@dataclass(frozen=True, eq=False)
class DensityMatrix(FockOperator):
    """Hermitian, unit-trace A_{m,n}; positivity is checked on demand"""

    def _validate(self) -> None:
        defect = self.hermitian_defect()
        if defect > HERMITIAN_TOLERANCE:
            raise InvalidState(f"Density matrix is not Hermitian (defect {defect:.3e})")
        trace = self.trace()
        if abs(trace - 1.0) > NORM_TOLERANCE:
            raise InvalidState(f"Density matrix trace {trace:.15f} differs from 1")

    def smallest_eigenvalue(self) -> float:
        return float(eigvalsh(self.entries)[0])

    def check_positive(self, tolerance: float = PSD_TOLERANCE) -> None:
        """Raise NotPSD when the spectrum dips below -tolerance"""
        smallest = self.smallest_eigenvalue()
        if smallest < -tolerance:
            raise NotPSD(f"Smallest eigenvalue {smallest:.3e} below -{tolerance:.0e}")


@dataclass(frozen=True)
class NumberStats:
    mean: float
    variance: float
    hs: float


def default_cutoff(alpha: complex) -> int:
    """Cutoff rule for coherent/cat states, grown until the Poisson tail is negligible"""
    modulus = abs(alpha)
    n_max = max(MIN_COHERENT_CUTOFF, ceil(modulus**2 + 8 * modulus))
    while poisson.sf(n_max, modulus**2) >= TAIL_TOLERANCE:
        n_max += 1
    return n_max


def tail_mass(psi: PureState) -> float:
    return float(1.0 - np.sum(psi.populations))


def _coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    amplitudes = np.empty(n_max + 1, dtype=complex)
    amplitudes[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(n_max):
        amplitudes[n + 1] = amplitudes[n] * alpha / sqrt(n + 1)
    return amplitudes


def coherent_state(alpha: complex, n_max: Optional[int] = None) -> PureState:
    """Glauber state c_n = exp(-|a|^2/2) a^n / sqrt(n!)"""
    if n_max is None:
        n_max = default_cutoff(alpha)
    if n_max < 0:
        raise InvalidCutoff(f"n_max must be >= 0, got {n_max}")
    tail = poisson.sf(n_max, abs(alpha) ** 2)
    if tail >= TAIL_TOLERANCE:
        raise TruncationTooSmall(f"Coherent state alpha={alpha} leaves tail mass {tail:.2e} beyond n_max={n_max}")
    return PureState(_coherent_amplitudes(alpha, n_max))


def phase_state(r: int, n_max: Optional[int] = None) -> PureState:
    """Uniform superposition of |0>..|r>"""
    if n_max is None:
        n_max = r + PHASE_STATE_HEADROOM
    if r < 0 or r > n_max:
        raise InvalidCutoff(f"Phase state r={r} does not fit in n_max={n_max}")
    amplitudes = np.zeros(n_max + 1, dtype=complex)
    amplitudes[: r + 1] = 1.0 / sqrt(r + 1)
    return PureState(amplitudes)


def fock_state(n: int, n_max: Optional[int] = None) -> PureState:
    if n_max is None:
        n_max = n
    if n < 0 or n > n_max:
        raise InvalidCutoff(f"Fock level n={n} does not fit in n_max={n_max}")
    amplitudes = np.zeros(n_max + 1, dtype=complex)
    amplitudes[n] = 1.0
    return PureState(amplitudes)


def cat_state(alpha: complex, sign: int = 1, n_max: Optional[int] = None) -> PureState:
    """Normalised |alpha> + sign |-alpha>; sign=+1 keeps only even levels"""
    if sign not in (1, -1):
        raise InvalidState(f"Cat state sign must be +1 or -1, got {sign}")
    if n_max is None:
        n_max = default_cutoff(alpha)
    norm_sq = 2.0 * (1.0 + sign * np.exp(-2.0 * abs(alpha) ** 2))
    if norm_sq < 1e-300:
        raise InvalidState(f"Cat state alpha={alpha}, sign={sign} has zero norm")
    parity = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    amplitudes = _coherent_amplitudes(alpha, n_max) * (1.0 + sign * parity) / sqrt(norm_sq)
    tail = 1.0 - float(np.sum(np.abs(amplitudes) ** 2))
    if tail >= TAIL_TOLERANCE:
        raise TruncationTooSmall(f"Cat state alpha={alpha} leaves tail mass {tail:.2e} beyond n_max={n_max}")
    return PureState(amplitudes)


def random_pure_state(n_max: int, seed: int) -> PureState:
    """Haar-random state from normalised i.i.d. complex Gaussian amplitudes"""
    if n_max < 0:
        raise InvalidCutoff(f"n_max must be >= 0, got {n_max}")
    rng = np.random.default_rng(seed)
    real, imag = rng.standard_normal((2, n_max + 1))
    amplitudes = real + 1j * imag
    return PureState(amplitudes / np.linalg.norm(amplitudes))


def to_density(psi: PureState) -> DensityMatrix:
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def incoherent_mixture(weights: Sequence[float]) -> DensityMatrix:
    """Diagonal mixture sum_n w_n |n><n|"""
    values = np.asarray(weights, dtype=float)
    if values.ndim != 1 or values.size == 0 or np.any(values < 0):
        raise InvalidState("Mixture weights must be a non-empty vector of non-negative numbers")
    if abs(values.sum() - 1.0) > NORM_TOLERANCE:
        raise InvalidState(f"Mixture weights sum to {values.sum():.15f}, expected 1")
    return DensityMatrix(np.diag(values))


def number_stats(rho: DensityMatrix) -> NumberStats:
    """Mean, variance and effective Hilbert-space size sqrt(1 + 12 var) of N"""
    populations = np.real(np.diag(rho.entries))
    levels = np.arange(rho.dim, dtype=float)
    mean = float(np.dot(levels, populations))
    variance = max(float(np.dot(levels**2, populations)) - mean**2, 0.0)
    return NumberStats(mean=mean, variance=variance, hs=sqrt(1.0 + 12.0 * variance))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), evaluated as the squared Frobenius norm of a Hermitian matrix"""
    return float(np.vdot(rho.entries, rho.entries).real)


def split_diagonal(op: FockOperator) -> Tuple[FockOperator, FockOperator]:
    """Exact split into the m=n part and the m!=n part"""
    diagonal = np.diag(np.diag(op.entries))
    off_diagonal = np.array(op.entries)
    np.fill_diagonal(off_diagonal, 0.0)
    return FockOperator(diagonal), FockOperator(off_diagonal)
