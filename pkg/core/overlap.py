from dataclasses import dataclass
from math import pi
from typing import Optional, Tuple, Union
import logging

import numpy as np

from core.dynamics import GammaParams, evolve, evolve_delta
from core.errors import DimensionMismatch, InvalidState
from core.fock import DensityMatrix, FockOperator, PureState, purity, split_diagonal, to_density
from core.phase_space import PhaseSpaceField, PhaseSpaceGrid, grid_auto, wigner

logger = logging.getLogger(__name__)

Reference = Union[PureState, DensityMatrix]


@dataclass(frozen=True, eq=False)
class OverlapOperator(FockOperator):
    """R(t) = [rho(0) rho(t) + rho(t) rho(0)] / K with K fixed by tr R(0) = 1"""

    k_norm: float = 2.0

    def _validate(self) -> None:
        if not self.k_norm > 0:
            raise InvalidState(f"Normalisation K must be > 0, got {self.k_norm}")


@dataclass(frozen=True, eq=False)
class OverlapComponents:
    operator: OverlapOperator
    total: PhaseSpaceField
    diagonal: PhaseSpaceField
    non_diagonal: PhaseSpaceField


def overlap_operator(rho0: Reference, rho_t: DensityMatrix) -> OverlapOperator:
    """Symmetrised overlap operator; a PureState reference takes the rank-1 path"""
    if isinstance(rho0, PureState):
        if rho0.dim != rho_t.dim:
            raise DimensionMismatch(f"Reference has dimension {rho0.dim}, evolved state {rho_t.dim}")
        # |psi><psi| rho_t + rho_t |psi><psi| with K = 2
        psi = rho0.amplitudes
        image = rho_t.entries @ psi
        product = np.outer(psi, image.conj())
        return OverlapOperator(0.5 * (product + product.conj().T), k_norm=2.0)

    if rho0.dim != rho_t.dim:
        raise DimensionMismatch(f"Reference has dimension {rho0.dim}, evolved state {rho_t.dim}")
    k_norm = 2.0 * purity(rho0)
    product = rho0.entries @ rho_t.entries
    return OverlapOperator((product + product.conj().T) / k_norm, k_norm=k_norm)


def split_overlap_operator(r_op: OverlapOperator) -> Tuple[FockOperator, FockOperator]:
    """Diagonal part (carries the whole trace) and non-diagonal part"""
    return split_diagonal(r_op)


def field_energy(field: PhaseSpaceField) -> float:
    """2 pi times the integral of |f|^2; the Frobenius norm^2 of the underlying operator"""
    return float(2 * pi * np.real(field.grid.integrate(np.abs(field.values) ** 2)))


def wigner_overlap_components(
    rho0: Reference,
    gamma: float,
    epsilon: float,
    delta_scale: float = 1.0,
    t: float = 0.0,
    grid: Optional[PhaseSpaceGrid] = None,
    params: Optional[GammaParams] = None,
) -> OverlapComponents:
    """Wigner transform of R(t) and of its diagonal / non-diagonal parts.

    By default rho(t) is the interaction-picture rho_Delta(t), so the total field
    integrates to the echo; passing params evolves under the full Hamiltonian instead.
    """
    density = rho0 if isinstance(rho0, DensityMatrix) else to_density(rho0)
    if params is None:
        rho_t = evolve_delta(density, gamma, epsilon, delta_scale, t)
    else:
        rho_t = evolve(density, params, t)
    grid = grid or grid_auto(density)

    r_op = overlap_operator(rho0, rho_t)
    diagonal, non_diagonal = split_overlap_operator(r_op)
    diagonal_field = wigner(diagonal, grid)
    non_diagonal_field = wigner(non_diagonal, grid)
    logger.debug(f"Overlap operator at t={t}: trace {r_op.trace().real:.6f}")
    return OverlapComponents(
        operator=r_op,
        total=wigner(r_op, grid),
        diagonal=diagonal_field,
        non_diagonal=non_diagonal_field,
    )
