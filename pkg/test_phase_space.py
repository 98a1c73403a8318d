"""
Tests for Wigner/Husimi fields, quadrature identities and roughness
"""

from math import exp, pi, sqrt

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import eval_genlaguerre, gammaln

from core.dynamics import evolve_delta
from core.echo import echo_pure
from core.errors import GridTooCoarse, InvalidGrid
from core.fock import (
    cat_state,
    coherent_state,
    fock_state,
    incoherent_mixture,
    phase_state,
    purity,
    random_pure_state,
    to_density,
)
from core.phase_space import (
    PhaseSpaceField,
    PhaseSpaceGrid,
    grid_auto,
    husimi,
    overlap_integral,
    pi_mn,
    richardson_roughness,
    roughness,
    wigner,
    wigner_negativity,
)

COHERENT_ROUGHNESS = 1.0 / sqrt(6.0)


def kernel_closed_form(beta: complex, m: int, n: int) -> complex:
    low, k = min(m, n), abs(n - m)
    x = 4.0 * abs(beta) ** 2
    ratio = exp(0.5 * (gammaln(low + 1) - gammaln(low + k + 1)))
    value = (-1) ** low * ratio * (2 * beta) ** k * exp(-0.5 * x) * eval_genlaguerre(low, k, x) / pi
    return value if m <= n else np.conj(value)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (0, 3), (3, 0), (4, 7), (9, 2), (12, 12)])
def test_kernel_matches_laguerre_closed_form(m, n):
    for beta in (0.0, 0.3 - 0.2j, 1.1 + 0.7j, -1.9 + 0.4j):
        assert pi_mn(beta, m, n) == pytest.approx(kernel_closed_form(beta, m, n), rel=1e-10, abs=1e-14)


def test_kernel_on_arrays_and_bad_indices():
    beta = np.array([0.1, 0.5j, -0.4 + 0.4j])
    assert_allclose(pi_mn(beta, 2, 5), [kernel_closed_form(b, 2, 5) for b in beta], rtol=1e-10, atol=1e-14)
    with pytest.raises(InvalidGrid):
        pi_mn(0.1, -1, 2)


def test_grid_validation():
    with pytest.raises(InvalidGrid):
        PhaseSpaceGrid.symmetric(3.0, 100)
    with pytest.raises(InvalidGrid):
        PhaseSpaceGrid(1.0, 1.0, -1.0, 1.0, 11, 11)
    grid = PhaseSpaceGrid.centered(1.0, -2.0, 3.0, 61)
    assert grid.q[0] == pytest.approx(-2.0)
    assert grid.p[-1] == pytest.approx(1.0)
    assert grid.dq == pytest.approx(0.1)


def test_field_shape_must_match_grid():
    grid = PhaseSpaceGrid.symmetric(2.0, 11)
    with pytest.raises(InvalidGrid):
        PhaseSpaceField(grid, np.zeros((11, 9)))


def test_coherent_wigner_is_gaussian():
    alpha = 1.0 + 0.5j
    grid = PhaseSpaceGrid.symmetric(7.0, 101)
    q, p = grid.mesh()
    q0, p0 = sqrt(2) * alpha.real, sqrt(2) * alpha.imag
    expected = np.exp(-((q - q0) ** 2) - (p - p0) ** 2) / pi
    field = wigner(to_density(coherent_state(alpha)), grid)
    assert_allclose(field.values, expected, atol=1e-10)
    assert field.imag_defect() < 1e-12


def test_fock_one_wigner():
    grid = PhaseSpaceGrid.symmetric(6.0, 101)
    q, p = grid.mesh()
    r2 = q**2 + p**2
    expected = (2 * r2 - 1) * np.exp(-r2) / pi
    assert_allclose(wigner(to_density(fock_state(1)), grid).real(), expected, atol=1e-12)


def test_coherent_husimi_is_wide_gaussian():
    alpha = -0.8 + 1.2j
    grid = PhaseSpaceGrid.symmetric(8.0, 101)
    q, p = grid.mesh()
    q0, p0 = sqrt(2) * alpha.real, sqrt(2) * alpha.imag
    expected = np.exp(-((q - q0) ** 2 + (p - p0) ** 2) / 2) / (2 * pi)
    assert_allclose(husimi(to_density(coherent_state(alpha)), grid).real(), expected, atol=1e-10)


def test_wigner_is_linear():
    grid = PhaseSpaceGrid.symmetric(6.0, 61)
    a = to_density(random_pure_state(5, seed=1)).entries
    b = to_density(random_pure_state(5, seed=2)).entries
    combined = wigner(0.3 * a + 0.7 * b, grid).values
    assert_allclose(combined, 0.3 * wigner(a, grid).values + 0.7 * wigner(b, grid).values, atol=1e-13)


@pytest.mark.parametrize(
    "psi",
    [coherent_state(2.0), phase_state(6), cat_state(3.0), random_pure_state(10, seed=4)],
    ids=["coherent-2", "phase-6", "cat-3", "random-10"],
)
def test_quadrature_identities_on_auto_grid(psi):
    rho = to_density(psi)
    grid = grid_auto(rho)
    field = wigner(rho, grid)
    assert field.integral() == pytest.approx(1.0, abs=1e-6)
    assert overlap_integral(field, field) == pytest.approx(purity(rho), abs=1e-4)
    assert husimi(rho, grid).integral() == pytest.approx(1.0, abs=1e-6)


def test_overlap_integral_reproduces_echo():
    psi = coherent_state(2.0)
    rho0 = to_density(psi)
    grid = grid_auto(rho0)
    initial = wigner(rho0, grid)
    for t in np.random.default_rng(12).uniform(0.0, 50.0, size=10):
        evolved = wigner(evolve_delta(rho0, 1.7, 1.0, 1.0, t), grid)
        assert overlap_integral(initial, evolved) == pytest.approx(echo_pure(psi, 1.7, 1.0, 1.0, t), abs=1e-4)


def test_overlap_integral_needs_same_grid():
    rho = to_density(phase_state(2))
    with pytest.raises(InvalidGrid):
        overlap_integral(wigner(rho, PhaseSpaceGrid.symmetric(5.0, 51)), wigner(rho, PhaseSpaceGrid.symmetric(5.0, 61)))


def test_coarse_grid_is_detected():
    rho = to_density(coherent_state(3.0))
    with pytest.raises(GridTooCoarse):
        wigner(rho, PhaseSpaceGrid.symmetric(1.0, 11))
    # The self-test can be switched off
    wigner(rho, PhaseSpaceGrid.symmetric(1.0, 11), check=False)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0 - 1.0j])
def test_coherent_roughness(alpha):
    assert roughness(to_density(coherent_state(alpha))) == pytest.approx(COHERENT_ROUGHNESS, abs=1e-3)


def test_cat_roughness_approaches_limit():
    assert roughness(to_density(cat_state(3.0))) == pytest.approx(sqrt(7.0 / 12.0), abs=0.05)


def test_roughness_bounds_on_random_states():
    for seed in range(50):
        rho = to_density(random_pure_state(2 + seed % 8, seed=seed))
        value = roughness(rho)
        assert value <= 1.0 + 1e-6
        assert value**2 <= purity(rho) + 1e-3


def test_phase_state_roughness_is_grid_stable():
    coarse, fine, extrapolated = richardson_roughness(to_density(phase_state(6)), points=101)
    assert fine == pytest.approx(coarse, abs=1e-4)
    assert extrapolated == pytest.approx(fine, abs=1e-4)
    assert COHERENT_ROUGHNESS < fine < 1.0


def test_negativity():
    grid = PhaseSpaceGrid.symmetric(6.0, 401)
    assert wigner_negativity(wigner(to_density(coherent_state(1.0)), grid)) < 1e-9
    # W of |1> is negative inside q^2 + p^2 < 1/2
    assert wigner_negativity(wigner(to_density(fock_state(1)), grid)) == pytest.approx(2 * exp(-0.5) - 1, abs=5e-3)


def test_fock_roughness_grows_with_level():
    vacuum, two, ten = (roughness(to_density(fock_state(n))) for n in (0, 2, 10))
    assert vacuum == pytest.approx(COHERENT_ROUGHNESS, abs=1e-3)
    assert two - vacuum > 0.01
    assert ten - two > 0.01


def test_maximally_mixed_state_is_smooth():
    rho = incoherent_mixture(np.full(20, 1.0 / 20))
    assert roughness(rho) <= sqrt(purity(rho)) + 1e-3
    assert roughness(rho) <= 0.224 + 1e-3


def test_roughness_is_convex_along_incoherent_mixtures():
    even = np.array([0.5, 0.0, 0.5, 0.0])
    odd = np.array([0.0, 0.5, 0.0, 0.5])
    grid = grid_auto(incoherent_mixture(0.5 * even + 0.5 * odd))
    values = np.array(
        [roughness(incoherent_mixture(weight * even + (1 - weight) * odd), grid) for weight in np.linspace(0, 1, 11)]
    )
    assert np.min(values[:-2] - 2 * values[1:-1] + values[2:]) >= -1e-3


def test_husimi_is_gaussian_smoothed_wigner():
    rho = to_density(random_pure_state(6, seed=11))
    grid = grid_auto(rho)
    q, p = grid.mesh()
    w = wigner(rho, grid).real()
    h = husimi(rho, grid).real()
    rng = np.random.default_rng(5)
    for i, j in rng.integers(grid.n_q // 4, 3 * grid.n_q // 4, size=(5, 2)):
        kernel = np.exp(-((q - q[i, j]) ** 2) - (p - p[i, j]) ** 2) / pi
        assert float(grid.integrate(w * kernel)) == pytest.approx(h[i, j], abs=1e-4)
