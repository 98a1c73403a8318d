"""
Tests for the Loschmidt echo, its long-time statistics and the saturation fit
"""

from math import pi, sqrt

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import i0e

from core.dynamics import evolve_delta
from core.echo import (
    EchoSeries,
    SaturationPoint,
    asymptotic_mean_oracle,
    asymptotic_variance_oracle,
    cumulative_stats,
    echo_dense,
    echo_general,
    echo_pure,
    echo_series,
    fit_decay_rate,
    fit_saturation,
    resonance_spectrum,
    windowed_stats,
)
from core.errors import DimensionMismatch, EmptyInput, InvalidGrid, InvalidParams, NotPSD
from core.fock import (
    DensityMatrix,
    PureState,
    coherent_state,
    incoherent_mixture,
    number_stats,
    phase_state,
    random_pure_state,
    to_density,
)
from experiments.reference import COHERENT_TABLE, PHASE_TABLE, load_reference_values

COHERENT = coherent_state(2.0)
PHASE = phase_state(6)
INTEGER_GAMMAS = [1.0, 2.0, 3.0, 4.0]
NON_INTEGER_GAMMAS = [1.7, 3.5, -0.5, -1.0]


def test_echo_starts_at_one():
    for gamma in (1.0, 1.7, -0.5):
        assert echo_pure(COHERENT, gamma, 1.0, 1.0, 0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("gamma", INTEGER_GAMMAS)
@pytest.mark.parametrize("psi", [COHERENT, PHASE], ids=["coherent-2", "phase-6"])
def test_revival_at_two_pi(psi, gamma):
    assert echo_pure(psi, gamma, 1.0, 1.0, 2 * pi) == pytest.approx(1.0, abs=1e-9)


def test_echo_depends_only_on_populations():
    rng = np.random.default_rng(1)
    scrambled = PureState(COHERENT.amplitudes * np.exp(2j * pi * rng.random(COHERENT.dim)))
    for t in rng.uniform(0.0, 100.0, size=100):
        assert abs(echo_pure(scrambled, 1.7, 1.0, 1.0, t) - echo_pure(COHERENT, 1.7, 1.0, 1.0, t)) < 1e-12


def test_echo_stays_in_unit_interval():
    series = echo_series(PHASE, 1.7, 1.0, t_max=50.0, dt=0.01)
    assert np.all(series.values >= 0.0)
    assert np.all(series.values <= 1.0 + 1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_pure_echo_matches_dense_paths(seed):
    psi = random_pure_state(4 + seed % 9, seed=seed)
    rho0 = to_density(psi)
    t = float(np.random.default_rng(100 + seed).uniform(0.0, 30.0))
    for gamma in (1.7, 2.0):
        expected = echo_pure(psi, gamma, 1.0, 1.0, t)
        assert echo_dense(psi, gamma, 1.0, 1.0, t) == pytest.approx(expected, abs=1e-10)
        rho_t = evolve_delta(rho0, gamma, 1.0, 1.0, t)
        assert echo_general(rho0, rho_t) == pytest.approx(expected, abs=1e-10)


def test_fidelity_of_mixed_states():
    mixture = incoherent_mixture([0.5, 0.5])
    assert echo_general(mixture, mixture) == pytest.approx(1.0, abs=1e-12)
    # F(diag(p), diag(q)) = (sum sqrt(p q))^2
    other = incoherent_mixture([0.9, 0.1])
    assert echo_general(mixture, other) == pytest.approx((np.sqrt(0.45) + np.sqrt(0.05)) ** 2, abs=1e-12)


def test_fidelity_errors():
    with pytest.raises(DimensionMismatch):
        echo_general(incoherent_mixture([0.5, 0.5]), incoherent_mixture([0.2, 0.3, 0.5]))
    with pytest.raises(NotPSD):
        echo_general(incoherent_mixture([0.5, 0.5]), DensityMatrix(np.diag([1.5, -0.5])))
    with pytest.raises(NotPSD):
        echo_general(DensityMatrix(np.diag([1.5, -0.5])), incoherent_mixture([0.5, 0.5]))


def test_series_sampling_grid():
    series = echo_series(PHASE, 1.7, 1.0, t_max=1.0, dt=0.01)
    assert series.times.size == 100
    assert series.times[0] == pytest.approx(0.01)
    assert series.times[-1] == pytest.approx(1.0)
    with pytest.raises(InvalidGrid):
        echo_series(PHASE, 1.7, 1.0, t_max=0.0, dt=0.01)
    with pytest.raises(InvalidGrid):
        echo_series(PHASE, 1.7, 1.0, t_max=1.0, dt=0.0)


def test_chunking_does_not_change_values():
    whole = echo_series(COHERENT, 1.7, 1.0, t_max=20.0, dt=0.01)
    chunked = echo_series(COHERENT, 1.7, 1.0, t_max=20.0, dt=0.01, chunk_size=7)
    assert_allclose(chunked.values, whole.values, rtol=0, atol=1e-14)


def test_cumulative_stats_match_prefix_moments():
    values = np.random.default_rng(4).random(500)
    cum_mean, cum_var = cumulative_stats(values)
    for i in (0, 1, 17, 499):
        assert cum_mean[i] == pytest.approx(np.mean(values[: i + 1]), abs=1e-12)
        assert cum_var[i] == pytest.approx(np.var(values[: i + 1]), abs=1e-12)


def test_bundled_reference_values():
    reference = load_reference_values()
    assert reference.lookup(COHERENT_TABLE, 4) == (0.2607, 0.0768)
    assert reference.lookup(PHASE_TABLE, -1.0) == (0.1432, 0.0175)
    assert reference.lookup(PHASE_TABLE, 2.4) is None
    assert (reference.saturation_mu, reference.tolerance) == (0.923, 0.005)
    for table in (COHERENT_TABLE, PHASE_TABLE):
        assert sorted(reference.tables[table]) == sorted(INTEGER_GAMMAS + NON_INTEGER_GAMMAS)


def test_ipr_oracles():
    assert asymptotic_mean_oracle(PHASE, 1.7, 1.0) == pytest.approx(1.0 / 7.0, abs=1e-12)
    assert asymptotic_mean_oracle(COHERENT, 1.7, 1.0) == pytest.approx(i0e(8.0), abs=1e-10)
    assert asymptotic_variance_oracle(PHASE, 1.7, 1.0) == pytest.approx(6.0 / 343.0, abs=1e-12)


def test_resonance_spectrum_for_integer_gamma():
    frequencies, strengths = resonance_spectrum(phase_state(2), 1, 1.0)
    # theta = 1, 2, 5 gives gaps 0, +-1, +-3, +-4
    assert_allclose(frequencies, [-4.0, -3.0, -1.0, 0.0, 1.0, 3.0, 4.0])
    assert_allclose(strengths, [1 / 9, 1 / 9, 1 / 9, 3 / 9, 1 / 9, 1 / 9, 1 / 9])
    assert np.sum(strengths) == pytest.approx(1.0)


def test_oracle_counts_resonant_pairs():
    # (n^2 + 1) with gamma=1 has no repeated gap within 0..2, so the mean is the IPR
    assert asymptotic_mean_oracle(phase_state(2), 1, 1.0) == pytest.approx(1.0 / 3.0)
    assert asymptotic_variance_oracle(phase_state(2), 1, 1.0) == pytest.approx(6 / 81)


@pytest.mark.parametrize("psi", [PHASE, COHERENT], ids=["phase-6", "coherent-2"])
@pytest.mark.parametrize("gamma", [1.7, 3.5])
def test_long_time_mean_approaches_ipr(psi, gamma):
    series = echo_series(psi, gamma, 1.0, t_max=2000.0, dt=0.01)
    assert series.final_mean == pytest.approx(asymptotic_mean_oracle(psi, gamma, 1.0), abs=0.003)


@pytest.mark.parametrize("gamma", NON_INTEGER_GAMMAS)
@pytest.mark.parametrize("psi,table", [(COHERENT, COHERENT_TABLE), (PHASE, PHASE_TABLE)], ids=["coherent-2", "phase-6"])
def test_reference_tables_for_non_integer_gamma(psi, table, gamma):
    reference = load_reference_values()
    mean, variance = reference.lookup(table, gamma)
    series = echo_series(psi, gamma, 1.0, t_max=2000.0, dt=0.01)
    assert series.final_mean == pytest.approx(mean, abs=reference.tolerance)
    assert series.final_variance == pytest.approx(variance, abs=reference.tolerance)


@pytest.mark.parametrize("gamma", INTEGER_GAMMAS)
@pytest.mark.parametrize("psi", [COHERENT, PHASE], ids=["coherent-2", "phase-6"])
def test_integer_gamma_matches_period_average(psi, gamma):
    """Periodic rows are checked against the exact resonance average"""
    series = echo_series(psi, gamma, 1.0, t_max=2000.0, dt=0.01)
    assert series.final_mean == pytest.approx(asymptotic_mean_oracle(psi, gamma, 1.0), abs=1e-3)
    assert series.final_variance == pytest.approx(asymptotic_variance_oracle(psi, gamma, 1.0), abs=1e-3)


def test_windowed_stats():
    values = np.concatenate([np.ones(50), np.zeros(50)])
    series = EchoSeries(np.arange(1.0, 101.0), values, *cumulative_stats(values))
    assert windowed_stats(series, 0.5) == (0.0, 0.0)
    mean, variance = windowed_stats(series, 1.0)
    assert mean == pytest.approx(0.5)
    assert variance == pytest.approx(0.25)
    with pytest.raises(InvalidGrid):
        windowed_stats(series, 0.0)


def test_fit_decay_rate_recovers_exponential():
    times = np.linspace(0.01, 2.0, 200)
    values = np.exp(-2.5 * times)
    series = EchoSeries(times, values, *cumulative_stats(values))
    assert fit_decay_rate(series, 1.0) == pytest.approx(2.5, abs=1e-9)
    with pytest.raises(EmptyInput):
        fit_decay_rate(series, 0.001)


def test_saturation_fit_on_exact_points():
    mu = 0.923
    points = [SaturationPoint(sigma, mu / (pi * sigma), f"s{sigma}") for sigma in (0.5, 1.0, 2.0, 3.5)]
    assert fit_saturation(points) == pytest.approx(mu, abs=1e-12)
    with pytest.raises(EmptyInput):
        fit_saturation([])
    with pytest.raises(InvalidParams):
        SaturationPoint(0.0, 0.1, "fock")


@pytest.mark.parametrize("gamma", [2.4, 3.1])
def test_saturation_fit_within_band(gamma):
    points = []
    for psi, label in [(phase_state(r), f"phase-{r}") for r in range(3, 16)] + [
        (coherent_state(alpha), f"coherent-{alpha}") for alpha in np.arange(1.0, 4.01, 0.5)
    ]:
        sigma = sqrt(number_stats(to_density(psi)).variance)
        series = echo_series(psi, gamma, 1.0, t_max=2000.0, dt=0.01)
        points.append(SaturationPoint(sigma, series.final_mean, label))
    assert 0.87 <= fit_saturation(points) <= 0.97

