import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_moments, envelope_scale, gauss_hermite_integral, random_spd, random_state, random_sym
from squeezekit import (
    CorrelationMatrix,
    GaussianState,
    OscillatorSystem,
    SymplecticForm,
    amplitude,
    correlations,
    entropic_bound,
    entropic_excess,
    entropic_excess_closed_form,
    entropies,
    evolve_kernel_closed,
    ground_state,
    momentum_amplitude,
    momentum_kernel,
    solve_frequency,
    symplectic_residual,
)


def state_1d(a, b, hbar=1.0, mass=1.0):
    return GaussianState(np.zeros(1), np.zeros(1), np.array([[a]]), np.array([[b]]), mass, hbar)


def test_symplectic_form_properties():
    j = SymplecticForm(3).j
    assert np.array_equal(j @ j, -np.eye(6))
    assert np.array_equal(j.T, -j)


def test_correlation_matrix_needs_even_dimension():
    with pytest.raises(ValueError, match="even"):
        CorrelationMatrix(np.eye(3))


def test_residual_ground_1d():
    q = correlations(ground_state(OscillatorSystem.normal(np.eye(1))))
    j = SymplecticForm(1).j
    assert np.allclose(q.q @ j @ q.q, 0.25 * j, atol=1e-16)
    assert symplectic_residual(q) == 0.0


def test_residual_tumbling_1d():
    q = correlations(state_1d(1.0, 1.0))
    assert q.xp[0, 0] != 0
    assert np.linalg.det(q.q) == pytest.approx(0.25, abs=1e-15)
    assert symplectic_residual(q) <= 1e-15


def test_saturation_constant_from_brute_force():
    """At hbar != 1 the quadrature determinant singles out hbar^2/4 over (hbar/4)^2."""
    hbar = 0.7
    s = GaussianState(np.array([0.3]), np.array([-0.4]), np.array([[1.7]]), np.array([[0.9]]), 1.2, hbar)
    xx, pp, xp = brute_force_moments(s)
    q = np.block([[xx, xp], [xp.T, pp]])
    j = SymplecticForm(1).j
    det = np.linalg.det(q)
    assert det == pytest.approx(hbar**2 / 4, rel=1e-10)
    assert abs(det - (hbar / 4) ** 2) > 0.05
    assert np.allclose(q @ j @ q, det * j, atol=1e-12)


@given(st.integers(0, 10_000), st.integers(1, 4), st.floats(0.2, 3.0))
def test_residual_random_states(seed, n, hbar):
    s = random_state(np.random.default_rng(seed), n, mass=1.1, hbar=hbar)
    assert symplectic_residual(correlations(s)) <= 1e-10


def test_residual_invariant_under_evolution(rng):
    sys = OscillatorSystem.normal(random_spd(rng, 3))
    freq = solve_frequency(sys)
    s = random_state(rng, 3)
    for t in np.linspace(0, 6, 13):
        st_t = s.with_kernel(evolve_kernel_closed(s.kernel, freq, t))
        assert symplectic_residual(correlations(st_t)) <= 1e-10


def _entropy_by_quadrature(density, center, scale):
    return -gauss_hermite_integral(lambda z: density(z) * np.log(density(z)), center, scale, nodes=80)


def test_entropies_ground_1d():
    s = state_1d(1.0, 0.0)
    s_x, s_p = entropies(s)
    assert s_x == pytest.approx(0.5 * np.log(np.pi * np.e))
    assert s_p == pytest.approx(0.5 * np.log(np.pi * np.e))
    assert s_x + s_p == pytest.approx(np.log(np.pi) + 1)
    q_x = _entropy_by_quadrature(lambda x: np.abs(amplitude(s, x)) ** 2, [0.0], envelope_scale(s.a))
    assert q_x == pytest.approx(s_x, rel=1e-10)


def test_entropies_match_quadrature_tumbling():
    s = state_1d(1.3, -0.8, hbar=0.6, mass=1.4)
    s_x, s_p = entropies(s)
    sx = envelope_scale(s.a, s.mass, s.hbar)
    sp = envelope_scale(momentum_kernel(s).c / s.mass**2, s.mass, s.hbar)
    assert _entropy_by_quadrature(lambda x: np.abs(amplitude(s, x)) ** 2, [0.0], sx) == pytest.approx(s_x, rel=1e-9)
    assert _entropy_by_quadrature(lambda p: np.abs(momentum_amplitude(s, p)) ** 2, [0.0], sp) == pytest.approx(s_p, rel=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_real_kernels_meet_the_bound(seed):
    rng = np.random.default_rng(seed)
    n = 1 + seed % 4
    s = GaussianState(np.zeros(n), np.zeros(n), random_spd(rng, n, 0.05, 20), np.zeros((n, n)))
    s_x, s_p = entropies(s)
    assert abs(s_x + s_p - n * (np.log(np.pi) + 1)) <= 1e-9
    assert abs(entropic_excess(s)) <= 1e-10


def test_bound_with_hbar():
    s = state_1d(2.0, 0.0, hbar=0.3)
    assert sum(entropies(s)) == pytest.approx(entropic_bound(1, 0.3), abs=1e-12)


def test_excess_half_log_two():
    assert entropic_excess(state_1d(1.0, 1.0)) == pytest.approx(0.5 * np.log(2), abs=1e-12)
    assert entropic_excess(state_1d(2.5, 2.5)) == pytest.approx(0.5 * np.log(2), abs=1e-12)


def test_excess_random_states(rng):
    for _ in range(100):
        n = int(rng.integers(1, 6))
        s = GaussianState(np.zeros(n), np.zeros(n), random_spd(rng, n), random_sym(rng, n), hbar=rng.uniform(0.5, 2))
        ex = entropic_excess(s)
        assert ex >= -1e-9
        assert abs(ex - entropic_excess_closed_form(s)) <= 1e-9
