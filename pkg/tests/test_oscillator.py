import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    brute_force_moments,
    central_difference,
    classical_flow,
    envelope_scale,
    fourier_transform_1d,
    gauss_hermite_integral,
    random_spd,
    random_state,
    random_sym,
)
from squeezekit import (
    ConditioningError,
    GaussianState,
    NotPositiveDefiniteError,
    OscillatorSystem,
    amplitude,
    correlations,
    energy,
    energy_momentum_form,
    evolve_center,
    ground_energy,
    ground_state,
    hellmann_feynman_shift,
    kernel_from_correlations,
    momentum_amplitude,
    momentum_kernel,
    normalize_system,
    solve_frequency,
    stationarity_audit,
)


def state_1d(a, b, xi=0.0, pi=0.0, mass=1.0, hbar=1.0):
    return GaussianState(np.array([xi]), np.array([pi]), np.array([[a]]), np.array([[b]]), mass, hbar)


# ------------------------------------------------------------ validation

def test_system_rejects_indefinite_metric():
    with pytest.raises(NotPositiveDefiniteError):
        OscillatorSystem(np.diag([1.0, -1.0]), np.eye(2))


def test_system_reports_unstable_potential():
    with pytest.raises(NotPositiveDefiniteError, match="unstable"):
        OscillatorSystem.normal(np.diag([1.0, -0.5]))


def test_system_rejects_asymmetric_input():
    with pytest.raises(ValueError, match="symmetric"):
        OscillatorSystem.normal(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_near_singular_potential_is_a_conditioning_error():
    with pytest.raises(ConditioningError):
        OscillatorSystem.normal(np.diag([1.0, 1e-14]))


def test_state_requires_positive_real_part():
    with pytest.raises(NotPositiveDefiniteError):
        state_1d(-1.0, 0.0)


def test_state_symmetrizes_within_tolerance(rng):
    a = random_spd(rng, 3)
    bumped = a + 1e-13 * rng.normal(size=(3, 3))
    s = GaussianState(np.zeros(3), np.zeros(3), bumped, np.zeros((3, 3)))
    assert np.array_equal(s.a, s.a.T)


# ------------------------------------------------------------ normalize_system

def test_normalize_identity_when_already_normal():
    sys = OscillatorSystem.normal(np.diag([1.0, 3.0]), mass=2.0)
    new, t = normalize_system(sys)
    assert np.allclose(t, np.eye(2), atol=1e-14)
    assert np.allclose(new.u, sys.u, atol=1e-14)


def test_normalize_diagonal_metric():
    m = 1.5
    sys = OscillatorSystem(np.diag([2.0, 1.0]) / m, np.diag([1.0, 2.0]), mass=m)
    new, t = normalize_system(sys)
    assert np.allclose(new.g, np.eye(2) / m, atol=1e-14)
    assert new.is_normalized
    # x = T x' with T = (m g)^{1/2}
    assert np.allclose(t, np.diag([np.sqrt(2.0), 1.0]), atol=1e-14)
    assert np.allclose(new.u, t.T @ sys.u @ t)


def test_normalize_random_metric_reproduces_dynamics(rng):
    m = 0.8
    g = random_spd(rng, 4) / m
    u = random_spd(rng, 4)
    sys = OscillatorSystem(g, u, mass=m)
    new, t = normalize_system(sys)
    assert np.all(np.linalg.eigvalsh(new.u) > 0)
    x0, p0 = rng.normal(size=4), rng.normal(size=4)
    for time in (0.7, 2.3):
        x_ref, p_ref = classical_flow(g, u, x0, p0, time)
        # x = T x', p = T^{-T} p'
        xp, pp = evolve_center(np.linalg.solve(t, x0), t.T @ p0, new, time)
        assert np.allclose(t @ xp, x_ref, atol=1e-9)
        assert np.allclose(np.linalg.solve(t.T, pp), p_ref, atol=1e-9)


# ------------------------------------------------------------ solve_frequency / ground_state

def test_frequency_diagonal():
    m = 2.0
    freq = solve_frequency(OscillatorSystem.normal(m * np.diag([1.0, 4.0]), mass=m))
    assert np.allclose(freq.omega, np.diag([1.0, 2.0]), atol=1e-14)


def test_frequency_identity():
    freq = solve_frequency(OscillatorSystem.normal(3.0 * np.eye(3), mass=3.0))
    assert np.allclose(freq.omega, np.eye(3), atol=1e-14)


def test_frequency_residual_random(rng):
    m = 1.7
    sys = OscillatorSystem.normal(random_spd(rng, 6), mass=m)
    w = solve_frequency(sys).omega
    res = np.linalg.norm(m * m * w @ sys.g @ w - sys.u) / np.linalg.norm(sys.u)
    assert res <= 1e-10
    assert np.all(np.linalg.eigvalsh(w) > 0)


def test_frequency_general_metric(rng):
    m = 1.3
    sys = OscillatorSystem(random_spd(rng, 4), random_spd(rng, 4), mass=m)
    w = solve_frequency(sys).omega
    assert np.linalg.norm(m * m * w @ sys.g @ w - sys.u) <= 1e-10 * np.linalg.norm(sys.u)


def test_ground_state_values():
    s = ground_state(OscillatorSystem.normal(np.eye(1)))
    assert s.a[0, 0] == pytest.approx(1.0) and s.b[0, 0] == 0.0
    s2 = ground_state(OscillatorSystem.normal(np.diag([1.0, 4.0])))
    assert np.allclose(s2.a, np.diag([1.0, 2.0]))
    assert np.all(s2.xi == 0) and np.all(s2.pi == 0)


def test_ground_state_is_stationary(rng):
    sys = OscillatorSystem.normal(random_spd(rng, 4), mass=1.4, hbar=0.6)
    audit = stationarity_audit(ground_state(sys), sys)
    assert np.abs(audit.grad_a).max() < 1e-12
    assert np.abs(audit.grad_b).max() < 1e-12


# ------------------------------------------------------------ amplitudes

def test_amplitude_peak_normalization():
    s = ground_state(OscillatorSystem.normal(np.eye(1)))
    assert amplitude(s, [0.0]) == pytest.approx(np.pi**-0.25, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2])
def test_amplitude_normalized_by_quadrature(rng, n):
    s = random_state(rng, n, mass=1.3, hbar=0.8)
    scale = envelope_scale(s.a, s.mass, s.hbar)
    total = gauss_hermite_integral(lambda x: np.abs(amplitude(s, x)) ** 2, s.xi, scale)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_amplitude_translation():
    s0 = state_1d(1.4, 0.3)
    s1 = state_1d(1.4, 0.3, xi=1.0)
    assert abs(amplitude(s1, [1.0])) == pytest.approx(abs(amplitude(s0, [0.0])), abs=1e-15)


def test_momentum_amplitude_ground_peak():
    s = ground_state(OscillatorSystem.normal(np.eye(1)))
    assert abs(momentum_amplitude(s, [0.0])) == pytest.approx(np.pi**-0.25, abs=1e-15)


@pytest.mark.parametrize("a,b,xi,pi,hbar", [(1.0, 0.0, 0.0, 0.0, 1.0), (1.0, 1.0, 0.4, -0.7, 1.0), (2.3, -1.6, -0.5, 0.9, 0.6)])
def test_momentum_amplitude_is_fourier_transform(a, b, xi, pi, hbar):
    s = state_1d(a, b, xi, pi, hbar=hbar)
    x = np.linspace(-14, 14, 8001)
    psi = amplitude(s, x[:, None])
    p = np.linspace(-3, 3, 13)
    ref = fourier_transform_1d(psi, x, p, hbar)
    assert np.abs(momentum_amplitude(s, p[:, None]) - ref).max() < 1e-6


@pytest.mark.parametrize("n", [1, 2])
def test_momentum_amplitude_normalized(rng, n):
    s = random_state(rng, n, mass=0.7)
    mk = momentum_kernel(s)
    # |phi|^2 ~ exp(-q c q / (m hbar)): envelope a' = c / m^2 in the oracle's mass convention
    scale = envelope_scale(mk.c / s.mass**2, s.mass, s.hbar)
    total = gauss_hermite_integral(lambda p: np.abs(momentum_amplitude(s, p)) ** 2, s.pi, scale)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_momentum_variance_matches_real_part():
    s = state_1d(2.0, 0.0)
    scale = envelope_scale(np.array([[0.5]]))
    var = gauss_hermite_integral(lambda p: p[:, 0] ** 2 * np.abs(momentum_amplitude(s, p)) ** 2, [0.0], scale)
    assert var == pytest.approx(1.0, abs=1e-10)


# ------------------------------------------------------------ momentum kernel

def test_momentum_kernel_real_kernel():
    s = GaussianState(np.zeros(2), np.zeros(2), np.diag([2.0, 4.0]), np.zeros((2, 2)))
    mk = momentum_kernel(s)
    assert np.allclose(mk.c, np.diag([0.5, 0.25])) and np.allclose(mk.d, 0)


def test_momentum_kernel_1d_value():
    mk = momentum_kernel(state_1d(1.0, 1.0))
    assert mk.c[0, 0] == pytest.approx(0.5) and mk.d[0, 0] == pytest.approx(-0.5)


def test_momentum_kernel_identities(rng):
    s = random_state(rng, 5)
    mk = momentum_kernel(s)
    assert np.abs(mk.inverse_kernel @ s.kernel - np.eye(5)).max() <= 1e-10
    ainv = np.linalg.inv(s.a)
    c_ref = np.linalg.inv(s.a + s.b @ ainv @ s.b)
    assert np.allclose(mk.c, c_ref, atol=1e-10)
    assert np.allclose(mk.d, -ainv @ s.b @ c_ref, atol=1e-10)


def test_momentum_kernel_conditioning():
    # a passes the eigenvalue-ratio check, but the large imaginary part pushes cond(K) past 1e12
    s = GaussianState(np.zeros(2), np.zeros(2), np.diag([1.0, 1e-11]), np.diag([100.0, 0.0]))
    with pytest.raises(ConditioningError):
        momentum_kernel(s)


# ------------------------------------------------------------ correlations

def test_correlations_ground():
    q = correlations(ground_state(OscillatorSystem.normal(np.eye(1))))
    assert np.allclose(q.q, np.diag([0.5, 0.5]))


def test_correlations_tumbling_1d():
    q = correlations(state_1d(1.0, 1.0))
    assert q.pp[0, 0] == pytest.approx(1.0)
    assert q.xp[0, 0] == pytest.approx(-0.5)


def test_correlations_match_quadrature_2d(rng):
    s = random_state(rng, 2, mass=1.2, hbar=0.9)
    xx, pp, xp = brute_force_moments(s)
    q = correlations(s)
    assert np.abs(q.xx - xx).max() < 1e-6
    assert np.abs(q.pp - pp).max() < 1e-6
    assert np.abs(q.xp - xp).max() < 1e-6


def test_kernel_from_correlations_ground():
    sys = OscillatorSystem.normal(np.diag([1.0, 4.0]))
    k = kernel_from_correlations(correlations(ground_state(sys)))
    assert np.allclose(k, np.diag([1.0, 2.0]), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_kernel_round_trip_random(seed):
    s = random_state(np.random.default_rng(seed), 4, mass=0.9, hbar=1.3)
    k = kernel_from_correlations(correlations(s))
    assert np.abs(k - s.kernel).max() <= 1e-9


def test_kernel_round_trip_1d():
    s = state_1d(2.0, -1.0)
    assert np.abs(kernel_from_correlations(correlations(s)) - s.kernel).max() <= 1e-9


# ------------------------------------------------------------ energies

def test_energy_ground_1d():
    sys = OscillatorSystem.normal(np.array([[4.0]]))
    e_cm, e_int = energy(ground_state(sys), sys)
    assert e_cm == 0 and e_int == pytest.approx(1.0)


def test_energy_center_1d():
    sys = OscillatorSystem.normal(np.eye(1))
    e_cm, _ = energy(state_1d(1.0, 0.0, xi=1.0), sys)
    assert e_cm == pytest.approx(0.5)


def test_energy_forms_agree_1d():
    sys = OscillatorSystem.normal(np.eye(1))
    s = state_1d(1.0, 1.0)
    assert energy(s, sys)[1] == pytest.approx(energy_momentum_form(s, sys), rel=1e-12)


def test_energy_forms_agree_ground():
    sys = OscillatorSystem.normal(np.diag([1.0, 9.0]))
    assert energy_momentum_form(ground_state(sys), sys) == pytest.approx(2.0)


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_energy_forms_agree_random(seed, n):
    rng = np.random.default_rng(seed)
    sys = OscillatorSystem(random_spd(rng, n), random_spd(rng, n), mass=rng.uniform(0.5, 2))
    s = random_state(rng, n, mass=sys.mass)
    e_int = energy(s, sys)[1]
    assert abs(e_int - energy_momentum_form(s, sys)) <= 1e-10 * e_int


def test_energy_is_expectation_of_hamiltonian():
    # independent route: <H> from the quadrature moments
    rng = np.random.default_rng(3)
    sys = OscillatorSystem.normal(random_spd(rng, 2), mass=1.2, hbar=0.9)
    s = random_state(rng, 2, mass=1.2, hbar=0.9)
    xx, pp, _ = brute_force_moments(s)
    e_cm, e_int = energy(s, sys)
    expected = 0.5 * np.trace(sys.g @ pp) + 0.5 * np.trace(sys.u @ xx)
    assert e_int == pytest.approx(expected, rel=1e-8)


# ------------------------------------------------------------ stationarity and Hellmann-Feynman

def test_second_variation_unit_direction():
    sys = OscillatorSystem.normal(np.eye(1), hbar=0.7)
    audit = stationarity_audit(ground_state(sys), sys, [(np.eye(1), np.eye(1))])
    assert audit.second_variations[0] == pytest.approx(0.7)


def test_second_variation_positive(rng):
    sys = OscillatorSystem.normal(random_spd(rng, 3))
    g = ground_state(sys)
    dirs = [(random_sym(rng, 3), random_sym(rng, 3)) for _ in range(100)]
    audit = stationarity_audit(g, sys, dirs)
    assert np.all(audit.second_variations > 0)
    # matches the ground-state reduction (hbar/2) Tr(db W^-1 db + da W^-1 da)
    winv = np.linalg.inv(g.a)
    ref = [0.5 * np.trace(db @ winv @ db + da @ winv @ da) for da, db in dirs]
    assert np.allclose(audit.second_variations, ref, rtol=1e-10)


def test_second_variation_matches_finite_difference(rng):
    sys = OscillatorSystem(random_spd(rng, 3), random_spd(rng, 3), mass=1.1)
    s = random_state(rng, 3, mass=1.1)
    da, db = random_sym(rng, 3, 0.3), random_sym(rng, 3, 0.3)
    audit = stationarity_audit(s, sys, [(da, db)])

    def e(h):
        return energy(GaussianState(s.xi, s.pi, s.a + h * da, s.b + h * db, s.mass), sys)[1]

    h = 1e-4
    fd2 = (e(h) - 2 * e(0) + e(-h)) / h**2
    assert audit.second_variations[0] == pytest.approx(fd2, rel=1e-5)
    fd1 = central_difference(e, 0.0)
    assert np.trace(audit.grad_a @ da) + np.trace(audit.grad_b @ db) == pytest.approx(fd1, rel=1e-7)


def test_hellmann_feynman_zero():
    sys = OscillatorSystem.normal(np.diag([1.0, 2.0]))
    assert hellmann_feynman_shift(sys, np.zeros((2, 2)), np.zeros((2, 2))) == 0.0


def test_hellmann_feynman_1d():
    m, hbar, u0 = 1.3, 0.8, 2.0
    sys = OscillatorSystem.normal(np.array([[u0]]), mass=m, hbar=hbar)
    omega = np.sqrt(u0 / m)
    shift = hellmann_feynman_shift(sys, np.zeros((1, 1)), np.eye(1))
    assert shift == pytest.approx(hbar / (4 * m * omega), rel=1e-14)

    def e0(du):
        return ground_energy(OscillatorSystem.normal(np.array([[u0 + du]]), mass=m, hbar=hbar))

    fd = central_difference(e0, 0.0)
    assert abs(shift - fd) <= 1e-4 * abs(fd)


def test_hellmann_feynman_random_metric(rng):
    m = 1.2
    sys = OscillatorSystem.normal(random_spd(rng, 3), mass=m)
    dg = random_sym(rng, 3)
    shift = hellmann_feynman_shift(sys, dg, np.zeros((3, 3)))

    def e0(h):
        # closed-form ground energy (hbar/2) Tr sqrt(g^{1/2} u g^{1/2}) as an independent route
        g = sys.g + h * dg
        w, v = np.linalg.eigh(g)
        gh = (v * np.sqrt(w)) @ v.T
        return 0.5 * sys.hbar * np.sum(np.sqrt(np.linalg.eigvalsh(gh @ sys.u @ gh)))

    fd = central_difference(e0, 0.0)
    assert abs(shift - fd) <= 1e-4 * abs(fd)
