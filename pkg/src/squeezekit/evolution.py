"""Time evolution of Gaussian states of a harmonic oscillator.

The centre ``(xi, pi)`` follows the classical equations of motion and the
kernel ``K`` obeys the matrix Riccati equation

    dK/dt = -i K (m g) K + i u / m.

For ``g = 1/m`` the Riccati equation linearizes through ``K = D^{-1} N omega``
and has the closed-form solution implemented in :func:`evolve_kernel_closed`.
A fixed-step RK4 integrator of the Riccati equation itself is provided as an
independent path.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .errors import StepSizeError
from .oscillator import FrequencyMatrix, GaussianState, OscillatorSystem, solve_frequency

DEFAULT_DT = 1e-3


@dataclass(frozen=True, eq=False)
class EvolutionFactors:
    """Linearizing factors with ``K(t) = D(t)^{-1} N(t) omega``."""

    n: np.ndarray
    d: np.ndarray

    def kernel(self, freq: FrequencyMatrix):
        k = la.solve(self.d, self.n @ freq.omega, "factor D(t)")
        return 0.5 * (k + k.T)


def _as_frequency(omega) -> FrequencyMatrix:
    if isinstance(omega, FrequencyMatrix):
        return omega
    return FrequencyMatrix.from_matrix(np.asarray(omega, dtype=float))


def _trig(freq: FrequencyMatrix, t):
    """``cos(omega t)``, ``sin(omega t)``, ``sin(omega t)/omega`` and ``omega sin(omega t)``."""
    w = freq.eigenvalues
    wt = w * t
    return (
        freq.spectral(np.cos(wt)),
        freq.spectral(np.sin(wt)),
        # t * sinc stays finite for tiny frequencies
        freq.spectral(t * np.sinc(wt / np.pi)),
        freq.spectral(w * np.sin(wt)),
    )


def _require_normalized(sys: OscillatorSystem):
    if not sys.is_normalized:
        raise ValueError("system must be normalized (g = 1/m); see normalize_system")


def evolve_center(xi0, pi0, sys: OscillatorSystem, t):
    """Classical motion of the packet centre after time ``t``.

    ``xi0`` and ``pi0`` may carry leading batch dimensions ``(..., N)``.
    """
    _require_normalized(sys)
    freq = solve_frequency(sys)
    m = sys.mass
    cos, sin, sin_over, omega_sin = _trig(freq, t)
    xi0 = np.asarray(xi0, dtype=float)
    pi0 = np.asarray(pi0, dtype=float)
    # the trigonometric factors are symmetric, so right-multiplication batches cleanly
    xi = xi0 @ cos + pi0 @ sin_over / m
    pi = pi0 @ cos - m * xi0 @ omega_sin
    return xi, pi


def evolve_kernel_closed(k0, omega, t, ordering="left"):
    """Closed-form kernel ``K(t)``.

    ``ordering="left"`` evaluates ``(cos + i K0 sin/omega)^{-1} (K0 cos + i omega sin)``;
    ``ordering="right"`` evaluates the transposed form
    ``(cos K0 + i omega sin)(cos + i sin/omega K0)^{-1}``.  Both agree for
    symmetric ``K0``.
    """
    freq = _as_frequency(omega)
    k0 = la.symmetrize(np.asarray(k0, dtype=complex), "initial kernel K0")
    # work in the omega eigenbasis where the trigonometric factors are diagonal
    k0e = freq.to_eigenbasis(k0)
    w = freq.eigenvalues
    wt = w * t
    cos = np.diag(np.cos(wt))
    sin_over = np.diag(t * np.sinc(wt / np.pi))
    omega_sin = np.diag(w * np.sin(wt))
    if ordering == "left":
        ke = la.solve(cos + 1j * k0e @ sin_over, k0e @ cos + 1j * omega_sin, "resolvent factor")
    elif ordering == "right":
        rhs = cos @ k0e + 1j * omega_sin
        ke = la.solve((cos + 1j * sin_over @ k0e).T, rhs.T, "resolvent factor").T
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    return freq.from_eigenbasis(ke)


def factors_from_kernel(k0, omega):
    """Initial factors ``N0 = K0 omega^{-1}``, ``D0 = I`` reproducing ``K0``."""
    freq = _as_frequency(omega)
    k0 = np.asarray(k0, dtype=complex)
    return EvolutionFactors(k0 @ freq.inverse, np.eye(freq.n_modes, dtype=complex))


def evolve_factors(n0, d0, omega, t) -> EvolutionFactors:
    """Solve the linear pair ``dD/dt = i N omega``, ``dN/dt = i D omega``."""
    freq = _as_frequency(omega)
    cos, sin, _, _ = _trig(freq, t)
    n0 = np.asarray(n0, dtype=complex)
    d0 = np.asarray(d0, dtype=complex)
    return EvolutionFactors(n0 @ cos + 1j * d0 @ sin, d0 @ cos + 1j * n0 @ sin)


def real_part_evolution(a0, d_t, d0=None):
    """``a(t) = D(t)^{-1} a0 D(t)^{-dagger}`` for factors started at ``D0 = I``.

    For a general ``D0`` the conserved combination is ``D0 a0 D0^dagger``.
    """
    a0 = la.symmetrize(np.asarray(a0, dtype=float), "a0")
    c = a0 if d0 is None else d0 @ a0 @ np.conj(d0).T
    x = la.solve(d_t, c, "factor D(t)")
    a = la.solve(d_t, np.conj(x).T, "factor D(t)")
    a = np.conj(a).T
    a = 0.5 * (a + np.conj(a).T)
    return a.real


def _positive_real_part(k):
    if not np.all(np.isfinite(k)):
        return False
    try:
        np.linalg.cholesky(k.real)
    except np.linalg.LinAlgError:
        return False
    return True


def _riccati_rk4(k0, left, right, times, dt):
    """Integrate ``dK/dt = -i K left K + i right`` and sample at ``times`` (ascending)."""
    def rhs(k):
        return -1j * k @ left @ k + 1j * right

    k = la.symmetrize(np.asarray(k0, dtype=complex), "initial kernel")
    out = np.empty((len(times),) + k.shape, dtype=complex)
    t_now = 0.0
    for idx, t_target in enumerate(times):
        span = t_target - t_now
        if span < 0:
            raise ValueError("sample times must be non-negative and ascending")
        steps = int(np.ceil(span / dt - 1e-9)) if span > 0 else 0
        h = span / steps if steps else 0.0
        for step in range(steps):
            with np.errstate(over="ignore", invalid="ignore"):
                k1 = rhs(k)
                k2 = rhs(k + 0.5 * h * k1)
                k3 = rhs(k + 0.5 * h * k2)
                k4 = rhs(k + h * k3)
                k = k + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            k = 0.5 * (k + k.T)
            if not _positive_real_part(k):
                raise StepSizeError(
                    f"real part of K lost positivity near t = {t_now + (step + 1) * h:.6g}; use a smaller dt"
                )
        t_now = t_target
        out[idx] = k
    return out


def _sample(t):
    times = np.atleast_1d(np.asarray(t, dtype=float))
    return times, np.ndim(t) == 0


def evolve_kernel_numeric(k0, sys: OscillatorSystem, t, dt=DEFAULT_DT):
    """RK4 integration of the Riccati equation for ``K``; ``t`` scalar or ascending array."""
    times, scalar = _sample(t)
    out = _riccati_rk4(k0, sys.mass * sys.g, sys.u / sys.mass, times, dt)
    return out[0] if scalar else out


def evolve_inverse_kernel_numeric(k0_inv, sys: OscillatorSystem, t, dt=DEFAULT_DT):
    """RK4 integration of the equation for ``K^{-1}`` (roles of ``g`` and ``u`` swapped)."""
    times, scalar = _sample(t)
    out = _riccati_rk4(k0_inv, sys.u / sys.mass, sys.mass * sys.g, times, dt)
    return out[0] if scalar else out


def first_order_kernel(dk0, omega, t):
    """Linearized evolution ``exp(-i omega t) dK0 exp(-i omega t)`` of a small kernel change."""
    freq = _as_frequency(omega)
    phase = np.exp(-1j * freq.eigenvalues * t)
    dke = freq.to_eigenbasis(np.asarray(dk0, dtype=complex))
    return freq.from_eigenbasis(phase[:, None] * dke * phase[None, :])


def evolve_state(state: GaussianState, sys: OscillatorSystem, t) -> GaussianState:
    """Centre and kernel of ``state`` after time ``t`` (closed form)."""
    freq = solve_frequency(sys)
    xi, pi = evolve_center(state.xi, state.pi, sys, t)
    k = evolve_kernel_closed(state.kernel, freq, t)
    return GaussianState.from_kernel(k, xi, pi, state.mass, state.hbar)
