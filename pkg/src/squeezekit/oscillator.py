"""Gaussian (squeezed) states of an N-dimensional harmonic oscillator.

The Hamiltonian is ``H = (g^{ij} p_i p_j + u_{ij} x^i x^j) / 2`` with symmetric
positive-definite ``g`` and ``u``.  A Gaussian state is fixed by its position
centre ``xi``, momentum centre ``pi`` and the complex symmetric kernel
``K = a + i b`` appearing in

    psi(x) = (det a)^{1/4} (m / pi hbar)^{N/4} exp(-i xi.pi / 2 hbar)
             exp[-(m / 2 hbar) (x - xi) K (x - xi) + i pi.x / hbar]

Most formulas assume the normalized kinetic metric ``g = 1/m``; use
:func:`normalize_system` to get there from an arbitrary ``g``.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _linalg as la
from .errors import ConditioningError, NotPositiveDefiniteError
from .uncertainty import CorrelationMatrix

NORMALIZED_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OscillatorSystem:
    """Hamiltonian data ``(g, u, m, hbar)`` of an N-mode oscillator."""

    g: np.ndarray
    u: np.ndarray
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        g = la.require_spd(self.g, "kinetic metric g")
        try:
            u = la.require_spd(self.u, "potential u")
        except NotPositiveDefiniteError:
            raise NotPositiveDefiniteError(
                "potential u is not positive definite (unstable potential)"
            ) from None
        if g.shape != u.shape:
            raise ValueError(f"g has shape {g.shape} but u has shape {u.shape}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "hbar", float(self.hbar))

    @classmethod
    def normal(cls, u, mass=1.0, hbar=1.0):
        """System with the normalized kinetic metric ``g = 1/m``."""
        u = la.as_square(np.asarray(u, dtype=float), "u")
        return cls(np.eye(u.shape[0]) / mass, u, mass, hbar)

    @classmethod
    def from_frequencies(cls, omega, mass=1.0, hbar=1.0):
        """Normalized system whose frequency matrix is ``omega``.

        ``omega`` may be a 1-D spectrum (diagonal frequency matrix) or a full
        symmetric positive-definite matrix.
        """
        omega = np.asarray(omega, dtype=float)
        if omega.ndim == 1:
            omega = np.diag(omega)
        omega = la.require_spd(omega, "frequency matrix")
        return cls.normal(mass * omega @ omega, mass, hbar)

    @property
    def n_modes(self) -> int:
        return self.g.shape[0]

    @property
    def is_normalized(self) -> bool:
        target = np.eye(self.n_modes) / self.mass
        return np.linalg.norm(self.g - target) <= NORMALIZED_TOL * np.linalg.norm(target)


@dataclass(frozen=True, eq=False)
class FrequencyMatrix:
    """Symmetric positive solution ``omega`` of ``m^2 omega g omega = u``.

    ``eigenvalues``/``eigenvectors`` cache the spectral decomposition so that
    matrix functions of ``omega t`` are cheap and exact.
    """

    omega: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_matrix(cls, omega):
        omega = la.require_spd(omega, "frequency matrix")
        w, v = np.linalg.eigh(omega)
        return cls(omega, w, v)

    @property
    def n_modes(self) -> int:
        return self.omega.shape[0]

    def apply(self, func):
        """Matrix function ``func(omega)`` evaluated in the eigenbasis."""
        return self.spectral(func(self.eigenvalues))

    def spectral(self, values):
        """Matrix with the eigenvectors of ``omega`` and the given eigenvalues."""
        return (self.eigenvectors * values) @ self.eigenvectors.T

    def to_eigenbasis(self, m):
        v = self.eigenvectors
        return v.T @ m @ v

    def from_eigenbasis(self, m):
        v = self.eigenvectors
        return v @ m @ v.T

    @property
    def inverse(self):
        return self.apply(lambda w: 1.0 / w)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Centre ``(xi, pi)`` and squeezing kernel ``K = a + i b`` of a Gaussian wave function."""

    xi: np.ndarray
    pi: np.ndarray
    a: np.ndarray
    b: np.ndarray
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        a = la.require_spd(np.asarray(self.a, dtype=float), "kernel real part a")
        b = la.symmetrize(np.asarray(self.b, dtype=float), "kernel imaginary part b")
        n = a.shape[0]
        if b.shape != a.shape:
            raise ValueError(f"a has shape {a.shape} but b has shape {b.shape}")
        xi = np.asarray(self.xi, dtype=float).reshape(-1)
        pi = np.asarray(self.pi, dtype=float).reshape(-1)
        if xi.shape != (n,) or pi.shape != (n,):
            raise ValueError(f"xi and pi must have length {n}")
        if not (self.mass > 0 and self.hbar > 0):
            raise ValueError("mass and hbar must be positive")
        for name, value in (("xi", xi), ("pi", pi), ("a", a), ("b", b)):
            object.__setattr__(self, name, value)

    @classmethod
    def from_kernel(cls, kernel, xi=None, pi=None, mass=1.0, hbar=1.0):
        """Build a state from a complex symmetric kernel ``K``."""
        kernel = la.as_square(np.asarray(kernel, dtype=complex), "K")
        n = kernel.shape[0]
        xi = np.zeros(n) if xi is None else xi
        pi = np.zeros(n) if pi is None else pi
        return cls(xi, pi, kernel.real, kernel.imag, mass, hbar)

    @property
    def n_modes(self) -> int:
        return self.a.shape[0]

    @property
    def kernel(self) -> np.ndarray:
        return self.a + 1j * self.b

    def with_kernel(self, kernel):
        return GaussianState.from_kernel(kernel, self.xi, self.pi, self.mass, self.hbar)

    def with_center(self, xi, pi):
        return GaussianState(xi, pi, self.a, self.b, self.mass, self.hbar)


@dataclass(frozen=True, eq=False)
class MomentumKernel:
    """Real and imaginary parts of ``K^{-1} = c + i d``."""

    c: np.ndarray
    d: np.ndarray

    @property
    def inverse_kernel(self):
        return self.c + 1j * self.d


@dataclass(frozen=True, eq=False)
class StationarityAudit:
    """First and second variations of the internal energy at a state.

    ``grad_a``/``grad_b`` are the matrices ``F`` with ``dE_int = Tr(F da) + Tr(G db)``;
    ``second_variations[k]`` is ``d^2 E_int / ds^2`` along the k-th supplied
    direction ``(da, db)``.
    """

    grad_a: np.ndarray
    grad_b: np.ndarray
    second_variations: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _check_compatible(state: GaussianState, sys: OscillatorSystem):
    if state.n_modes != sys.n_modes:
        raise ValueError(f"state has {state.n_modes} modes but system has {sys.n_modes}")
    if not (np.isclose(state.mass, sys.mass) and np.isclose(state.hbar, sys.hbar)):
        raise ValueError("state and system disagree on mass or hbar")


def normalize_system(sys: OscillatorSystem):
    """Change variables so that the kinetic metric becomes ``1/m``.

    Returns ``(normalized_system, T)`` where the original coordinates are
    ``x = T x'`` and momenta ``p = T^{-T} p'``.  ``T = (m g)^{1/2}`` and the new
    potential is ``u' = T^T u T``.
    """
    t = la.sym_function(sys.mass * sys.g, np.sqrt)
    u_new = t.T @ sys.u @ t
    return OscillatorSystem.normal(0.5 * (u_new + u_new.T), sys.mass, sys.hbar), t


def solve_frequency(sys: OscillatorSystem) -> FrequencyMatrix:
    """Symmetric positive solution of ``m^2 omega g omega = u``.

    For ``g = 1/m`` this is simply ``sqrt(u / m)``; for general ``g`` the
    congruence ``omega = g^{-1/2} (g^{1/2} u g^{1/2})^{1/2} g^{-1/2} / m`` is used.
    """
    m = sys.mass
    if sys.is_normalized:
        omega = la.sym_function(sys.u / m, np.sqrt)
    else:
        gh = la.sym_function(sys.g, np.sqrt)
        gih = la.sym_function(sys.g, lambda w: 1.0 / np.sqrt(w))
        inner = gh @ sys.u @ gh
        inner = la.sym_function(0.5 * (inner + inner.T), np.sqrt)
        omega = gih @ inner @ gih / m
    omega = 0.5 * (omega + omega.T)
    residual = la.rel_frobenius(m * m * omega @ sys.g @ omega, sys.u)
    if residual > 1e-10:
        raise ConditioningError(f"frequency equation residual {residual:.3e} exceeds 1e-10")
    return FrequencyMatrix.from_matrix(omega)


def ground_state(sys: OscillatorSystem) -> GaussianState:
    freq = solve_frequency(sys)
    n = sys.n_modes
    return GaussianState(np.zeros(n), np.zeros(n), freq.omega, np.zeros((n, n)), sys.mass, sys.hbar)


def _points(x, n):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape[-1] != n:
        raise ValueError(f"points must have trailing dimension {n}, got {x.shape}")
    return x


def amplitude(state: GaussianState, x) -> np.ndarray:
    """Position-space wave function ``psi(x)``; ``x`` has shape ``(..., N)``."""
    n, m, hbar = state.n_modes, state.mass, state.hbar
    x = _points(x, n)
    y = x - state.xi
    quad = np.einsum("...i,ij,...j->...", y, state.kernel, y)
    norm = np.linalg.det(state.a) ** 0.25 * (m / (np.pi * hbar)) ** (n / 4)
    phase = np.exp(-1j * state.xi @ state.pi / (2 * hbar))
    return norm * phase * np.exp(-m / (2 * hbar) * quad + 1j * (x @ state.pi) / hbar)


def _inverse_sqrt_det_factor(state: GaussianState):
    """``prod_j (1 + i lam_j)^{-1/2}`` with ``lam`` the eigenvalues of ``a^{-1/2} b a^{-1/2}``.

    Together with ``(det a)^{-1/2}`` this is the branch of ``(det K)^{-1/2}``
    continuous from real positive kernels, which the Fourier transform of a
    Gaussian produces.
    """
    aih = la.sym_function(state.a, lambda w: 1.0 / np.sqrt(w))
    lam = np.linalg.eigvalsh(aih @ state.b @ aih)
    return np.prod((1.0 + 1j * lam) ** -0.5)


def momentum_amplitude(state: GaussianState, p) -> np.ndarray:
    """Momentum-space wave function ``phi(p)``, the unitary Fourier transform of ``psi``."""
    n, m, hbar = state.n_modes, state.mass, state.hbar
    p = _points(p, n)
    kinv = momentum_kernel(state).inverse_kernel
    q = p - state.pi
    quad = np.einsum("...i,ij,...j->...", q, kinv, q)
    norm = (
        np.linalg.det(state.a) ** -0.25
        * _inverse_sqrt_det_factor(state)
        * (np.pi * hbar * m) ** (-n / 4)
    )
    phase = np.exp(1j * state.xi @ state.pi / (2 * hbar))
    return norm * phase * np.exp(-quad / (2 * m * hbar) - 1j * (p @ state.xi) / hbar)


def momentum_kernel(state: GaussianState) -> MomentumKernel:
    k = state.kernel
    kinv = la.solve(k, np.eye(state.n_modes, dtype=complex), "kernel K")
    kinv = 0.5 * (kinv + kinv.T)
    return MomentumKernel(kinv.real.copy(), kinv.imag.copy())


def correlations(state: GaussianState) -> CorrelationMatrix:
    """Central second moments of positions and momenta in block form.

    The off-diagonal block is the symmetrized ``<x^i p_j + p_j x^i> / 2``.
    """
    m, hbar = state.mass, state.hbar
    ainv = la.inv(state.a, "kernel real part a")
    ainv_b = ainv @ state.b
    xx = hbar / (2 * m) * ainv
    pp = hbar * m / 2 * (state.a + state.b @ ainv_b)
    xp = -hbar / 2 * ainv_b
    q = np.block([[xx, xp], [xp.T, pp]])
    return CorrelationMatrix(0.5 * (q + q.T), hbar=hbar, mass=m)


def kernel_from_correlations(q: CorrelationMatrix) -> np.ndarray:
    """Recover ``K`` from second moments: ``K = -i <xx>^{-1} <xp> / m``.

    ``<xp>`` is the unsymmetrized product, rebuilt as ``sym<xp> + (i hbar/2) I``.
    """
    n = q.n_modes
    xp_full = q.xp + 0.5j * q.hbar * np.eye(n)
    k = -1j * la.solve(q.xx, xp_full, "position covariance <xx>") / q.mass
    return la.symmetrize(k, "reconstructed kernel", tol=1e-8)


def energy(state: GaussianState, sys: OscillatorSystem):
    """Return ``(E_cm, E_int)``: classical centre energy and internal (squeezing) energy."""
    _check_compatible(state, sys)
    g, u, m, hbar = sys.g, sys.u, sys.mass, sys.hbar
    e_cm = 0.5 * state.pi @ g @ state.pi + 0.5 * state.xi @ u @ state.xi
    ainv = la.inv(state.a, "kernel real part a")
    e_int = hbar / 4 * np.trace(
        m * g @ state.b @ ainv @ state.b + m * g @ state.a + u @ ainv / m
    )
    return float(e_cm), float(e_int)


def energy_momentum_form(state: GaussianState, sys: OscillatorSystem) -> float:
    """Internal energy written with ``c, d`` (real/imaginary parts of ``K^{-1}``)."""
    _check_compatible(state, sys)
    g, u, m, hbar = sys.g, sys.u, sys.mass, sys.hbar
    mk = momentum_kernel(state)
    cinv = la.inv(mk.c, "momentum kernel c")
    return float(
        hbar / 4 * np.trace(u @ mk.d @ cinv @ mk.d / m + u @ mk.c / m + m * g @ cinv)
    )


def stationarity_audit(
    state: GaussianState,
    sys: OscillatorSystem,
    directions: Sequence = (),
) -> StationarityAudit:
    """Gradient of ``E_int`` with respect to ``a`` and ``b``, plus second variations.

    At the ground state of a normalized system both gradients vanish and the
    second variation reduces to ``(hbar/2) Tr(db W^{-1} db + da W^{-1} da)``
    with ``W`` the frequency matrix.
    """
    _check_compatible(state, sys)
    hbar = sys.hbar
    gm = sys.mass * sys.g
    um = sys.u / sys.mass
    a, b = state.a, state.b
    ainv = la.inv(a, "kernel real part a")
    grad_a = hbar / 4 * (gm - ainv @ b @ gm @ b @ ainv - ainv @ um @ ainv)
    grad_b = hbar / 4 * (ainv @ b @ gm + gm @ b @ ainv)
    seconds = []
    for da, db in directions:
        da = la.symmetrize(da, "direction da")
        db = la.symmetrize(db, "direction db")
        x = ainv @ da @ ainv
        quad_g = db @ ainv @ db - db @ x @ b - b @ x @ db + b @ x @ da @ ainv @ b
        quad_u = x @ da @ ainv
        seconds.append(hbar / 2 * (np.trace(gm @ quad_g) + np.trace(um @ quad_u)))
    return StationarityAudit(
        0.5 * (grad_a + grad_a.T), 0.5 * (grad_b + grad_b.T), np.array(seconds, dtype=float)
    )


def ground_energy(sys: OscillatorSystem) -> float:
    return energy(ground_state(sys), sys)[1]


def hellmann_feynman_shift(sys: OscillatorSystem, dg, du) -> float:
    """First-order change of the ground energy under ``g -> g + dg``, ``u -> u + du``."""
    dg = la.symmetrize(np.asarray(dg, dtype=float), "dg")
    du = la.symmetrize(np.asarray(du, dtype=float), "du")
    a = solve_frequency(sys).omega
    ainv = la.inv(a, "frequency matrix")
    return float(sys.hbar / 4 * np.trace(sys.mass * dg @ a + du @ ainv / sys.mass))
