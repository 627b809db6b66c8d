"""Uncertainty-saturation audits for Gaussian states.

Two checks are provided: the matrix form ``Q J Q = (hbar^2/4) J`` of the
Schrodinger-Robertson equality, and the entropic (position plus momentum
differential entropy) relation with bound ``N ln(pi e hbar)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _linalg as la


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Block matrix ``[[<xx>, sym<xp>], [sym<px>, <pp>]]`` of central second moments."""

    q: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        q = la.symmetrize(np.asarray(self.q, dtype=float), "correlation matrix")
        if q.shape[0] % 2:
            raise ValueError("correlation matrix must have even dimension 2N")
        object.__setattr__(self, "q", q)

    @property
    def n_modes(self) -> int:
        return self.q.shape[0] // 2

    @property
    def xx(self):
        n = self.n_modes
        return self.q[:n, :n]

    @property
    def xp(self):
        n = self.n_modes
        return self.q[:n, n:]

    @property
    def pp(self):
        n = self.n_modes
        return self.q[n:, n:]


@dataclass(frozen=True)
class SymplecticForm:
    n_modes: int

    @cached_property
    def j(self):
        n = self.n_modes
        eye, zero = np.eye(n), np.zeros((n, n))
        return np.block([[zero, eye], [-eye, zero]])


def symplectic_residual(q: CorrelationMatrix, hbar=None) -> float:
    """Relative Frobenius residual of ``Q J Q = (hbar^2/4) J``.

    Vanishes (to rounding) for every pure Gaussian state.
    """
    hbar = q.hbar if hbar is None else hbar
    j = SymplecticForm(q.n_modes).j
    target = hbar**2 / 4 * j
    return float(np.linalg.norm(q.q @ j @ q.q - target) / np.linalg.norm(target))


def _gaussian_entropy(cov):
    cov = la.require_spd(cov, "covariance")
    sign, logdet = np.linalg.slogdet(2 * np.pi * np.e * cov)
    return 0.5 * logdet


def entropies(state):
    """Differential entropies ``(S_x, S_p)`` of ``|psi|^2`` and ``|phi|^2``."""
    from .oscillator import correlations

    q = correlations(state)
    return _gaussian_entropy(q.xx), _gaussian_entropy(q.pp)


def entropic_bound(n_modes: int, hbar: float = 1.0) -> float:
    """Lower bound ``N ln(pi e hbar)``; reduces to ``N (ln pi + 1)`` at ``hbar = 1``."""
    return n_modes * np.log(np.pi * np.e * hbar)


def entropic_excess(state) -> float:
    s_x, s_p = entropies(state)
    return float(s_x + s_p - entropic_bound(state.n_modes, state.hbar))


def entropic_excess_closed_form(state) -> float:
    """``ln det(I + (a^{-1} b)^2) / 2``: the excess in closed form."""
    r = la.solve(state.a, state.b, "kernel real part a")
    sign, logdet = np.linalg.slogdet(np.eye(state.n_modes) + r @ r)
    return 0.5 * logdet
