"""Wigner function of Gaussian states.

The defining integral carries the prefactor ``2^{-N}`` (rather than
``(2 pi hbar)^{-N}``), which makes the Wigner function of any squeezed state
a pure exponential with peak value 1.  Its phase-space integral is therefore
``(pi hbar)^N``.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .errors import QuadratureError
from .evolution import evolve_center
from .oscillator import GaussianState, OscillatorSystem, amplitude

QUADRATURE_NODES = 96


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if x.shape != p.shape:
            raise ValueError("x and p must have the same shape")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValueError("phase point must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)


def _unpack(pt, n):
    if not isinstance(pt, PhasePoint):
        pt = PhasePoint(*pt)
    x = pt.x.reshape(pt.x.shape or (1,))
    p = pt.p.reshape(pt.p.shape or (1,))
    if x.shape[-1] != n:
        raise ValueError(f"phase point must have trailing dimension {n}")
    return x, p


def wigner_value(state: GaussianState, pt) -> np.ndarray:
    """Closed-form Wigner function at ``pt = (x, p)``; batches over leading dimensions.

    With ``y = x - xi`` and ``q = p - pi`` the exponent is
    ``-(m/hbar) y (a + b a^-1 b) y - q a^-1 q / (m hbar) - (2/hbar) y b a^-1 q``.
    """
    x, p = _unpack(pt, state.n_modes)
    m, hbar = state.mass, state.hbar
    ainv = la.inv(state.a, "kernel real part a")
    ba = state.b @ ainv
    y = x - state.xi
    q = p - state.pi
    expo = (
        m * np.einsum("...i,ij,...j->...", y, state.a + ba @ state.b, y)
        + np.einsum("...i,ij,...j->...", q, ainv, q) / m
        + 2 * np.einsum("...i,ij,...j->...", y, ba, q)
    )
    return np.exp(-expo / hbar)


def _wigner_quadrature(state: GaussianState, x, p, nodes):
    n, m, hbar = state.n_modes, state.mass, state.hbar
    t, w = np.polynomial.hermite.hermgauss(nodes)
    grids = np.meshgrid(*([t] * n), indexing="ij")
    tt = np.stack([g.ravel() for g in grids], axis=-1)
    ww = np.prod(np.meshgrid(*([w] * n), indexing="ij"), axis=0).ravel()
    # eta = scale @ t maps the Gaussian envelope exp(-(m/4hbar) eta a eta) onto exp(-|t|^2)
    scale = 2 * np.sqrt(hbar / m) * la.sym_function(state.a, lambda v: 1 / np.sqrt(v))
    eta = tt @ scale.T
    integrand = (
        np.exp(1j * eta @ p / hbar)
        * amplitude(state, x - eta / 2)
        * np.conj(amplitude(state, x + eta / 2))
        * np.exp(np.sum(tt * tt, axis=-1))
    )
    total = np.sum(ww * integrand) * abs(np.linalg.det(scale))
    return 2.0**-n * total


def wigner_by_integral(state: GaussianState, pt, nodes=QUADRATURE_NODES) -> float:
    """Wigner function from Gauss-Hermite quadrature of its defining integral (N <= 2)."""
    if state.n_modes > 2:
        raise ValueError("quadrature route supports at most two modes")
    x, p = _unpack(pt, state.n_modes)
    if x.ndim != 1:
        raise ValueError("quadrature route evaluates one phase point at a time")
    fine = _wigner_quadrature(state, x, p, nodes)
    coarse = _wigner_quadrature(state, x, p, max(nodes * 2 // 3, 8))
    if abs(fine - coarse) > 1e-9 or abs(fine.imag) > 1e-9:
        raise QuadratureError(
            f"Wigner quadrature did not settle ({nodes} nodes: {fine:.3e}, fewer: {coarse:.3e})"
        )
    return float(fine.real)


def wigner_evolved(state: GaussianState, pt, sys: OscillatorSystem, t) -> np.ndarray:
    """Wigner function at time ``t`` from the classical flow: ``W(x, p, t) = W(x(-t), p(-t), 0)``."""
    x, p = _unpack(pt, state.n_modes)
    x_back, p_back = evolve_center(x, p, sys, -t)
    return wigner_value(state, (x_back, p_back))
