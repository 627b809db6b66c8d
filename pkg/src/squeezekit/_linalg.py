"""Small dense linear-algebra helpers used across the package.

All matrix functions of symmetric arguments go through the spectral
decomposition; every solve checks the condition number first.
"""

import numpy as np

from .errors import ConditioningError, NotPositiveDefiniteError

ASYMMETRY_TOL = 1e-10
EIG_RATIO_TOL = 1e-12
COND_MAX = 1e12


def as_square(m, name="matrix"):
    m = np.atleast_2d(np.asarray(m))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


def symmetrize(m, name="matrix", tol=ASYMMETRY_TOL):
    """Return (m + m.T)/2, rejecting inputs whose asymmetry exceeds `tol` (relative)."""
    m = as_square(m, name)
    scale = max(np.linalg.norm(m), 1.0)
    if np.linalg.norm(m - m.T) > tol * scale:
        raise ValueError(f"{name} is not symmetric (tolerance {tol:g})")
    return 0.5 * (m + m.T)


def require_spd(m, name="matrix"):
    """Symmetrize and check positive definiteness by Cholesky and eigenvalue spread."""
    m = symmetrize(np.asarray(m, dtype=float), name)
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError(f"{name} is not positive definite") from None
    w = np.linalg.eigvalsh(m)
    if w[0] < EIG_RATIO_TOL * w[-1]:
        raise ConditioningError(
            f"{name} is nearly singular (eigenvalue ratio {w[0] / w[-1]:.3e})"
        )
    return m


def sym_function(m, func):
    """Apply a scalar function to a symmetric matrix through its eigen-decomposition."""
    w, v = np.linalg.eigh(m)
    return (v * func(w)) @ v.T


def check_condition(m, name="matrix", cond_max=COND_MAX):
    c = np.linalg.cond(m)
    if not np.isfinite(c) or c > cond_max:
        raise ConditioningError(f"{name} is ill-conditioned (cond = {c:.3e})")


def solve(a, b, name="matrix"):
    """Solve a x = b after a condition-number check."""
    check_condition(a, name)
    return np.linalg.solve(a, b)


def inv(a, name="matrix"):
    check_condition(a, name)
    return np.linalg.inv(a)


def rel_frobenius(a, b):
    """||a - b||_F / ||b||_F, falling back to the absolute norm when b vanishes."""
    nb = np.linalg.norm(b)
    d = np.linalg.norm(np.asarray(a) - np.asarray(b))
    return d / nb if nb > 0 else d
