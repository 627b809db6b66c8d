"""First-order squeezing kernels induced by a dielectric perturbation.

The momentum-space kernel is

    Gamma~(k1, k2) = c (k1^2 P(k1)) (k2^2 P(k2)) / (|k1| |k2| (|k1| + |k2|)),

and in position space the same tensor follows by applying the matching
transverse derivative operators to the scalar propagator ``c G(r1, r2, t)``.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import LightConeError
from .lattice import LatticeConfig, PerturbationProfile, transverse_projector

TWO_PI_CUBED = (2 * np.pi) ** 3
LIGHT_CONE_BAND = 1e-6
COINCIDENT_RADII = 1e-4

_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12
_OFFSETS = np.arange(-2, 3)
_PAIRS = [(a, b) for a in range(3) for b in range(a, 3)]


def gamma_momentum(k1, k2, c=1.0):
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    n1, n2 = np.linalg.norm(k1), np.linalg.norm(k2)
    if n1 == 0 or n2 == 0:
        raise ValueError("gamma_momentum is undefined for a zero wave vector")
    return c * n1 * n2 / (n1 + n2) * transverse_projector(k1) @ transverse_projector(k2)


def gamma_static_scalar(r1, r2, c=1.0):
    """Static scalar core ``c / ((2 pi)^3 r1 r2 (r1 + r2))``."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if np.any(r1 <= 0) or np.any(r2 <= 0):
        raise ValueError("radii must be positive")
    return c / (TWO_PI_CUBED * r1 * r2 * (r1 + r2))


def _front(r, ct):
    """``F(r) = theta(r - |ct|)/r + (i/(pi r)) ln|(r - ct)/(r + ct)|`` with ``theta(0) = 1/2``."""
    with np.errstate(divide="ignore"):
        log = np.log(np.abs((r - ct) / (r + ct)))
    return np.heaviside(r - np.abs(ct), 0.5) / r + 1j * log / (np.pi * r)


def _coincident(r, ct):
    """``-F'(r) / 2r``: the ``r1 = r2`` limit of the propagator times ``(2 pi)^3``."""
    log = np.log(np.abs((r - ct) / (r + ct)))
    theta = np.heaviside(r - np.abs(ct), 0.5)
    return (
        theta / (2 * r**3)
        + 1j * log / (2 * np.pi * r**3)
        - 1j * ct / (np.pi * r**2 * (r**2 - ct**2))
    )


def g_scalar(r1, r2, t, c=1.0, strict=True):
    """Closed-form space-time squeezing propagator ``G(r1, r2, t)``; broadcasts over arrays.

    Points within ``1e-6 * max(r_i, c|t|)`` of the light cone ``r_i = c|t|``
    raise :class:`LightConeError`, or become NaN when ``strict`` is false.
    """
    r1, r2, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r1, r2, t)))
    if np.any(r1 <= 0) or np.any(r2 <= 0):
        raise ValueError("radii must be positive")
    ct = c * t
    band = LIGHT_CONE_BAND * np.maximum(np.maximum(r1, r2), np.abs(ct))
    flagged = (np.abs(r1 - np.abs(ct)) < band) | (np.abs(r2 - np.abs(ct)) < band)
    if strict and np.any(flagged):
        raise LightConeError("evaluation point lies on the light cone r = c|t|, where the first-order formula is singular")

    rmid = 0.5 * (r1 + r2)
    # coincident branch only when both radii sit well clear of the cone on the same side
    clear = np.abs(rmid - np.abs(ct)) > 0.1 * rmid
    close = (np.abs(r1 - r2) < COINCIDENT_RADII * rmid) & clear
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = (_front(r2, ct) - _front(r1, ct)) / ((r1 - r2) * (r1 + r2))
        limit = 2 * rmid * _coincident(rmid, ct) / (r1 + r2)
    out = np.where(close, limit, generic) / TWO_PI_CUBED
    out = np.where(flagged, np.nan + 0j, out)
    return out[()] if out.ndim == 0 else out


def _stencils(h):
    """Second-derivative stencils for each index pair: offsets ``(P, 3)`` and weights ``(6, P)``."""
    points, blocks = [], []
    for a, b in _PAIRS:
        if a == b:
            offs = np.zeros((5, 3))
            offs[:, a] = _OFFSETS * h
            w = _D2
        else:
            ja, jb = np.meshgrid(_OFFSETS, _OFFSETS, indexing="ij")
            offs = np.zeros((25, 3))
            offs[:, a], offs[:, b] = ja.ravel() * h, jb.ravel() * h
            w = np.outer(_D1, _D1).ravel()
        points.append(offs)
        blocks.append(w / h**2)
    weights = np.zeros((len(_PAIRS), sum(len(w) for w in blocks)))
    pos = 0
    for row, w in enumerate(blocks):
        weights[row, pos:pos + len(w)] = w
        pos += len(w)
    return np.concatenate(points), weights


def _pair_index(a, b):
    return _PAIRS.index((min(a, b), max(a, b)))


def gamma_position(r1, r2, t=0.0, c=1.0, rel_step=0.01):
    """Position-space tensor ``Gamma^{ij}(r1, r2, t)`` by 4th-order finite differences.

    Applies ``delta^{ij} L1 L2 - d2i d2j L1 - d1i d1j L2 + d1i d1k d2k d2j`` (``L``
    the Laplacian in the indicated argument) to ``c G(|r1|, |r2|, t)``.  Steps
    are ``rel_step`` times each radius.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    n1, n2 = np.linalg.norm(r1), np.linalg.norm(r2)
    if n1 == 0 or n2 == 0:
        raise ValueError("gamma_position needs nonzero position vectors")
    off1, w1 = _stencils(rel_step * n1)
    off2, w2 = _stencils(rel_step * n2)
    rad1 = np.linalg.norm(r1 + off1, axis=-1)
    rad2 = np.linalg.norm(r2 + off2, axis=-1)
    vals = c * g_scalar(rad1[:, None], rad2[None, :], t, c)
    if t == 0:
        vals = vals.real
    d = w1 @ vals @ w2.T

    def T(a, b, e, f):
        return d[_pair_index(a, b), _pair_index(e, f)]

    lap_lap = sum(T(a, a, b, b) for a in range(3) for b in range(3))
    out = np.empty((3, 3), dtype=d.dtype)
    for i in range(3):
        for j in range(3):
            out[i, j] = (
                (i == j) * lap_lap
                - sum(T(a, a, i, j) for a in range(3))
                - sum(T(i, j, b, b) for b in range(3))
                + sum(T(i, k, k, j) for k in range(3))
            )
    return out


@dataclass(frozen=True, eq=False)
class DeltaKernel:
    """First-order change of the squeezing kernel produced by ``delta_eps`` at time ``t``.

    Propagation after the perturbation uses the background (vacuum) ``c``.
    """

    lattice: LatticeConfig
    profile: PerturbationProfile
    t: float = 0.0

    def __post_init__(self):
        if self.profile.lattice != self.lattice:
            raise ValueError("profile and lattice differ")

    def _deps_hat(self):
        return self.profile.fourier()

    def momentum(self, n1, n2):
        """``exp(-i c|k1| t) Gamma~(k1, k2) delta_eps~(k1 - k2) exp(-i c|k2| t)`` for integer labels."""
        lat = self.lattice
        n1 = np.asarray(n1, dtype=int)
        n2 = np.asarray(n2, dtype=int)
        k1, k2 = lat.dk * n1, lat.dk * n2
        phase = np.exp(-1j * lat.c * (np.linalg.norm(k1) + np.linalg.norm(k2)) * self.t)
        deps = self._deps_hat()[lat.flat_index(n1 - n2)]
        return phase * deps * gamma_momentum(k1, k2, lat.c)

    def dense(self, max_modes=2048):
        """All active-mode pairs: ``(labels (n, 3), kernel (n, n, 3, 3))``."""
        lat = self.lattice
        labels = lat.indices[lat.active]
        if len(labels) > max_modes:
            raise ValueError(f"{len(labels)} active modes exceed max_modes = {max_modes}")
        k = lat.dk * labels
        kn = np.linalg.norm(k, axis=-1)
        proj = np.eye(3) - np.einsum("ni,nj->nij", k, k) / (kn**2)[:, None, None]
        diff = np.mod(labels[:, None, :] - labels[None, :, :], lat.M)
        deps = self._deps_hat()[diff[..., 0], diff[..., 1], diff[..., 2]]
        scale = lat.c * np.outer(kn, kn) / np.add.outer(kn, kn)
        phase = np.exp(-1j * lat.c * np.add.outer(kn, kn) * self.t)
        out = np.einsum("nij,mjl->nmil", proj, proj) * (scale * deps * phase)[..., None, None]
        return labels, out

    def position(self, r1, r2, rel_step=0.01):
        """``cell_volume * sum_r delta_eps(r) Gamma(r1 - r, r - r2, t)`` over the profile support."""
        lat = self.lattice
        vals = self.profile.values
        out = np.zeros((3, 3), dtype=complex if self.t else float)
        for site in zip(*np.nonzero(vals)):
            r = lat.positions[site]
            out = out + vals[site] * gamma_position(np.asarray(r1) - r, r - np.asarray(r2), self.t, lat.c, rel_step)
        return lat.cell_volume * out


def delta_kernel(profile: PerturbationProfile, lattice: LatticeConfig, t=0.0) -> DeltaKernel:
    return DeltaKernel(lattice, profile, float(t))
