"""Periodic lattice, transverse fields and dielectric perturbation profiles.

Fourier convention: ``f~(k) = FFT(f) / M^3`` so that a lattice field is
``f(r) = sum_k f~(k) exp(i k.r)`` and ``int |f|^2 d^3r = V sum_k |f~(k)|^2``.
Continuum integrals ``int d^3k/(2 pi)^3`` correspond to ``(1/V) sum_k``.
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import TransversalityError

TRANSVERSE_TOL = 1e-10
CONJUGATE_TOL = 1e-12
WARN_FRACTION = 0.1
MAX_FRACTION = 0.5


class FirstOrderWarning(UserWarning):
    """Perturbation large enough to question first-order validity."""


def dyad(k):
    """Orthonormal transverse pair ``(e1, e2)`` for a nonzero wave vector.

    The smallest-index Cartesian axis not parallel to ``k`` seeds Gram-Schmidt;
    ``e2 = k_hat x e1`` makes ``(e1, e2, k_hat)`` right-handed.
    """
    k = np.asarray(k, dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0:
        raise ValueError("zero wave vector has no transverse dyad")
    khat = k / norm
    for axis in np.eye(3):
        seed = axis - (axis @ khat) * khat
        if np.linalg.norm(seed) > 1e-8:
            break
    e1 = seed / np.linalg.norm(seed)
    return e1, np.cross(khat, e1)


def transverse_projector(k):
    """``P(k) = I - k_hat k_hat``."""
    k = np.asarray(k, dtype=float)
    kk = k @ k
    if kk == 0:
        raise ValueError("transverse projector undefined at k = 0")
    return np.eye(3) - np.outer(k, k) / kk


@dataclass(frozen=True)
class LatticeConfig:
    """Cubic periodic box of side ``L`` with ``M`` sites per axis and medium ``(eps, mu)``."""

    L: float
    M: int
    eps: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0
    k_max: float | None = None

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("box length L must be positive")
        if int(self.M) != self.M or self.M < 2 or self.M % 2:
            raise ValueError("sites per axis M must be an even integer >= 2")
        for name in ("eps", "mu", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        limit = self.k_nyquist
        k_max = limit if self.k_max is None else float(self.k_max)
        if not 0 < k_max <= limit * (1 + 1e-12):
            raise ValueError(f"k_max must lie in (0, pi M / L = {limit:.6g}]")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "k_max", k_max)

    @property
    def k_nyquist(self):
        return np.pi * self.M / self.L

    @property
    def c(self):
        return 1.0 / np.sqrt(self.eps * self.mu)

    @property
    def volume(self):
        return self.L**3

    @property
    def cell_volume(self):
        return (self.L / self.M) ** 3

    @property
    def dk(self):
        return 2 * np.pi / self.L

    @cached_property
    def indices(self):
        """Integer wave-vector labels, shape ``(M, M, M, 3)``, in FFT order."""
        n = np.rint(np.fft.fftfreq(self.M, 1.0 / self.M)).astype(int)
        return np.stack(np.meshgrid(n, n, n, indexing="ij"), axis=-1)

    @cached_property
    def k(self):
        return self.dk * self.indices

    @cached_property
    def kmag(self):
        return np.linalg.norm(self.k, axis=-1)

    @cached_property
    def positions(self):
        x = np.arange(self.M) * self.L / self.M
        return np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)

    @cached_property
    def active(self):
        """Modes carried by the lattice: nonzero, below ``k_max``, off the Nyquist planes."""
        nyquist = np.any(self.indices == -self.M // 2, axis=-1)
        return (self.kmag > 0) & ~nyquist & (self.kmag <= self.k_max * (1 + 1e-12))

    @cached_property
    def half(self):
        """One representative of each ``(k, -k)`` pair: first nonzero index positive."""
        idx = self.indices
        first = np.where(idx[..., 0] != 0, idx[..., 0], np.where(idx[..., 1] != 0, idx[..., 1], idx[..., 2]))
        return self.active & (first > 0)

    @cached_property
    def dyads(self):
        """Polarization vectors on the grid, shape ``(M, M, M, 2, 3)``; zero off the active set."""
        out = np.zeros(self.indices.shape[:3] + (2, 3))
        for pos in zip(*np.nonzero(self.active)):
            out[pos] = dyad(self.k[pos])
        return out

    def flat_index(self, n):
        """Array position of integer label ``n`` (negative entries wrap)."""
        n = np.asarray(n, dtype=int)
        return tuple(np.mod(n, self.M))

    def mirror(self, arr):
        """``arr(-n)`` for a grid array in FFT order."""
        return np.roll(np.flip(arr, axis=(0, 1, 2)), 1, axis=(0, 1, 2))


@dataclass(frozen=True, eq=False)
class TransverseField:
    """Fourier components ``f~(k)`` of a real transverse vector field on the lattice."""

    lattice: LatticeConfig
    amplitudes: np.ndarray

    def __post_init__(self):
        lat = self.lattice
        f = np.asarray(self.amplitudes, dtype=complex)
        if f.shape != (lat.M, lat.M, lat.M, 3):
            raise ValueError(f"field amplitudes must have shape {(lat.M,) * 3 + (3,)}")
        scale = np.abs(f).max()
        if scale > 0:
            if np.abs(f[~lat.active]).max(initial=0) > CONJUGATE_TOL * scale:
                raise ValueError("field has content outside the active modes (zero, Nyquist or above k_max)")
            khat = np.divide(lat.k, lat.kmag[..., None], out=np.zeros_like(lat.k), where=lat.kmag[..., None] > 0)
            if np.abs(np.sum(khat * f, axis=-1)).max() > TRANSVERSE_TOL * scale:
                raise TransversalityError("field is not transverse (k . f(k) != 0)")
            if np.abs(lat.mirror(f) - np.conj(f)).max() > CONJUGATE_TOL * scale:
                raise ValueError("field violates f(-k) = conj f(k); it is not real")
        object.__setattr__(self, "amplitudes", f)

    @classmethod
    def zero(cls, lattice):
        return cls(lattice, np.zeros((lattice.M,) * 3 + (3,), dtype=complex))

    @classmethod
    def from_real(cls, lattice, values):
        """Build from real samples of shape ``(M, M, M, 3)``."""
        values = np.asarray(values, dtype=float)
        return cls(lattice, np.fft.fftn(values, axes=(0, 1, 2)) / lattice.M**3)

    @classmethod
    def plane_wave(cls, lattice, n, polarization, amplitude=1.0):
        """Single Fourier pair: ``f~(n) = amplitude * e`` and its conjugate at ``-n``.

        ``polarization`` is 0 or 1 (the dyad vector) or a complex 2-vector of
        dyad weights.
        """
        pos = lattice.flat_index(n)
        neg = lattice.flat_index(-np.asarray(n))
        if not lattice.active[pos]:
            raise ValueError(f"mode {tuple(n)} is not an active lattice mode")
        e = lattice.dyads[pos]
        if np.ndim(polarization) == 0:
            vec = e[int(polarization)].astype(complex)
        else:
            vec = np.asarray(polarization, dtype=complex) @ e
        f = np.zeros((lattice.M,) * 3 + (3,), dtype=complex)
        f[pos] = amplitude * vec
        f[neg] = np.conj(amplitude * vec)
        return cls(lattice, f)

    def to_real(self):
        return np.real(np.fft.ifftn(self.amplitudes * self.lattice.M**3, axes=(0, 1, 2)))

    def __add__(self, other):
        if other.lattice != self.lattice:
            raise ValueError("fields live on different lattices")
        return TransverseField(self.lattice, self.amplitudes + other.amplitudes)

    def scaled(self, factor: float):
        return TransverseField(self.lattice, factor * self.amplitudes)

    def norm_sq(self):
        """``int |f|^2 d^3r``."""
        return self.lattice.volume * float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True, eq=False)
class PerturbationProfile:
    """Real dielectric change ``delta_eps(r)`` sampled on the lattice sites."""

    lattice: LatticeConfig
    values: np.ndarray
    compact: bool = False

    def __post_init__(self):
        lat = self.lattice
        v = np.asarray(self.values, dtype=float)
        if v.shape != (lat.M,) * 3:
            raise ValueError(f"profile must have shape {(lat.M,) * 3}")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile must be finite")
        frac = np.abs(v).max(initial=0) / lat.eps
        if frac > MAX_FRACTION:
            raise ValueError(f"|delta eps| reaches {frac:.0%} of eps; first-order treatment invalid")
        if frac > WARN_FRACTION:
            warnings.warn(f"|delta eps| reaches {frac:.0%} of eps; first-order accuracy degraded", FirstOrderWarning, stacklevel=3)
        object.__setattr__(self, "values", v)

    @classmethod
    def point(cls, lattice, strength, site=(0, 0, 0)):
        v = np.zeros((lattice.M,) * 3)
        v[lattice.flat_index(site)] = strength
        return cls(lattice, v, compact=True)

    @classmethod
    def constant(cls, lattice, value):
        return cls(lattice, np.full((lattice.M,) * 3, float(value)))

    @classmethod
    def gaussian(cls, lattice, amplitude, width, center=None):
        """Periodized Gaussian bump (minimum-image distance to ``center``)."""
        center = np.full(3, lattice.L / 2) if center is None else np.asarray(center, dtype=float)
        d = lattice.positions - center
        d -= lattice.L * np.rint(d / lattice.L)
        r2 = np.sum(d * d, axis=-1)
        return cls(lattice, amplitude * np.exp(-r2 / (2 * width**2)), compact=True)

    def fourier(self):
        """``delta_eps~(q) = cell_volume * FFT(delta_eps)``, the continuum transform on the lattice."""
        return self.lattice.cell_volume * np.fft.fftn(self.values)

    def integral(self):
        return self.lattice.cell_volume * float(np.sum(self.values))
