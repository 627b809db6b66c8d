"""Vacuum functionals, photon number and coherent evolution of the lattice field.

Each active wave vector ``k`` (one representative per ``+-k`` pair) and
polarization ``e`` carries two real oscillators of mass ``eps`` and frequency
``c|k|``:

    A~.e = (x_c + i x_s) / sqrt(2V),   D~.e = -(p_c + i p_s) / sqrt(2V),

with the vector potential ``A~ = i k x B~ / k^2``.  Lattice sums run over all
active modes with measure ``V``.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import TransversalityError, UnsupportedRepresentationError
from ..oscillator import GaussianState
from ..wigner import wigner_value
from .lattice import LatticeConfig, PerturbationProfile, TransverseField, transverse_projector

QUADRATURES = ("cos", "sin")


def _check_lattice(*fields):
    lat = fields[0].lattice
    for f in fields[1:]:
        if f.lattice != lat:
            raise ValueError("fields live on different lattices")
    return lat


def vacuum_kernel_momentum(k, eps=1.0, mu=1.0):
    """Vacuum kernel ``sqrt(eps/mu) |k| P(k)`` in momentum space."""
    k = np.asarray(k, dtype=float)
    return np.sqrt(eps / mu) * np.linalg.norm(k) * transverse_projector(k)


def _inverse_k_form(field: TransverseField):
    lat = field.lattice
    w = np.divide(1.0, lat.kmag, out=np.zeros_like(lat.kmag), where=lat.active)
    return lat.volume * float(np.sum(w * np.sum(np.abs(field.amplitudes) ** 2, axis=-1)))


def ground_functional_log(B: TransverseField) -> float:
    """Log of the vacuum functional in the magnetic representation."""
    lat = B.lattice
    return -np.sqrt(lat.eps / lat.mu) * _inverse_k_form(B) / (2 * lat.hbar)


def ground_functional_log_D(D: TransverseField) -> float:
    """Log of the vacuum functional in the ``D`` representation (``eps`` and ``mu`` swapped)."""
    lat = D.lattice
    return -np.sqrt(lat.mu / lat.eps) * _inverse_k_form(D) / (2 * lat.hbar)


def photon_number(B: TransverseField, D: TransverseField) -> float:
    """Mean photon number of the coherent field ``(B, D)``."""
    _check_lattice(B, D)
    return -(ground_functional_log(B) + ground_functional_log_D(D))


def wigner_vacuum(B: TransverseField, D: TransverseField) -> float:
    return float(np.exp(-2 * photon_number(B, D)))


def field_energy(B: TransverseField, D: TransverseField) -> float:
    """Classical energy ``int (D^2/2eps + B^2/2mu) d^3r``."""
    lat = _check_lattice(B, D)
    return 0.5 * (D.norm_sq() / lat.eps + B.norm_sq() / lat.mu)


def evolve_coherent(B: TransverseField, D: TransverseField, lattice: LatticeConfig, t):
    """Exact Maxwell evolution of ``(B, D)`` by the rotation of each mode at ``c|k|``."""
    for f in (B, D):
        if f.lattice != lattice:
            raise ValueError("field does not live on the given lattice")
    k = lattice.k
    w = lattice.c * lattice.kmag
    cos = np.cos(w * t)[..., None]
    # sin(wt)/w, finite at the (empty) zero mode
    sin_over = np.where(lattice.kmag > 0, np.sin(w * t) / np.where(w > 0, w, 1.0), t)[..., None]
    b, d = B.amplitudes, D.amplitudes
    b_t = cos * b - 1j * sin_over * np.cross(k, d) / lattice.eps
    d_t = cos * d + 1j * sin_over * np.cross(k, b) / lattice.mu
    return TransverseField(lattice, b_t), TransverseField(lattice, d_t)


@dataclass(frozen=True, eq=False)
class ModeState:
    """Product of independent one-mode Gaussian states, one per ``(k, polarization, quadrature)``.

    ``labels[i] = (n, lam, quad)`` with ``n`` the integer wave-vector label.
    """

    lattice: LatticeConfig
    labels: tuple
    states: tuple

    @property
    def frequencies(self):
        lat = self.lattice
        return np.array([lat.c * lat.dk * np.linalg.norm(n) for n, _, _ in self.labels])

    def __len__(self):
        return len(self.states)


def _mode_coordinates(B, D):
    """Per half-space mode arrays ``x = sqrt(2V) A~.e`` and ``p = -sqrt(2V) D~.e`` (complex)."""
    lat = _check_lattice(B, D)
    k, k2 = lat.k, np.where(lat.active, lat.kmag**2, 1.0)
    a_vec = 1j * np.cross(k, B.amplitudes) / k2[..., None]
    sel = lat.half
    e = lat.dyads[sel]
    root = np.sqrt(2 * lat.volume)
    x = root * np.einsum("mlj,mj->ml", e, a_vec[sel])
    p = -root * np.einsum("mlj,mj->ml", e, D.amplitudes[sel])
    return lat.indices[sel], x, p


def _mode_kernel_values(lattice: LatticeConfig, kernel):
    """Reduce a translation-invariant field kernel to ``e_l . K~(k) . e_l / eps`` per half-space mode."""
    lat = lattice
    n_half = int(lat.half.sum())
    if kernel is None:
        omega = lat.c * lat.kmag[lat.half]
        return np.repeat(omega[:, None], 2, axis=1).astype(complex)
    kern = np.asarray(kernel, dtype=complex)
    n_sites = lat.M**3
    if kern.shape == (3 * n_sites, 3 * n_sites):
        blocks = kern.reshape(n_sites, 3, n_sites, 3).transpose(0, 2, 1, 3)
        diag = blocks[np.arange(n_sites), np.arange(n_sites)].copy()
        off = blocks.copy()
        off[np.arange(n_sites), np.arange(n_sites)] = 0
        if np.abs(off).max() > 1e-12 * max(np.abs(diag).max(), 1e-300):
            raise UnsupportedRepresentationError(
                "kernel couples different wave vectors (inhomogeneous); use delta_kernel for first-order inhomogeneity"
            )
        kern = diag.reshape(lat.M, lat.M, lat.M, 3, 3)
    if kern.shape != (lat.M, lat.M, lat.M, 3, 3):
        raise ValueError("kernel must be given per wave vector, shape (M, M, M, 3, 3), or as a dense k-space matrix")
    scale = np.abs(kern[lat.active]).max(initial=0)
    if np.abs(lat.mirror(kern) - kern)[lat.active].max(initial=0) > 1e-12 * scale:
        raise UnsupportedRepresentationError("kernel differs between k and -k; cosine and sine quadratures would mix")
    khat = np.divide(lat.k, lat.kmag[..., None], out=np.zeros_like(lat.k), where=lat.kmag[..., None] > 0)
    if np.abs(np.einsum("...ij,...j->...i", kern, khat))[lat.active].max(initial=0) > 1e-10 * scale:
        raise TransversalityError("kernel is not transverse")
    e = lat.dyads[lat.half]
    proj = np.einsum("mli,mij,mnj->mln", e, kern[lat.half], e)
    if np.abs(proj[:, 0, 1]).max(initial=0) > 1e-12 * scale or np.abs(proj[:, 1, 0]).max(initial=0) > 1e-12 * scale:
        raise UnsupportedRepresentationError("kernel mixes the two polarizations of a mode")
    vals = np.stack([proj[:, 0, 0], proj[:, 1, 1]], axis=1) / lat.eps
    assert vals.shape == (n_half, 2)
    return vals


def field_state_to_modes(lattice: LatticeConfig, B: TransverseField, D: TransverseField, kernel=None) -> ModeState:
    """Package a Gaussian field functional into independent mode oscillators.

    ``B`` and ``D`` give the coherent centre.  ``kernel`` is the squeezing
    kernel in momentum space per wave vector, shape ``(M, M, M, 3, 3)``, in the
    normalization where the vacuum is :func:`vacuum_kernel_momentum`; ``None``
    selects the vacuum.
    """
    for f in (B, D):
        if f.lattice != lattice:
            raise ValueError("field does not live on the given lattice")
    ns, x, p = _mode_coordinates(B, D)
    kvals = _mode_kernel_values(lattice, kernel)
    labels, states = [], []
    for m, n in enumerate(ns):
        for lam in range(2):
            kv = kvals[m, lam]
            for quad, part in zip(QUADRATURES, (np.real, np.imag)):
                labels.append((tuple(int(v) for v in n), lam, quad))
                states.append(
                    GaussianState(
                        np.array([part(x[m, lam])]),
                        np.array([part(p[m, lam])]),
                        np.array([[kv.real]]),
                        np.array([[kv.imag]]),
                        mass=lattice.eps,
                        hbar=lattice.hbar,
                    )
                )
    return ModeState(lattice, tuple(labels), tuple(states))


def modes_to_field(modes: ModeState):
    """Inverse of :func:`field_state_to_modes`: returns ``(B, D, kernel)``."""
    lat = modes.lattice
    shape = (lat.M,) * 3
    a_vec = np.zeros(shape + (3,), dtype=complex)
    d_vec = np.zeros(shape + (3,), dtype=complex)
    kern = np.zeros(shape + (3, 3), dtype=complex)
    root = np.sqrt(2 * lat.volume)
    for (n, lam, quad), st in zip(modes.labels, modes.states):
        pos, neg = lat.flat_index(n), lat.flat_index(-np.asarray(n))
        e = lat.dyads[pos][lam]
        unit = 1.0 if quad == "cos" else 1j
        for target, value in ((a_vec, st.xi[0] / root), (d_vec, -st.pi[0] / root)):
            target[pos] += unit * value * e
            target[neg] += np.conj(unit * value) * e
        if quad == "cos":
            block = lat.eps * complex(st.a[0, 0], st.b[0, 0]) * np.outer(e, e)
            kern[pos] += block
            kern[neg] += block
    b = 1j * np.cross(lat.k, a_vec)
    return TransverseField(lat, b), TransverseField(lat, d_vec), kern


def wigner_field(modes: ModeState, B: TransverseField, D: TransverseField) -> float:
    """Wigner functional at ``(B, D)`` as the product of per-mode Wigner functions."""
    ns, x, p = _mode_coordinates(B, D)
    index = {tuple(int(v) for v in n): m for m, n in enumerate(ns)}
    total = 1.0
    for (n, lam, quad), st in zip(modes.labels, modes.states):
        part = np.real if quad == "cos" else np.imag
        m = index[n]
        total *= float(wigner_value(st, (np.array([part(x[m, lam])]), np.array([part(p[m, lam])]))))
    return total


def vacuum_energy_shift(profile: PerturbationProfile, lattice: LatticeConfig, k_max=None) -> float:
    """First-order ground-energy change from ``delta_eps``, lattice mode sum with cutoff ``k_max``.

    ``-(1/4) (int delta_eps / eps) * 2 * (1/V) sum_{|k| <= k_max} hbar c |k|``.
    """
    lat = lattice
    k_max = lat.k_max if k_max is None else float(k_max)
    if k_max > lat.k_nyquist * (1 + 1e-12):
        raise ValueError(f"k_max = {k_max:.6g} exceeds the lattice limit pi M / L = {lat.k_nyquist:.6g}")
    modes = lat.active & (lat.kmag <= k_max * (1 + 1e-12))
    zero_point = 2 * np.sum(lat.hbar * lat.c * lat.kmag[modes]) / lat.volume
    return -0.25 * profile.integral() / lat.eps * zero_point


def continuum_energy_shift(delta_eps, volume, k_max, eps0=1.0, mu0=1.0, hbar=1.0):
    """Continuum value ``-(delta_eps/eps0) V hbar c k_max^4 / (16 pi^2)`` for a uniform change."""
    c = 1.0 / np.sqrt(eps0 * mu0)
    return -(delta_eps / eps0) * volume * hbar * c * k_max**4 / (16 * np.pi**2)
