"""Scenario files for the command-line runner.

A scenario is a JSON object ``{"kind": ..., "name": ..., "seed": ..., "parameters": {...}}``.
Validation turns it into a prepared run whose ``execute`` method returns a
:class:`Result`.  Problems found before any numerics run raise
:class:`ScenarioError` carrying the dotted path of the offending key.
Row-level numerical events (light-cone hits, conditioning, step-size failures)
never abort a run; they are recorded as flags.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditioningError, LightConeError, SqueezeKitError, StepSizeError
from .evolution import evolve_center, evolve_kernel_numeric, evolve_state
from .field import (
    FirstOrderWarning,
    LatticeConfig,
    PerturbationProfile,
    continuum_energy_shift,
    delta_kernel,
    g_scalar,
    vacuum_energy_shift,
)
from .oscillator import GaussianState, OscillatorSystem, correlations, energy, ground_state
from .uncertainty import entropic_excess, entropic_excess_closed_form, entropies, symplectic_residual
from .wigner import wigner_evolved, wigner_value

KINDS = (
    "oscillator-evolve",
    "uncertainty-audit",
    "wigner-grid",
    "field-propagate",
    "energy-shift",
    "kernel-profile",
)
SATURATION_TOL = 1e-10
MAX_SEED = 2**64 - 1
MAX_GRID = 1_000_000
THREADS_ENV = "SQUEEZEKIT_THREADS"


class ScenarioError(ValueError):
    """Invalid scenario content; ``key`` is the dotted path of the culprit."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class Result:
    scenario: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    flags: list[tuple[int, str, str]] = field(default_factory=list)

    def flag(self, row: int, code: str, message: str):
        self.flags.append((row, code, message))


# ------------------------------------------------------------ value parsing

def _get(params: dict, key: str, path: str, default=...):
    if key in params:
        return params[key]
    if default is ...:
        raise ScenarioError(f"{path}.{key}", "required key is missing")
    return default


def _number(params, key, path, default=..., *, positive=False, nonnegative=False, integer=False):
    v = _get(params, key, path, default)
    where = f"{path}.{key}"
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(where, f"expected a number, got {type(v).__name__}")
    if not math.isfinite(v):
        raise ScenarioError(where, "must be finite")
    if integer and int(v) != v:
        raise ScenarioError(where, "must be an integer")
    if positive and not v > 0:
        raise ScenarioError(where, "must be positive")
    if nonnegative and v < 0:
        raise ScenarioError(where, "must be non-negative")
    return int(v) if integer else float(v)


def _array(value, where, ndim=None):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError(where, "expected numbers or nested arrays of numbers") from None
    if not np.all(np.isfinite(arr)):
        raise ScenarioError(where, "entries must be finite")
    if ndim is not None and arr.ndim != ndim:
        raise ScenarioError(where, f"expected a {ndim}-dimensional array")
    return arr


def _matrix(params, key, path, n=None, default=...):
    """Square matrix; a scalar is accepted for one mode."""
    where = f"{path}.{key}"
    v = _get(params, key, path, default)
    if v is None:
        return None
    arr = _array(v, where)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ScenarioError(where, "expected a square matrix (row-major nested arrays)")
    if n is not None and arr.shape[0] != n:
        raise ScenarioError(where, f"expected a {n}x{n} matrix")
    return arr


def _vector(params, key, path, n, default=...):
    where = f"{path}.{key}"
    v = _get(params, key, path, default)
    arr = _array(v, where)
    if arr.ndim == 0 and n == 1:
        arr = arr.reshape(1)
    if arr.shape != (n,):
        raise ScenarioError(where, f"expected a vector of length {n}")
    return arr


def _grid(params, key, path, default=...):
    """Either an explicit list or ``{"start", "stop", "num"}`` (endpoints included)."""
    where = f"{path}.{key}"
    v = _get(params, key, path, default)
    if isinstance(v, dict):
        start = _number(v, "start", where)
        stop = _number(v, "stop", where)
        num = _number(v, "num", where, integer=True, nonnegative=True)
        if num > MAX_GRID:
            raise ScenarioError(f"{where}.num", f"grids are limited to {MAX_GRID} points")
        return np.linspace(start, stop, num)
    arr = _array(v, where)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ScenarioError(where, "expected a list of numbers or a {start, stop, num} object")
    return arr


def _guard(where):
    """Map library validation errors raised while building objects onto a key."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc_type is not None and issubclass(exc_type, (ValueError, SqueezeKitError)) and not issubclass(exc_type, ScenarioError):
                raise ScenarioError(where, str(exc)) from None
            return False

    return _Ctx()


def _reject_unknown(params, allowed, path):
    for key in params:
        if key not in allowed:
            raise ScenarioError(f"{path}.{key}", "unknown key")


# ------------------------------------------------------------ shared builders

def _system(params, path, mass, hbar):
    has_u, has_omega = "u" in params, "omega" in params
    if has_u == has_omega:
        raise ScenarioError(f"{path}.u", "give exactly one of 'u' (potential matrix) or 'omega' (frequency spectrum or matrix)")
    if has_u:
        u = _matrix(params, "u", path)
        with _guard(f"{path}.u"):
            return OscillatorSystem.normal(u, mass, hbar)
    omega = _array(params["omega"], f"{path}.omega")
    if omega.ndim == 0:
        omega = omega.reshape(1)
    if omega.ndim not in (1, 2):
        raise ScenarioError(f"{path}.omega", "expected a spectrum list or a square matrix")
    with _guard(f"{path}.omega"):
        return OscillatorSystem.from_frequencies(omega, mass, hbar)


def _kernel(params, key, path, n):
    """``K`` as ``{"re": ..., "im": ...}`` or a real matrix."""
    v = _get(params, key, path)
    where = f"{path}.{key}"
    if isinstance(v, dict):
        _reject_unknown(v, ("re", "im"), where)
        re = _matrix(v, "re", where, n)
        im = _matrix(v, "im", where, n, default=np.zeros((n, n)).tolist())
        return re + 1j * im
    return _matrix(params, key, path, n).astype(complex)


def _state(params, path, n, mass, hbar):
    a = _matrix(params, "a", path, n)
    b = _matrix(params, "b", path, n, default=np.zeros((n, n)).tolist())
    xi = _vector(params, "xi", path, n, default=[0.0] * n)
    pi = _vector(params, "pi", path, n, default=[0.0] * n)
    with _guard(f"{path}.a"):
        return GaussianState(xi, pi, a, b, mass, hbar)


def _lattice(params, path):
    where = f"{path}.lattice"
    lat = _get(params, "lattice", path)
    if not isinstance(lat, dict):
        raise ScenarioError(where, "expected an object")
    _reject_unknown(lat, ("L", "M", "eps", "mu", "hbar"), where)
    L = _number(lat, "L", where, positive=True)
    M = _number(lat, "M", where, positive=True, integer=True)
    if M % 2 or M > 64:
        raise ScenarioError(f"{where}.M", "must be an even integer no larger than 64")
    eps = _number(lat, "eps", where, 1.0, positive=True)
    mu = _number(lat, "mu", where, 1.0, positive=True)
    hbar = _number(lat, "hbar", where, 1.0, positive=True)
    with _guard(where):
        return LatticeConfig(L, M, eps, mu, hbar)


def _profile(params, path, lattice, result_flags):
    where = f"{path}.profile"
    cfg = _get(params, "profile", path)
    if not isinstance(cfg, dict):
        raise ScenarioError(where, "expected an object")
    kind = _get(cfg, "type", where)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FirstOrderWarning)
        with _guard(where):
            if kind == "constant":
                _reject_unknown(cfg, ("type", "value"), where)
                prof = PerturbationProfile.constant(lattice, _number(cfg, "value", where))
            elif kind == "point":
                _reject_unknown(cfg, ("type", "strength", "site"), where)
                site = _array(_get(cfg, "site", where, [0, 0, 0]), f"{where}.site", ndim=1)
                if site.shape != (3,) or np.any(site != np.rint(site)):
                    raise ScenarioError(f"{where}.site", "expected three integer lattice indices")
                prof = PerturbationProfile.point(lattice, _number(cfg, "strength", where), tuple(int(s) for s in site))
            elif kind == "gaussian":
                _reject_unknown(cfg, ("type", "amplitude", "width", "center"), where)
                center = cfg.get("center")
                if center is not None:
                    center = _vector(cfg, "center", where, 3)
                prof = PerturbationProfile.gaussian(
                    lattice, _number(cfg, "amplitude", where), _number(cfg, "width", where, positive=True), center
                )
            else:
                raise ScenarioError(f"{where}.type", f"unknown profile type {kind!r}; use constant, point or gaussian")
    for w in caught:
        result_flags.append(("first-order", str(w.message)))
    return prof


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ScenarioError(THREADS_ENV, "must be a positive integer")
    return n


def _fan_out(func, items, threads):
    """Ordered map; runs serially when only one worker is allowed."""
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _attempt(func, *args):
    """Run a row computation, returning ``(value, None)`` or ``(None, (code, message))``."""
    try:
        return func(*args), None
    except LightConeError as exc:
        return None, ("light-cone", str(exc))
    except ConditioningError as exc:
        return None, ("conditioning", str(exc))
    except StepSizeError as exc:
        return None, ("step-size", str(exc))
    except SqueezeKitError as exc:
        return None, ("numerical", str(exc))


# ------------------------------------------------------------ scenario kinds

class _Prepared:
    columns: list[str]

    def __init__(self, name):
        self.name = name
        self.setup_flags: list[tuple[str, str]] = []

    def execute(self, threads: int) -> Result:
        result = Result(self.name, list(self.columns))
        for code, message in self.setup_flags:
            result.flag(-1, code, message)
        self.fill(result, threads)
        return result

    def fill(self, result: Result, threads: int):
        raise NotImplementedError


def _nan_row(width):
    return (math.nan,) * width


class OscillatorEvolve(_Prepared):
    """Kernel and centre of an N-mode Gaussian state along a time grid."""

    keys = ("mass", "hbar", "u", "omega", "K0", "xi0", "pi0", "times", "method", "dt")

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        mass = _number(params, "mass", path, 1.0, positive=True)
        hbar = _number(params, "hbar", path, 1.0, positive=True)
        self.sys = _system(params, path, mass, hbar)
        n = self.sys.n_modes
        k0 = _kernel(params, "K0", path, n)
        xi0 = _vector(params, "xi0", path, n, default=[0.0] * n)
        pi0 = _vector(params, "pi0", path, n, default=[0.0] * n)
        with _guard(f"{path}.K0"):
            self.state = GaussianState.from_kernel(k0, xi0, pi0, mass, hbar)
        self.times = _grid(params, "times", path)
        self.method = _get(params, "method", path, "closed")
        if self.method not in ("closed", "numeric"):
            raise ScenarioError(f"{path}.method", "must be 'closed' or 'numeric'")
        self.dt = _number(params, "dt", path, 1e-3, positive=True)
        if self.method == "numeric" and np.any(np.diff(self.times) < 0):
            raise ScenarioError(f"{path}.times", "numeric evolution needs a non-decreasing time grid")
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        self.pairs = pairs
        self.columns = (
            ["t"]
            + [f"xi_{i}" for i in range(n)]
            + [f"pi_{i}" for i in range(n)]
            + [f"a_{i}_{j}" for i, j in pairs]
            + [f"b_{i}_{j}" for i, j in pairs]
            + ["min_eig_a", "energy"]
        )

    def _row(self, t, s):
        e_cm, e_int = energy(s, self.sys)
        return (
            (t,)
            + tuple(s.xi)
            + tuple(s.pi)
            + tuple(s.a[i, j] for i, j in self.pairs)
            + tuple(s.b[i, j] for i, j in self.pairs)
            + (float(np.linalg.eigvalsh(s.a)[0]), e_cm + e_int)
        )

    def fill(self, result, threads):
        width = len(self.columns)
        if self.method == "numeric":
            if len(self.times) == 0:
                return
            kernels, flag = _attempt(evolve_kernel_numeric, self.state.kernel, self.sys, self.times, self.dt)
            if flag:
                for i, t in enumerate(self.times):
                    result.rows.append((t,) + _nan_row(width - 1))
                    result.flag(i, *flag)
                return

            def state_at(args):
                t, k = args
                xi, pi = evolve_center(self.state.xi, self.state.pi, self.sys, t)
                return GaussianState.from_kernel(k, xi, pi, self.sys.mass, self.sys.hbar)

            outcomes = [_attempt(state_at, (t, k)) for t, k in zip(self.times, kernels)]
        else:
            outcomes = _fan_out(lambda t: _attempt(evolve_state, self.state, self.sys, t), list(self.times), threads)
        for i, (t, (s, flag)) in enumerate(zip(self.times, outcomes)):
            if flag:
                result.rows.append((t,) + _nan_row(width - 1))
                result.flag(i, *flag)
            else:
                result.rows.append(self._row(t, s))


class UncertaintyAudit(_Prepared):
    """Schrodinger-Robertson residual and entropic excess for a list of states."""

    keys = ("mass", "hbar", "states", "ground", "random")
    columns = ["index", "n_modes", "symplectic_residual", "entropy_x", "entropy_p", "entropic_excess", "entropic_excess_closed"]

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        mass = _number(params, "mass", path, 1.0, positive=True)
        hbar = _number(params, "hbar", path, 1.0, positive=True)
        sources = [k for k in ("states", "ground", "random") if k in params]
        if len(sources) != 1:
            raise ScenarioError(f"{path}.states", "give exactly one of 'states', 'ground' or 'random'")
        self.states = []
        if "states" in params:
            items = params["states"]
            if not isinstance(items, list):
                raise ScenarioError(f"{path}.states", "expected a list of state objects")
            for i, item in enumerate(items):
                where = f"{path}.states[{i}]"
                if not isinstance(item, dict):
                    raise ScenarioError(where, "expected an object")
                _reject_unknown(item, ("a", "b", "xi", "pi"), where)
                n = _matrix(item, "a", where).shape[0]
                self.states.append(_state(item, where, n, mass, hbar))
        elif "ground" in params:
            where = f"{path}.ground"
            cfg = params["ground"]
            if not isinstance(cfg, dict):
                raise ScenarioError(where, "expected an object")
            _reject_unknown(cfg, ("u", "omega"), where)
            self.states.append(ground_state(_system(cfg, where, mass, hbar)))
        else:
            where = f"{path}.random"
            cfg = params["random"]
            if not isinstance(cfg, dict):
                raise ScenarioError(where, "expected an object")
            _reject_unknown(cfg, ("count", "n_modes"), where)
            count = _number(cfg, "count", where, integer=True, positive=True)
            n = _number(cfg, "n_modes", where, integer=True, positive=True)
            if count * n * n > MAX_GRID or n > 64:
                raise ScenarioError(f"{where}.count", "random ensemble is too large")
            for _ in range(count):
                x = rng.normal(size=(n, n))
                a = x @ x.T / n + 0.5 * np.eye(n)
                y = rng.normal(size=(n, n))
                self.states.append(GaussianState(rng.normal(size=n), rng.normal(size=n), a, (y + y.T) / 2, mass, hbar))

    def fill(self, result, threads):
        def audit(s):
            q = correlations(s)
            s_x, s_p = entropies(s)
            return (s.n_modes, symplectic_residual(q), s_x, s_p, entropic_excess(s), entropic_excess_closed_form(s))

        outcomes = _fan_out(lambda s: _attempt(audit, s), self.states, threads)
        for i, (vals, flag) in enumerate(outcomes):
            if flag:
                result.rows.append((i,) + _nan_row(len(self.columns) - 1))
                result.flag(i, *flag)
                continue
            result.rows.append((i,) + vals)
            if vals[1] > SATURATION_TOL:
                result.flag(i, "saturation", f"symplectic residual {vals[1]:.3e} exceeds {SATURATION_TOL:g}")


class WignerGrid(_Prepared):
    """Wigner function on an (x, p) grid in one mode, other modes at the centre."""

    keys = ("mass", "hbar", "state", "x", "p", "mode", "evolve")
    columns = ["x", "p", "W"]

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        mass = _number(params, "mass", path, 1.0, positive=True)
        hbar = _number(params, "hbar", path, 1.0, positive=True)
        where = f"{path}.state"
        cfg = _get(params, "state", path)
        if not isinstance(cfg, dict):
            raise ScenarioError(where, "expected an object")
        _reject_unknown(cfg, ("a", "b", "xi", "pi"), where)
        n = _matrix(cfg, "a", where).shape[0]
        self.state = _state(cfg, where, n, mass, hbar)
        self.x = _grid(params, "x", path)
        self.p = _grid(params, "p", path)
        if len(self.x) * len(self.p) > MAX_GRID:
            raise ScenarioError(f"{path}.x", f"grid exceeds {MAX_GRID} points")
        self.mode = _number(params, "mode", path, 0, integer=True, nonnegative=True)
        if self.mode >= n:
            raise ScenarioError(f"{path}.mode", f"mode index must be below {n}")
        self.sys, self.t = None, 0.0
        if "evolve" in params:
            ev = params["evolve"]
            ew = f"{path}.evolve"
            if not isinstance(ev, dict):
                raise ScenarioError(ew, "expected an object")
            _reject_unknown(ev, ("u", "omega", "t"), ew)
            self.sys = _system(ev, ew, mass, hbar)
            if self.sys.n_modes != n:
                raise ScenarioError(ew, f"system has {self.sys.n_modes} modes but the state has {n}")
            self.t = _number(ev, "t", ew)

    def fill(self, result, threads):
        X, P = np.meshgrid(self.x, self.p, indexing="ij")
        xs = np.tile(self.state.xi, (X.size, 1))
        ps = np.tile(self.state.pi, (X.size, 1))
        xs[:, self.mode] = X.ravel()
        ps[:, self.mode] = P.ravel()
        if self.sys is None:
            w = wigner_value(self.state, (xs, ps))
        else:
            w = wigner_evolved(self.state, (xs, ps), self.sys, self.t)
        w = np.atleast_1d(w)
        result.rows.extend(zip(X.ravel(), P.ravel(), w))


class FieldPropagate(_Prepared):
    """Scalar squeezing propagator ``G(r1, r2, t)`` at listed or gridded points."""

    keys = ("c", "points", "r1", "r2", "t")
    columns = ["r1", "r2", "t", "re_G", "im_G"]

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        self.c = _number(params, "c", path, 1.0, positive=True)
        if "points" in params:
            for key in ("r1", "r2", "t"):
                if key in params:
                    raise ScenarioError(f"{path}.{key}", "give either 'points' or the r1/r2/t grids, not both")
            pts = _array(params["points"], f"{path}.points")
            if pts.size == 0:
                pts = pts.reshape(0, 3)
            if pts.ndim != 2 or pts.shape[1] != 3:
                raise ScenarioError(f"{path}.points", "expected a list of [r1, r2, t] triples")
        else:
            r1, r2, t = _grid(params, "r1", path), _grid(params, "r2", path), _grid(params, "t", path)
            if len(r1) * len(r2) * len(t) > MAX_GRID:
                raise ScenarioError(f"{path}.r1", f"grid exceeds {MAX_GRID} points")
            grids = np.meshgrid(r1, r2, t, indexing="ij")
            pts = np.stack([g.ravel() for g in grids], axis=-1)
        bad = np.nonzero(pts[:, :2] <= 0)[0] if len(pts) else []
        if len(bad):
            key = "points" if "points" in params else ("r1" if pts[bad[0], 0] <= 0 else "r2")
            raise ScenarioError(f"{path}.{key}", "radii must be positive")
        self.points = pts

    def fill(self, result, threads):
        if len(self.points) == 0:
            return
        chunks = np.array_split(self.points, max(1, min(threads, len(self.points) // 256 + 1)))
        parts = _fan_out(lambda ch: g_scalar(ch[:, 0], ch[:, 1], ch[:, 2], self.c, strict=False), chunks, threads)
        values = np.concatenate([np.atleast_1d(p) for p in parts])
        for i, (pt, g) in enumerate(zip(self.points, values)):
            if np.isnan(g):
                result.rows.append((pt[0], pt[1], pt[2], math.nan, math.nan))
                result.flag(i, "light-cone", f"r = c|t| within the exclusion band (r1={pt[0]:.6g}, r2={pt[1]:.6g}, t={pt[2]:.6g})")
            else:
                result.rows.append((pt[0], pt[1], pt[2], g.real, g.imag))


class EnergyShift(_Prepared):
    """Lattice vacuum-energy shift against the continuum formula for a list of cutoffs."""

    keys = ("lattice", "profile", "k_max", "k_max_dk")
    columns = ["k_max", "lattice_shift", "continuum_shift", "relative_difference"]

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        self.lattice = _lattice(params, path)
        self.profile = _profile(params, path, self.lattice, self.setup_flags)
        if ("k_max" in params) == ("k_max_dk" in params):
            raise ScenarioError(f"{path}.k_max", "give exactly one of 'k_max' or 'k_max_dk'")
        key = "k_max" if "k_max" in params else "k_max_dk"
        cut = _grid(params, key, path)
        if key == "k_max_dk":
            cut = cut * self.lattice.dk
        if np.any(cut <= 0) or np.any(cut > self.lattice.k_nyquist * (1 + 1e-12)):
            raise ScenarioError(f"{path}.{key}", f"cutoffs must lie in (0, {self.lattice.k_nyquist:.6g}]")
        self.cutoffs = cut

    def fill(self, result, threads):
        lat = self.lattice
        mean = self.profile.integral() / lat.volume

        def one(k_max):
            shift = vacuum_energy_shift(self.profile, lat, k_max)
            cont = continuum_energy_shift(mean, lat.volume, k_max, lat.eps, lat.mu, lat.hbar)
            rel = (shift - cont) / cont if cont != 0 else math.nan
            return (k_max, shift, cont, rel)

        result.rows.extend(_fan_out(one, list(self.cutoffs), threads))


class KernelProfile(_Prepared):
    """``|delta K(r1, r2, t)|`` along a ray ``r2 = -R n`` for a lattice perturbation."""

    keys = ("lattice", "profile", "r1", "direction", "radii", "t")
    columns = ["R", "norm", "re_trace", "im_trace"]

    def __init__(self, name, params, path, rng):
        super().__init__(name)
        self.lattice = _lattice(params, path)
        self.profile = _profile(params, path, self.lattice, self.setup_flags)
        if np.count_nonzero(self.profile.values) > 512:
            raise ScenarioError(f"{path}.profile", "position-space sums are limited to 512 nonzero sites")
        self.r1 = _vector(params, "r1", path, 3)
        direction = _vector(params, "direction", path, 3)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise ScenarioError(f"{path}.direction", "must be a nonzero vector")
        self.direction = direction / norm
        self.radii = _grid(params, "radii", path)
        if np.any(self.radii <= 0):
            raise ScenarioError(f"{path}.radii", "radii must be positive")
        self.t = _number(params, "t", path, 0.0)
        self.kernel = delta_kernel(self.profile, self.lattice, self.t)

    def fill(self, result, threads):
        def one(R):
            return self.kernel.position(self.r1, -R * self.direction)

        outcomes = _fan_out(lambda R: _attempt(one, R), list(self.radii), threads)
        for i, (R, (k, flag)) in enumerate(zip(self.radii, outcomes)):
            if flag:
                result.rows.append((R, math.nan, math.nan, math.nan))
                result.flag(i, *flag)
                continue
            tr = complex(np.trace(k))
            result.rows.append((R, float(np.linalg.norm(k)), tr.real, tr.imag))


_RUNNERS = {
    "oscillator-evolve": OscillatorEvolve,
    "uncertainty-audit": UncertaintyAudit,
    "wigner-grid": WignerGrid,
    "field-propagate": FieldPropagate,
    "energy-shift": EnergyShift,
    "kernel-profile": KernelProfile,
}


def load(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError("scenario", f"cannot read {path}: {exc.strerror}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ScenarioError("scenario", f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError("scenario", "top level must be a JSON object")
    return data


def prepare(data: dict, seed=None) -> _Prepared:
    """Validate a parsed scenario and build its runner (no heavy numerics)."""
    _reject_unknown(data, ("kind", "name", "seed", "parameters"), "scenario")
    kind = _get(data, "kind", "scenario")
    if kind not in _RUNNERS:
        raise ScenarioError("scenario.kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    name = data.get("name", kind)
    if not isinstance(name, str):
        raise ScenarioError("scenario.name", "must be a string")
    if seed is None:
        seed = _number(data, "seed", "scenario", 0, integer=True, nonnegative=True)
    if not 0 <= seed <= MAX_SEED:
        raise ScenarioError("seed", "must be an unsigned 64-bit integer")
    params = _get(data, "parameters", "scenario")
    if not isinstance(params, dict):
        raise ScenarioError("scenario.parameters", "expected an object")
    runner = _RUNNERS[kind]
    _reject_unknown(params, runner.keys, "parameters")
    with _guard("parameters"):
        return runner(name, params, "parameters", np.random.default_rng(seed))
