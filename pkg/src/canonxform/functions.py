"""Function descriptions on the real line, evaluation and the quadrature engine.

A FunctionSpec is an immutable expression tree.  Leaves are closed-form
signals (Gaussians, triangular spikes, tables); interior nodes transform
their child.  Every node evaluates vectorised over numpy arrays.

Quadrature is a composite trapezoid rule on [-T, T] with N panels.  The
nodes sit on the lattice h*k, k = -N/2..N/2, so configs that share a step
share nodes exactly.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
import os
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import EmptyGrid, UnderResolved, ZeroScale
from .params import CanonicalParams


# ---------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadratureConfig:
    half_width: float = 12.0
    points: int = 8192
    tol: float = 1e-8

    def __post_init__(self):
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if int(self.points) != self.points or self.points < 16 or self.points % 2:
            raise ValueError(f"points must be an even integer >= 16, got {self.points}")
        if not (self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol}")
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.points

    def nodes(self) -> np.ndarray:
        n = self.points
        return (np.arange(n + 1) - n // 2) * self.step

    def weights(self) -> np.ndarray:
        w = np.full(self.points + 1, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def to_dict(self) -> dict:
        return {"trunc": self.half_width, "points": self.points, "tol": self.tol}

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureConfig":
        return cls(float(d["trunc"]), int(d["points"]), float(d.get("tol", 1e-8)))


DEFAULT_QUADRATURE = QuadratureConfig()
_ambient = contextvars.ContextVar("canonxform_quadrature", default=DEFAULT_QUADRATURE)


def current_quadrature() -> QuadratureConfig:
    return _ambient.get()


@contextlib.contextmanager
def use_quadrature(cfg: QuadratureConfig):
    """Set the ambient config picked up by lazily built convolutions."""
    token = _ambient.set(cfg)
    try:
        yield cfg
    finally:
        _ambient.reset(token)


def required_points(cfg: QuadratureConfig, nu: float) -> int:
    return math.ceil(8.0 * cfg.half_width * nu / math.pi)


def check_oscillation(cfg: QuadratureConfig, A: CanonicalParams, s_max: float = 0.0):
    """Nyquist-style floor N >= ceil(8 T nu / pi), nu = max(|s|/|b|, |a/b| T)."""
    nu = max(abs(s_max) / abs(A.b), abs(A.chirp_rate) * cfg.half_width)
    need = required_points(cfg, nu)
    if cfg.points < need:
        raise UnderResolved(
            f"N={cfg.points} below the oscillation floor {need} (nu={nu:.4g}, T={cfg.half_width})")


def check_spike(cfg: QuadratureConfig, *fs: "FunctionSpec"):
    """Grid step must resolve the narrowest triangular spike: h <= (1/n)/8."""
    n = max((spike_index(f) for f in fs), default=0.0)
    if n > 0 and cfg.step > 1.0 / (8.0 * n) * (1 + 1e-12):
        raise UnderResolved(
            f"step {cfg.step:.4g} too coarse for a spike of width 2/{n:g}; need <= {1/(8*n):.4g}")


def spike_index(f: "FunctionSpec") -> float:
    """Largest effective n of any triangular spike inside f, 0 if none."""
    if isinstance(f, TriangularDelta):
        return float(f.n)
    scale = abs(f.k) if isinstance(f, Dilate) else 1.0
    return scale * max((spike_index(c) for c in f.children()), default=0.0)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CANON_XFORM_THREADS", "1")))
    except ValueError:
        return 1


def map_chunks(fn: Callable, chunks: Iterable) -> list:
    """Ordered map, threaded when CANON_XFORM_THREADS > 1."""
    chunks = list(chunks)
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, chunks))


# ---------------------------------------------------------------- sampled data

@dataclass(frozen=True, eq=False)
class SampledField:
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float).copy()
        v = np.asarray(self.values, dtype=complex).copy()
        if g.ndim != 1 or g.shape != v.shape:
            raise ValueError("grid and values must be 1-D of equal length")
        if g.size == 0:
            raise EmptyGrid("empty grid")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("grid must be strictly ascending")
        g.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def as_function(self) -> "Tabulated":
        return Tabulated(self.grid, self.values)

    def to_csv(self, axis: str = "s") -> str:
        rows = [f"{axis},re,im"]
        rows += [f"{g!r},{v.real!r},{v.imag!r}" for g, v in
                 zip(self.grid.tolist(), self.values.tolist())]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SampledField":
        lines = [ln for ln in text.strip().splitlines()[1:] if ln]
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines])
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


# ---------------------------------------------------------------- expression tree

_cache: "weakref.WeakKeyDictionary[FunctionSpec, dict]" = weakref.WeakKeyDictionary()


class FunctionSpec:
    """Base node.  Subclasses implement _eval on a 1-D float array."""

    kind = "abstract"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> tuple["FunctionSpec", ...]:
        return ()

    def _fields(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        d.update(self._fields())
        return d

    def __call__(self, t):
        return evaluate(self, t)


def _finite(*vals):
    for v in vals:
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite field value {v!r}")


def _cx(v) -> list[float]:
    v = complex(v)
    return [v.real, v.imag]


def _from_cx(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    return complex(v)


@dataclass(frozen=True, eq=False)
class Gaussian(FunctionSpec):
    """exp(-((t - center)/sigma)^2)."""
    sigma: float = 1.0
    center: float = 0.0
    kind = "gaussian"

    def __post_init__(self):
        _finite(self.sigma, self.center)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def _eval(self, t):
        u = (t - self.center) / self.sigma
        return np.exp(-u * u).astype(complex)

    def _fields(self):
        return {"sigma": self.sigma, "center": self.center}


@dataclass(frozen=True, eq=False)
class GaussianMoment(FunctionSpec):
    """t * exp(-t^2 / sigma^2)."""
    sigma: float = 1.0
    kind = "gaussian_moment"

    def __post_init__(self):
        _finite(self.sigma)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def _eval(self, t):
        u = t / self.sigma
        return (t * np.exp(-u * u)).astype(complex)

    def _fields(self):
        return {"sigma": self.sigma}


@dataclass(frozen=True, eq=False)
class TriangularDelta(FunctionSpec):
    """exp(-i r x t) * n^2 * tent on [0, 2/n] peaking at 1/n."""
    n: int
    x: float = 0.0
    chirp_rate: float = 0.0
    kind = "triangular_delta"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        _finite(self.x, self.chirp_rate)

    def _eval(self, t):
        n = float(self.n)
        nt = n * t
        tent = np.where((t >= 0) & (nt <= 1.0), n * nt,
                        np.where((nt > 1.0) & (nt <= 2.0), n * (2.0 - nt), 0.0))
        out = tent.astype(complex)
        w = self.chirp_rate * self.x
        if w != 0.0:
            out *= np.exp(-1j * w * t)
        return out

    def _fields(self):
        return {"n": self.n, "x": self.x, "chirp_rate": self.chirp_rate}


@dataclass(frozen=True, eq=False)
class Tabulated(FunctionSpec):
    """Linear interpolation inside the grid, zero outside."""
    grid: np.ndarray
    values: np.ndarray
    kind = "tabulated"

    def __post_init__(self):
        g = np.array(self.grid, dtype=float)
        v = np.array(self.values, dtype=complex)
        if g.ndim != 1 or g.size < 2 or v.shape != g.shape:
            raise ValueError("tabulated needs >= 2 grid points and matching values")
        if not np.all(np.diff(g) > 0):
            raise ValueError("tabulated grid must be strictly ascending")
        _finite(g, v)
        g.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def _eval(self, t):
        re = np.interp(t, self.grid, self.values.real, left=0.0, right=0.0)
        im = np.interp(t, self.grid, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def _fields(self):
        return {"grid": self.grid.tolist(),
                "values": [[v.real, v.imag] for v in self.values.tolist()]}


@dataclass(frozen=True, eq=False)
class Zero(FunctionSpec):
    kind = "zero"

    def _eval(self, t):
        return np.zeros(t.shape, dtype=complex)


@dataclass(frozen=True, eq=False)
class Constant(FunctionSpec):
    c: complex = 1.0
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        _finite(self.c)

    def _eval(self, t):
        return np.full(t.shape, self.c, dtype=complex)

    def _fields(self):
        return {"c": _cx(self.c)}


@dataclass(frozen=True, eq=False)
class Sum(FunctionSpec):
    terms: tuple
    kind = "sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("sum needs at least one term")

    def children(self):
        return self.terms

    def _eval(self, t):
        out = _raw(self.terms[0], t).copy()
        for f in self.terms[1:]:
            out += _raw(f, t)
        return out

    def to_dict(self):
        return {"kind": self.kind, "terms": [f.to_dict() for f in self.terms]}


@dataclass(frozen=True, eq=False)
class Product(FunctionSpec):
    terms: tuple
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("product needs at least one term")

    def children(self):
        return self.terms

    def _eval(self, t):
        out = _raw(self.terms[0], t).copy()
        for f in self.terms[1:]:
            out *= _raw(f, t)
        return out

    def to_dict(self):
        return {"kind": self.kind, "terms": [f.to_dict() for f in self.terms]}


@dataclass(frozen=True, eq=False)
class _Unary(FunctionSpec):
    inner: FunctionSpec

    def children(self):
        return (self.inner,)

    def to_dict(self):
        d = {"kind": self.kind}
        d.update(self._fields())
        d["inner"] = self.inner.to_dict()
        return d


@dataclass(frozen=True, eq=False)
class Scale(_Unary):
    factor: complex = 1.0
    kind = "scale"

    def __post_init__(self):
        object.__setattr__(self, "factor", complex(self.factor))
        _finite(self.factor)

    def _eval(self, t):
        return self.factor * _raw(self.inner, t)

    def _fields(self):
        return {"factor": _cx(self.factor)}


@dataclass(frozen=True, eq=False)
class Translate(_Unary):
    """t -> f(t + tau)."""
    tau: float = 0.0
    kind = "translate"

    def __post_init__(self):
        _finite(self.tau)

    def _eval(self, t):
        return _raw(self.inner, t + self.tau)

    def _fields(self):
        return {"tau": self.tau}


@dataclass(frozen=True, eq=False)
class Dilate(_Unary):
    """t -> f(k t)."""
    k: float = 1.0
    kind = "dilate"

    def __post_init__(self):
        _finite(self.k)
        if self.k == 0:
            raise ZeroScale("dilation factor must be nonzero")

    def _eval(self, t):
        return _raw(self.inner, self.k * t)

    def _fields(self):
        return {"k": self.k}


@dataclass(frozen=True, eq=False)
class ModulateCos(_Unary):
    omega: float = 0.0
    kind = "modulate_cos"

    def __post_init__(self):
        _finite(self.omega)

    def _eval(self, t):
        return np.cos(self.omega * t) * _raw(self.inner, t)

    def _fields(self):
        return {"omega": self.omega}


@dataclass(frozen=True, eq=False)
class ModulateSin(_Unary):
    omega: float = 0.0
    kind = "modulate_sin"

    def __post_init__(self):
        _finite(self.omega)

    def _eval(self, t):
        return np.sin(self.omega * t) * _raw(self.inner, t)

    def _fields(self):
        return {"omega": self.omega}


@dataclass(frozen=True, eq=False)
class ModulateCexp(_Unary):
    omega: float = 0.0
    kind = "modulate_cexp"

    def __post_init__(self):
        _finite(self.omega)

    def _eval(self, t):
        return np.exp(1j * self.omega * t) * _raw(self.inner, t)

    def _fields(self):
        return {"omega": self.omega}


@dataclass(frozen=True, eq=False)
class Chirp(_Unary):
    """Multiply by exp((i/2) r t^2)."""
    rate: float = 0.0
    kind = "chirp"

    def __post_init__(self):
        _finite(self.rate)

    def _eval(self, t):
        return chirp(self.rate, t) * _raw(self.inner, t)

    def _fields(self):
        return {"rate": self.rate}


@dataclass(frozen=True, eq=False)
class ReflectAbs(_Unary):
    """t -> f(|t|)."""
    kind = "reflect_abs"

    def _eval(self, t):
        return _raw(self.inner, np.abs(t))


# ---------------------------------------------------------------- constructors

def gaussian(sigma=1.0, center=0.0):
    return Gaussian(sigma, center)


def gaussian_moment(sigma=1.0):
    return GaussianMoment(sigma)


def triangular_delta(n, x=0.0, chirp_rate=0.0):
    return TriangularDelta(n, x, chirp_rate)


def tabulated(grid, values):
    return Tabulated(grid, values)


def zero():
    return Zero()


def constant(c):
    return Constant(c)


def add(*fs):
    return Sum(fs)


def product(*fs):
    return Product(fs)


def scale(factor, f):
    return Scale(f, factor)


def translate(tau, f):
    return Translate(f, tau)


def dilate(k, f):
    return Dilate(f, k)


def modulate_cos(omega, f):
    return ModulateCos(f, omega)


def modulate_sin(omega, f):
    return ModulateSin(f, omega)


def modulate_cexp(omega, f):
    return ModulateCexp(f, omega)


def chirp_by(rate, f):
    return Chirp(f, rate)


def reflect_abs(f):
    return ReflectAbs(f)


def chirp_hat(f: FunctionSpec, A: CanonicalParams) -> FunctionSpec:
    """f multiplied by exp((i/2)(a/b) t^2)."""
    return Chirp(f, A.chirp_rate)


# ---------------------------------------------------------------- evaluation

def chirp(rate: float, t) -> np.ndarray:
    """exp((i/2) rate t^2); exactly 1 when rate == 0."""
    t = np.asarray(t, dtype=float)
    if rate == 0.0:
        return np.ones(t.shape, dtype=complex)
    return np.exp(0.5j * rate * (t * t))


def _raw(f: FunctionSpec, t: np.ndarray) -> np.ndarray:
    return f._eval(t)


def evaluate(f: FunctionSpec, t):
    """Pointwise value(s) of f.  Scalars in, complex out; arrays keep their shape."""
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("evaluation point must be finite")
    out = f._eval(arr.reshape(-1)).reshape(arr.shape)
    if arr.ndim == 0:
        return complex(out)
    return out


def cached(f: FunctionSpec, key, compute: Callable[[], np.ndarray]) -> np.ndarray:
    """Memoise an expensive evaluation on f (keyed by identity of f)."""
    try:
        slot = _cache.setdefault(f, {})
    except TypeError:
        return compute()
    if key not in slot:
        slot[key] = compute()
    return slot[key]


def node_values(f: FunctionSpec, cfg: QuadratureConfig) -> np.ndarray:
    return cached(f, ("nodes", cfg), lambda: f._eval(cfg.nodes()))


def integrate(f: FunctionSpec, cfg: QuadratureConfig | None = None) -> complex:
    cfg = cfg or current_quadrature()
    return complex(np.sum(cfg.weights() * node_values(f, cfg)))


def l1_norm(f: FunctionSpec, cfg: QuadratureConfig | None = None) -> float:
    cfg = cfg or current_quadrature()
    return float(np.sum(cfg.weights() * np.abs(node_values(f, cfg))))


def sample(f: FunctionSpec, grid) -> SampledField:
    g = np.asarray(grid, dtype=float)
    if g.size == 0:
        raise EmptyGrid("cannot sample on an empty grid")
    return SampledField(g, f._eval(g.reshape(-1)))


# ---------------------------------------------------------------- JSON codec

_UNARY = {
    "scale": (Scale, "factor"), "translate": (Translate, "tau"), "dilate": (Dilate, "k"),
    "modulate_cos": (ModulateCos, "omega"), "modulate_sin": (ModulateSin, "omega"),
    "modulate_cexp": (ModulateCexp, "omega"), "chirp": (Chirp, "rate"),
}


def from_dict(d: dict) -> FunctionSpec:
    kind = d.get("kind")
    if kind == "gaussian":
        return Gaussian(float(d.get("sigma", 1.0)), float(d.get("center", 0.0)))
    if kind == "gaussian_moment":
        return GaussianMoment(float(d.get("sigma", 1.0)))
    if kind == "triangular_delta":
        return TriangularDelta(int(d["n"]), float(d.get("x", 0.0)), float(d.get("chirp_rate", 0.0)))
    if kind == "tabulated":
        return Tabulated(d["grid"], [_from_cx(v) for v in d["values"]])
    if kind == "zero":
        return Zero()
    if kind == "constant":
        return Constant(_from_cx(d.get("c", 1.0)))
    if kind in ("sum", "product"):
        terms = [from_dict(x) for x in d["terms"]]
        return Sum(terms) if kind == "sum" else Product(terms)
    if kind == "reflect_abs":
        return ReflectAbs(from_dict(d["inner"]))
    if kind in _UNARY:
        cls, name = _UNARY[kind]
        raw = d[name]
        val = _from_cx(raw) if name == "factor" else float(raw)
        return cls(from_dict(d["inner"]), val)
    if kind == "convolution":
        from .convolution import Convolution
        return Convolution.from_dict(d, from_dict)
    raise ValueError(f"unknown function kind {kind!r}")


def to_dict(f: FunctionSpec) -> dict:
    return f.to_dict()
