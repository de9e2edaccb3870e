"""Finite-depth Boehmians [f_n / delta_n] over the ⋆ and Θ convolution algebras.

A Boehmian is held intensionally: a pure generator n -> f_n, a delta
sequence, a convolution kind and the depth up to which checks look.
Every check is a finite falsification test; none of them can prove a limit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .convolution import Convolution
from .delta import CompositeDelta, DeltaSeqSpec
from .errors import DenominatorNearZero, KindMismatch
from .functions import (FunctionSpec, QuadratureConfig, SampledField, Scale, Sum, Zero,
                        from_dict as function_from_dict, l1_norm, map_chunks)
from .params import CanonicalParams
from .transforms import transform_values

KINDS = ("star", "theta")
T_GRID = np.linspace(-2.0, 2.0, 9)
DEN_FLOOR = 1e-6
DEFAULT_BOEHMIAN_QUADRATURE = QuadratureConfig(8.0, 4096)


# ---------------------------------------------------------------- generators

@dataclass(frozen=True, eq=False)
class Embedded:
    f: FunctionSpec
    den: object
    kind: str
    cfg: QuadratureConfig

    def __call__(self, n):
        return Convolution(self.kind, self.f, self.den.term(n), self.den.params, "signed", self.cfg)

    def describe(self):
        return {"template": "embed", "f": self.f.to_dict()}


@dataclass(frozen=True, eq=False)
class Fixed:
    """f_n = f for every n."""
    f: FunctionSpec

    def __call__(self, n):
        return self.f

    def describe(self):
        return {"template": "constant", "f": self.f.to_dict()}


@dataclass(frozen=True, eq=False)
class IndexWeighted:
    """f_n = w(n) * f; used for deliberately broken sequences."""
    f: FunctionSpec
    weight: Callable[[int], complex]
    name: str

    def __call__(self, n):
        return Scale(self.f, self.weight(n))

    def describe(self):
        return {"template": self.name, "f": self.f.to_dict()}


@dataclass(frozen=True, eq=False)
class Scaled:
    inner: Callable
    factor: complex

    def __call__(self, n):
        return Scale(self.inner(n), self.factor)

    def describe(self):
        return {"template": "scale", "factor": [complex(self.factor).real, complex(self.factor).imag],
                "inner": _describe(self.inner)}


@dataclass(frozen=True, eq=False)
class CrossSum:
    """f_n ∘ psi_n + g_n ∘ phi_n."""
    f: Callable
    psi: object
    g: Callable
    phi: object
    kind: str
    cfg: QuadratureConfig

    def __call__(self, n):
        p = self.psi.params
        return Sum((Convolution(self.kind, self.f(n), self.psi.term(n), p, "signed", self.cfg),
                    Convolution(self.kind, self.g(n), self.phi.term(n), p, "signed", self.cfg)))

    def describe(self):
        return {"template": "add", "left": _describe(self.f), "right": _describe(self.g)}


@dataclass(frozen=True, eq=False)
class Paired:
    """f_n ∘ g_n."""
    f: Callable
    g: Callable
    kind: str
    params: CanonicalParams
    cfg: QuadratureConfig

    def __call__(self, n):
        return Convolution(self.kind, self.f(n), self.g(n), self.params, "signed", self.cfg)

    def describe(self):
        return {"template": "convolve", "left": _describe(self.f), "right": _describe(self.g)}


def _describe(gen):
    return gen.describe() if hasattr(gen, "describe") else {"template": "custom"}


# ---------------------------------------------------------------- Boehmian

@dataclass(eq=False)
class Boehmian:
    numerator: Callable[[int], FunctionSpec]
    denominator: object
    kind: str
    depth: int
    cfg: QuadratureConfig = DEFAULT_BOEHMIAN_QUADRATURE
    _terms: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Boehmian kind must be star or theta, got {self.kind!r}")
        if self.depth < 1:
            raise ValueError("depth must be positive")

    @property
    def params(self) -> CanonicalParams:
        return self.denominator.params

    def term(self, n: int) -> FunctionSpec:
        """f_n, memoised (generators are pure)."""
        if n not in self._terms:
            self._terms[n] = self.numerator(n)
        return self._terms[n]

    def delta(self, n: int) -> FunctionSpec:
        key = ("den", n)
        if key not in self._terms:
            self._terms[key] = self.denominator.term(n)
        return self._terms[key]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "numerator": _describe(self.numerator),
                "denominator": self.denominator.to_dict(), "depth": self.depth}


def embed(f: FunctionSpec, den, kind: str = "star", depth: int = 16,
          cfg: QuadratureConfig = DEFAULT_BOEHMIAN_QUADRATURE) -> Boehmian:
    """[f ∘ delta_n / delta_n]."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    return Boehmian(Embedded(f, den, kind, cfg), den, kind, depth, cfg)


def _same_kind(B1: Boehmian, B2: Boehmian):
    if B1.kind != B2.kind:
        raise KindMismatch(f"{B1.kind} vs {B2.kind}")


def scale(B: Boehmian, factor: complex) -> Boehmian:
    return Boehmian(Scaled(B.numerator, factor), B.denominator, B.kind, B.depth, B.cfg)


def add(B1: Boehmian, B2: Boehmian) -> Boehmian:
    """[(f_n ∘ psi_n + g_n ∘ phi_n) / (phi_n ∘ psi_n)]."""
    _same_kind(B1, B2)
    gen = CrossSum(B1.numerator, B2.denominator, B2.numerator, B1.denominator, B1.kind, B1.cfg)
    den = CompositeDelta(B1.denominator, B2.denominator, B1.kind, B1.cfg)
    return Boehmian(gen, den, B1.kind, min(B1.depth, B2.depth), B1.cfg)


def convolve(B1: Boehmian, B2: Boehmian) -> Boehmian:
    """[(f_n ∘ g_n) / (phi_n ∘ psi_n)]."""
    _same_kind(B1, B2)
    gen = Paired(B1.numerator, B2.numerator, B1.kind, B1.params, B1.cfg)
    den = CompositeDelta(B1.denominator, B2.denominator, B1.kind, B1.cfg)
    return Boehmian(gen, den, B1.kind, min(B1.depth, B2.depth), B1.cfg)


def algebra(op: str, B1: Boehmian, B2: Boehmian | None = None, factor: complex = 1.0) -> Boehmian:
    if op == "scale":
        return scale(B1, factor)
    if B2 is None:
        raise ValueError(f"{op} needs two Boehmians")
    if op == "add":
        return add(B1, B2)
    if op == "convolve":
        return convolve(B1, B2)
    raise ValueError(f"unknown Boehmian operation {op!r}")


# ---------------------------------------------------------------- checks

@dataclass
class CheckResult:
    max_residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"max_residual": self.max_residual, "tolerance": self.tolerance, "pass": self.passed}
        d.update(self.details)
        return d


def _conv(B: Boehmian, f, g, cfg):
    return Convolution(B.kind, f, g, B.params, "signed", cfg)


def quotient_check(B: Boehmian, cfg: QuadratureConfig | None = None, tol: float = 1e-6,
                   t_grid=T_GRID) -> CheckResult:
    """max over m < n <= depth of |f_m ∘ delta_n - f_n ∘ delta_m| on the t grid."""
    if B.depth < 2:
        raise ValueError("depth must be >= 2")
    cfg = cfg or B.cfg
    t = np.asarray(t_grid, dtype=float)
    pairs = [(m, n) for n in range(2, B.depth + 1) for m in range(1, n)]

    def one(pair):
        m, n = pair
        lhs = _conv(B, B.term(m), B.delta(n), cfg)._eval(t)
        rhs = _conv(B, B.term(n), B.delta(m), cfg)._eval(t)
        return float(np.max(np.abs(lhs - rhs)))

    res = map_chunks(one, pairs)
    worst = max(res)
    return CheckResult(worst, tol, worst <= tol,
                       {"pairs": [list(p) for p in pairs], "residuals": res})


def equivalence_residuals(B1: Boehmian, B2: Boehmian, cfg=None, t_grid=T_GRID) -> list[float]:
    _same_kind(B1, B2)
    cfg = cfg or B1.cfg
    t = np.asarray(t_grid, dtype=float)
    depth = min(B1.depth, B2.depth)

    def one(n):
        lhs = _conv(B1, B1.term(n), B2.delta(n), cfg)._eval(t)
        rhs = _conv(B1, B2.term(n), B1.delta(n), cfg)._eval(t)
        return float(np.max(np.abs(lhs - rhs)))

    return map_chunks(one, range(1, depth + 1))


def equivalence_check(B1: Boehmian, B2: Boehmian, cfg=None, tol: float = 1e-4) -> bool:
    """f_n ∘ psi_n == g_n ∘ phi_n for every n <= min depth, within tol."""
    return max(equivalence_residuals(B1, B2, cfg)) <= tol


# ---------------------------------------------------------------- transforms

@dataclass
class TransformedBoehmian:
    numerators: dict
    denominators: dict
    grid: np.ndarray
    which: str

    def ratio(self, n: int) -> np.ndarray:
        return self.numerators[n].values / self.denominators[n].values

    def ratio_field(self, n: int) -> SampledField:
        return SampledField(self.grid, self.ratio(n))


def transform(B: Boehmian, which: str, s_grid, cfg: QuadratureConfig | None = None,
              indices=None) -> TransformedBoehmian:
    """C_A (or S_A) of the numerators over C_A of the delta terms."""
    if which == "cct" and B.kind != "star" or which == "cst" and B.kind != "theta":
        raise KindMismatch(f"{which} pairs with {'star' if which == 'cct' else 'theta'} Boehmians")
    if which not in ("cct", "cst"):
        raise ValueError(f"unknown transform {which!r}")
    cfg = cfg or B.cfg
    s = np.asarray(s_grid, dtype=float)
    indices = sorted(set(indices if indices is not None else [B.depth]))
    A = B.params
    nums, dens = {}, {}
    for n in indices:
        den = transform_values(B.delta(n), A, "cct", s, cfg)
        small = np.abs(den) < DEN_FLOOR
        if np.any(small):
            i = int(np.argmax(small))
            raise DenominatorNearZero(float(s[i]), n, complex(den[i]))
        dens[n] = SampledField(s, den)
        nums[n] = SampledField(s, transform_values(B.term(n), A, which, s, cfg))
    return TransformedBoehmian(nums, dens, s, which)


@dataclass
class LimitReport:
    schedule: list
    deltas: list
    monotone: bool

    def to_dict(self):
        return {"schedule": self.schedule, "deltas": self.deltas, "monotone": self.monotone,
                "pass": self.monotone}


def _non_increasing(v, rel=1e-9, floor=1e-14):
    return all(b <= a * (1 + rel) + floor for a, b in zip(v, v[1:]))


def limit_estimate(TB: TransformedBoehmian, schedule) -> tuple[SampledField, LimitReport]:
    """Deepest numerator field and sup-norm gaps between successive schedule entries."""
    schedule = list(schedule)
    if schedule != sorted(schedule):
        raise ValueError("schedule must be ascending")
    fields = [TB.numerators[n].values for n in schedule]
    deltas = [float(np.max(np.abs(b - a))) for a, b in zip(fields, fields[1:])]
    # gaps must shrink; a sequence stuck at a constant nonzero gap is not settling
    settled = max(deltas, default=0.0) <= 1e-14
    shrinking = _non_increasing(deltas) and len(deltas) > 1 and deltas[-1] < deltas[0]
    return TB.numerators[schedule[-1]], LimitReport(schedule, deltas, settled or shrinking)


def delta_lim_check(Bseq: list, B: Boehmian, cfg=None, tol: float = 1e-8,
                    variant: str = "Delta") -> CheckResult:
    """Norms ||(B_k - B) ∘ delta||_1 across k.

    variant "Delta" pairs k with the k-th delta term; "delta" fixes n = B.depth
    and requires a shared denominator.  Pass means every norm is within tol or
    the norms are non-increasing with an overall decrease.
    """
    cfg = cfg or B.cfg
    norms = []
    for k, Bk in enumerate(Bseq, start=1):
        _same_kind(Bk, B)
        n = min(k, B.depth) if variant == "Delta" else B.depth
        if Bk.denominator == B.denominator:
            diff = Sum((Bk.term(n), Scale(B.term(n), -1.0)))
        elif variant == "delta":
            raise KindMismatch("delta-convergence needs a shared denominator family")
        else:
            diff = Sum((_conv(B, Bk.term(n), B.delta(n), cfg),
                        Scale(_conv(B, B.term(n), Bk.delta(n), cfg), -1.0)))
        norms.append(l1_norm(diff, cfg))
    small = all(v <= tol for v in norms)
    decreasing = _non_increasing(norms) and norms[-1] < norms[0]
    worst = norms[-1]
    return CheckResult(worst, tol, small or decreasing,
                       {"norms": norms, "variant": variant, "decreasing": decreasing})


# ---------------------------------------------------------------- JSON

_WEIGHTS = {
    "index_scaled": lambda n: float(n),
    "alternating": lambda n: float((-1) ** n),
}


def from_dict(d: dict, params: CanonicalParams, cfg: QuadratureConfig = DEFAULT_BOEHMIAN_QUADRATURE,
              depth: int | None = None) -> Boehmian:
    kind = d.get("kind", "star")
    den_d = d.get("denominator", {})
    den = DeltaSeqSpec(den_d.get("family", "triangular"), float(den_d.get("x", 0.0)),
                       CanonicalParams(*den_d["params"]) if "params" in den_d else params)
    depth = int(depth or d.get("depth", 16))
    num = d.get("numerator", {})
    template = num.get("template", "embed")
    f = function_from_dict(num["f"]) if "f" in num else Zero()
    if template == "embed":
        return embed(f, den, kind, depth, cfg)
    if template == "constant":
        return Boehmian(Fixed(f), den, kind, depth, cfg)
    if template in _WEIGHTS:
        return Boehmian(IndexWeighted(f, _WEIGHTS[template], template), den, kind, depth, cfg)
    raise ValueError(f"unknown numerator template {template!r}")
