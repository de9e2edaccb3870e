"""Delta sequences: the triangular family, axiom checks, closure under ⋆ and Θ."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convolution import Convolution
from .errors import BZero, UnderResolved
from .functions import (FunctionSpec, QuadratureConfig, TriangularDelta, map_chunks,
                        node_values)
from .params import CanonicalParams

EPSILONS = (0.5, 0.1, 0.02)


@dataclass(frozen=True)
class DeltaSeqSpec:
    family: str = "triangular"
    x: float = 0.0
    chirp_params: CanonicalParams = field(default_factory=lambda: CanonicalParams(0, 1, -1, 0))

    def __post_init__(self):
        if self.family != "triangular":
            raise ValueError(f"unknown delta family {self.family!r}")
        if self.chirp_params.b_zero:
            raise BZero("delta sequences need b != 0")

    @property
    def params(self) -> CanonicalParams:
        return self.chirp_params

    def term(self, n: int) -> FunctionSpec:
        return triangular_delta(self, n)

    def to_dict(self) -> dict:
        return {"family": self.family, "x": self.x, "params": self.chirp_params.as_list()}


@dataclass(frozen=True)
class CompositeDelta:
    """The sequence (phi_n ∘ psi_n) used as denominator of binary Boehmian operations."""
    left: "DeltaSeqSpec | CompositeDelta"
    right: "DeltaSeqSpec | CompositeDelta"
    op: str
    cfg: QuadratureConfig

    @property
    def params(self) -> CanonicalParams:
        return self.left.params

    @property
    def x(self) -> float:
        return self.left.x

    def term(self, n: int) -> FunctionSpec:
        return Convolution(self.op, self.left.term(n), self.right.term(n),
                           self.params, "signed", self.cfg)

    def to_dict(self) -> dict:
        return {"family": "composite", "op": self.op,
                "left": self.left.to_dict(), "right": self.right.to_dict()}


def triangular_delta(spec: DeltaSeqSpec, n: int) -> TriangularDelta:
    if n < 1:
        raise ValueError("n must be >= 1")
    return TriangularDelta(n, spec.x, spec.chirp_params.chirp_rate)


@dataclass
class DeltaAxiomReport:
    checked_n: list
    unit_integral_residuals: list
    norms: list
    norm_bound: float
    tail_mass: dict
    tolerance: float
    passed: bool
    grids: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "checked_n": self.checked_n,
            "unit_integral_residuals": self.unit_integral_residuals,
            "norms": self.norms,
            "norm_bound": self.norm_bound,
            "tail_mass": {str(k): v for k, v in self.tail_mass.items()},
            "tolerance": self.tolerance,
            "grids": self.grids,
            "pass": self.passed,
        }


def dyadic(n_max: int, start: int = 1) -> list[int]:
    out, n = [], start
    while n <= n_max:
        out.append(n)
        n *= 2
    return out


def aligned_config(cfg: QuadratureConfig, n: int) -> QuadratureConfig:
    """Refine cfg so 0, 1/n, 2/n are nodes and the step obeys the spike guard.

    The trapezoid rule is then exact on every linear piece of the tent.
    """
    h0 = min(cfg.step, 1.0 / (8 * n))
    m = math.ceil(1.0 / (n * h0) - 1e-9)
    h = 1.0 / (n * m)
    width = max(cfg.half_width, 2.0 / n + 1.0 / n)  # keep the whole support inside
    half = math.ceil(width / h - 1e-9)
    return QuadratureConfig(half * h, 2 * half, cfg.tol)


def _axioms_for(term: FunctionSpec, x: float, rate: float, cfg: QuadratureConfig):
    t = cfg.nodes()
    w = cfg.weights()
    v = node_values(term, cfg)
    unit = complex(np.sum(w * np.exp(1j * rate * x * t) * v)) if rate * x else complex(np.sum(w * v))
    a = np.abs(v)
    norm = float(np.sum(w * a))
    tails = [_tail(t, a, eps) for eps in EPSILONS]
    return abs(unit - 1.0), norm, tails


def _tail(t, a, eps):
    """Trapezoid integral of a over |t| > eps with eps inserted as a node."""
    def right(tt, aa):
        keep = tt > eps
        if not np.any(keep):
            return 0.0
        u = np.concatenate(([eps], tt[keep]))
        v = np.concatenate(([np.interp(eps, tt, aa)], aa[keep]))
        return float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(u)))
    return right(t, a) + right(-t[::-1], a[::-1])


def _report(ns, results, tol, grids) -> DeltaAxiomReport:
    residuals = [r[0] for r in results]
    norms = [r[1] for r in results]
    tails = {eps: [r[2][i] for r in results] for i, eps in enumerate(EPSILONS)}
    bound = max(norms)
    tails_ok = all(all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(v, v[1:])) for v in tails.values())
    ok = max(residuals) <= tol and math.isfinite(bound) and tails_ok
    return DeltaAxiomReport(list(ns), residuals, norms, bound, tails, tol, ok, grids)


def check_axioms(spec, n_max: int, cfg: QuadratureConfig, tol: float = 1e-8,
                 ns: list[int] | None = None) -> DeltaAxiomReport:
    """Axioms (unit chirped integral, bounded norm, vanishing tails) over a schedule of n.

    Triangular terms are integrated on a kink-aligned refinement of cfg; composite
    terms on cfg itself, which must already resolve the narrowest spike.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    ns = list(ns) if ns is not None else dyadic(n_max)
    rate = spec.params.chirp_rate

    def one(n):
        if isinstance(spec, DeltaSeqSpec):
            c = aligned_config(cfg, n)
        else:
            c = cfg
            if c.half_width < 4.0 / n:
                raise UnderResolved(f"window [-{c.half_width}, {c.half_width}] cuts the support at n = {n}")
            if c.step > 1.0 / (8 * n) * (1 + 1e-12):
                raise UnderResolved(f"step {c.step:.4g} too coarse for n = {n}")
        return _axioms_for(spec.term(n), spec.x, rate, c), c.to_dict()

    out = map_chunks(one, ns)
    return _report(ns, [o[0] for o in out], tol, [o[1] for o in out])


def star_closure_check(s1: DeltaSeqSpec, s2: DeltaSeqSpec, kind: str, n_max: int,
                       cfg: QuadratureConfig, tol: float = 1e-4) -> DeltaAxiomReport:
    """Axioms for phi_n ⋆ psi_n (or Θ), plus the norm bound ||phi_n ∘ psi_n|| <= ||phi_n|| ||psi_n||."""
    if kind not in ("star", "theta"):
        raise ValueError("kind must be star or theta")
    comp = CompositeDelta(s1, s2, kind, cfg)
    rep = check_axioms(comp, n_max, cfg, tol)
    n1 = check_axioms(s1, n_max, cfg).norms
    n2 = check_axioms(s2, n_max, cfg).norms
    bound_ok = all(c <= a * b * (1 + 1e-6) for c, a, b in zip(rep.norms, n1, n2))
    rep.passed = rep.passed and bound_ok
    return rep


def normalized_transform_sup(spec: DeltaSeqSpec, A: CanonicalParams, n: int, s_grid,
                             cfg: QuadratureConfig) -> float:
    """sup_s |sqrt(2 pi i b) exp(-(i/2)(d/b) s^2) C_A(delta_n)(s) - 1|."""
    from .transforms import convolution_prefactor, transform_values
    c = aligned_config(cfg, n)
    vals = transform_values(spec.term(n), A, "cct", s_grid, c)
    return float(np.max(np.abs(convolution_prefactor(A, np.asarray(s_grid)) * vals - 1.0)))
