"""Residual checks for every identity the transform theory claims.

Each check returns a PropertyReport carrying its inputs, grids, per-point
residuals and tolerance, so a report can be re-run from its own fields.
Suites bundle checks; a suite passes iff every report passes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import boehmian as bm
from .convolution import Convolution
from .delta import (DeltaSeqSpec, aligned_config, check_axioms, normalized_transform_sup,
                    star_closure_check)
from .functions import (Chirp, Dilate, FunctionSpec, Gaussian, GaussianMoment, ModulateCexp,
                        ModulateCos, ModulateSin, QuadratureConfig, ReflectAbs, Scale, Sum,
                        Tabulated, Translate, Zero, l1_norm, map_chunks)
from .params import CanonicalParams, inverse, preset
from .transforms import convolution_prefactor, transform_values

DEFAULT_PARAMS = CanonicalParams(1.0, 2.0, 1.0, 3.0)
THEOREM_QUADRATURE = QuadratureConfig(12.0, 8192)
LIGHT_QUADRATURE = QuadratureConfig(12.0, 2048)
S_THEOREM = np.linspace(-4.0, 4.0, 33)
S_IDENTITY = np.linspace(-3.0, 3.0, 25)
T_GRID = np.linspace(-2.0, 2.0, 9)
SHIPPING = "derived"


# ---------------------------------------------------------------- reports

@dataclass
class PropertyReport:
    name: str
    params: CanonicalParams | None
    inputs: list
    abs_mode: str
    grid_meta: dict
    residuals: list
    max_residual: float
    tolerance: float
    passed: bool
    conditions: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params.as_list() if self.params is not None else None,
            "inputs": self.inputs,
            "abs_mode": self.abs_mode,
            "grid_meta": self.grid_meta,
            "residuals": self.residuals,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "conditions": self.conditions,
            "notes": self.notes,
            "pass": self.passed,
        }


def _report(name, A, inputs, residuals, tol, *, mode="signed", cfg=None, grid=None,
            grid_name="s", conditions=None, notes=None, extra_meta=None) -> PropertyReport:
    res = [float(r) for r in np.asarray(residuals, dtype=float).reshape(-1)]
    if not all(math.isfinite(r) for r in res):
        raise ArithmeticError(f"{name}: non-finite residual")
    worst = max(res) if res else 0.0
    conditions = dict(conditions or {})
    meta = {}
    if cfg is not None:
        meta["quadrature"] = cfg.to_dict()
    if grid is not None:
        meta[grid_name] = [float(v) for v in np.asarray(grid).reshape(-1)]
    meta.update(extra_meta or {})
    ok = worst <= tol and all(bool(c) for c in conditions.values())
    return PropertyReport(name, A, [f.to_dict() if isinstance(f, FunctionSpec) else f for f in inputs],
                          mode, meta, res, worst, tol, ok, conditions, notes or {})


# ---------------------------------------------------------------- corpus

def corpus(seed: int = 20240611, n_random: int = 20) -> list[FunctionSpec]:
    """Fixed test signals: Gaussians, an odd moment, mirrored variants, random tables."""
    fs = [Gaussian(1.0, 0.0), Gaussian(2.0, 0.5), GaussianMoment(1.0),
          ReflectAbs(Gaussian(1.0, 0.5)), ReflectAbs(GaussianMoment(1.0))]
    rng = np.random.default_rng(seed)
    grid = np.linspace(-3.0, 3.0, 31)
    taper = np.exp(-grid ** 2 / 4)
    for _ in range(n_random):
        v = (rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)) * taper
        fs.append(Tabulated(grid, v))
    return fs


def gaussian_triple() -> tuple[FunctionSpec, FunctionSpec, FunctionSpec]:
    return Gaussian(1.0, 0.0), Gaussian(2.0, 0.0), Gaussian(0.75, 0.0)


PARITY_PARAMS = (DEFAULT_PARAMS, preset("fourier"), preset("fresnel", 2.0))


# ---------------------------------------------------------------- convolution theorems

def _cc_residual(f, g, A, s, mode, cfg):
    lhs = transform_values(Convolution("star", f, g, A, mode, cfg), A, "cct", s, cfg)
    rhs = convolution_prefactor(A, s) * transform_values(f, A, "cct", s, cfg) * \
        transform_values(g, A, "cct", s, cfg)
    return np.abs(lhs - rhs)


def _cs_residual(f, g, A, s, mode, cfg):
    lhs = transform_values(Convolution("theta", f, g, A, mode, cfg), A, "cst", s, cfg)
    rhs = convolution_prefactor(A, s) * transform_values(f, A, "cst", s, cfg) * \
        transform_values(g, A, "cct", s, cfg)
    return np.abs(lhs - rhs)


def _theorem(name, fn, f, g, A, s_grid, mode, cfg, tol, compare_modes):
    s = np.asarray(s_grid, dtype=float)
    res = fn(f, g, A, s, mode, cfg)
    notes = {}
    if compare_modes:
        other = "mirrored" if mode == "signed" else "signed"
        alt = float(np.max(fn(f, g, A, s, other, cfg)))
        notes = {f"max_residual_{other}": alt,
                 "tighter_mode": mode if float(np.max(res)) <= alt else other}
    return _report(name, A, [f, g], res, tol, mode=mode, cfg=cfg, grid=s, notes=notes)


def check_cc_convolution(f, g, A=DEFAULT_PARAMS, s_grid=S_THEOREM, mode="signed",
                         cfg=THEOREM_QUADRATURE, tol=1e-4, compare_modes=False):
    """|C(f ⋆ g) - sqrt(2 pi i b) exp(-(i/2)(d/b)s^2) C(f) C(g)|."""
    return _theorem("cc_convolution", _cc_residual, f, g, A, s_grid, mode, cfg, tol, compare_modes)


def check_cs_convolution(f, g, A=DEFAULT_PARAMS, s_grid=S_THEOREM, mode="signed",
                         cfg=THEOREM_QUADRATURE, tol=1e-4, compare_modes=False):
    """|S(f Θ g) - sqrt(2 pi i b) exp(-(i/2)(d/b)s^2) S(f) C(g)|."""
    return _theorem("cs_convolution", _cs_residual, f, g, A, s_grid, mode, cfg, tol, compare_modes)


def check_theta_decomposition(f, g, A=DEFAULT_PARAMS, t_grid=T_GRID, mode="signed",
                              cfg=LIGHT_QUADRATURE, tol=1e-10):
    t = np.asarray(t_grid, dtype=float)
    th = Convolution("theta", f, g, A, mode, cfg)._eval(t)
    st = Convolution("star", f, g, A, mode, cfg)._eval(t)
    ot = Convolution("otimes", f, g, A, mode, cfg)._eval(t)
    return _report("theta_decomposition", A, [f, g], np.abs(th - (st - ot)), tol,
                   mode=mode, cfg=cfg, grid=t, grid_name="t")


def check_norm_bounds(kind, f, g, A=DEFAULT_PARAMS, cfg=LIGHT_QUADRATURE, tol=1e-6):
    """classic: | ||f*g|| - ||f|| ||g|| |; others: excess of ||f∘g|| over (1+tol) ||f|| ||g||."""
    c = Convolution(kind, f, g, None if kind == "classic" else A, "signed", cfg)
    lhs = l1_norm(c, cfg)
    prod = l1_norm(f, cfg) * l1_norm(g, cfg)
    if kind == "classic":
        res = abs(lhs - prod)
        return _report(f"norm_identity_{kind}", None, [f, g], [res], tol, cfg=cfg,
                       notes={"norm": lhs, "product": prod})
    excess = max(0.0, lhs - prod * (1 + tol))
    return _report(f"norm_bound_{kind}", A, [f, g], [excess], 0.0, cfg=cfg,
                   notes={"norm": lhs, "product": prod, "relative_slack": tol})


# ---------------------------------------------------------------- transform checks

def check_parity_split(f, A=DEFAULT_PARAMS, s_grid=S_IDENTITY, cfg=LIGHT_QUADRATURE, tol=1e-12):
    s = np.asarray(s_grid, dtype=float)
    lct = transform_values(f, A, "lct", s, cfg)
    cct = transform_values(f, A, "cct", s, cfg)
    cst = transform_values(f, A, "cst", s, cfg)
    return _report("parity_split", A, [f], np.abs(lct - (cct - 1j * cst)), tol, cfg=cfg, grid=s)


def check_roundtrip(f, A, t_grid=np.linspace(-3.0, 3.0, 61), cfg=THEOREM_QUADRATURE, tol=1e-4):
    """Forward transform on the quadrature nodes, tabulate, invert on the same nodes."""
    t = np.asarray(t_grid, dtype=float)
    if A.b_zero:
        # the b = 0 transform is pointwise, so its image has a closed form
        F = Scale(Chirp(Dilate(f, A.d), A.c * A.d), complex(np.sqrt(A.d)))
        out = transform_values(F, inverse(A), "lct", t, cfg)
    else:
        nodes = cfg.nodes()
        F = Tabulated(nodes, transform_values(f, A, "lct", nodes, cfg))
        out = transform_values(F, inverse(A), "lct", t, cfg)
    return _report("roundtrip", A, [f], np.abs(out - f._eval(t)), tol, cfg=cfg, grid=t, grid_name="t")


def fourier_oracle(f: FunctionSpec, half_width: float = 12.0, samples: int = 4096):
    """Unitary Fourier transform of f truncated to [-T, T] via numpy's FFT.

    Returns (s, values) at the FFT bin frequencies.
    """
    dt = 2.0 * half_width / samples
    t = -half_width + dt * np.arange(samples)
    spec = np.fft.fft(f._eval(t))
    s = 2.0 * np.pi * np.fft.fftfreq(samples, dt)
    vals = dt * np.exp(1j * s * half_width) * spec / np.sqrt(2j * np.pi)
    order = np.argsort(s)
    return s[order], vals[order]


def check_fourier_crosscheck(f, s_max=4.0, cfg=THEOREM_QUADRATURE, tol=1e-4, samples=4096):
    s, oracle = fourier_oracle(f, cfg.half_width, samples)
    keep = np.abs(s) <= s_max
    s, oracle = s[keep], oracle[keep]
    ours = transform_values(f, preset("fourier"), "lct", s, cfg)
    return _report("fourier_crosscheck", preset("fourier"), [f], np.abs(ours - oracle), tol,
                   cfg=cfg, grid=s, extra_meta={"oracle_samples": samples})


# ---------------------------------------------------------------- semigroup

def check_semigroup(kind, f, g, h, A=DEFAULT_PARAMS, t_grid=T_GRID, cfg=LIGHT_QUADRATURE,
                    tol_comm=1e-8, tol_assoc=1e-6, inner_divisor=4, mode="signed"):
    """Commutativity (main residual) and associativity (condition) of ∘ = kind."""
    t = np.asarray(t_grid, dtype=float)
    P = None if kind == "classic" else A
    c = lambda u, v, q: Convolution(kind, u, v, P, mode, q)
    comm = np.abs(c(f, g, cfg)._eval(t) - c(g, f, cfg)._eval(t))
    inner = QuadratureConfig(cfg.half_width, max(16, cfg.points // inner_divisor), cfg.tol)
    left = c(c(f, g, inner), h, cfg)._eval(t)
    right = c(f, c(g, h, inner), cfg)._eval(t)
    assoc = np.abs(left - right)
    a_max = float(np.max(assoc))
    return _report(f"semigroup_{kind}", A, [f, g, h], comm, tol_comm, mode=mode, cfg=cfg, grid=t,
                   grid_name="t", conditions={"associativity": a_max <= tol_assoc},
                   notes={"associativity_residuals": assoc.tolist(),
                          "associativity_max": a_max, "associativity_tolerance": tol_assoc},
                   extra_meta={"inner_points": inner.points})


# ---------------------------------------------------------------- delta sequences

def _non_increasing(v, rel=1e-9, floor=1e-14):
    return all(b <= a * (1 + rel) + floor for a, b in zip(v, v[1:]))


def check_approx_identity(f, den: DeltaSeqSpec, kind="star", schedule=(4, 8, 16, 32, 64),
                          cfg=QuadratureConfig(8.0, 1024), tol=1e-2):
    """||f ∘ delta_n - f||_1 over the schedule: non-increasing and final <= tol."""
    schedule = list(schedule)
    q = aligned_config(cfg, max(schedule))
    A = den.params

    def one(n):
        diff = Sum((Convolution(kind, f, den.term(n), A, "signed", q), Scale(f, -1.0)))
        return l1_norm(diff, q)

    norms = map_chunks(one, schedule)
    return _report(f"approx_identity_{kind}", A, [f, den.to_dict()], [norms[-1]], tol, cfg=q,
                   conditions={"non_increasing": _non_increasing(norms)},
                   notes={"schedule": schedule, "norms": norms})


def check_delta_axioms(den: DeltaSeqSpec, n_max=64, cfg=QuadratureConfig(1.0, 1024), tol=1e-8,
                       ns=None):
    rep = check_axioms(den, n_max, cfg, tol, ns)
    tail_half = rep.tail_mass[0.5]
    zero_tail = all(v == 0.0 for n, v in zip(rep.checked_n, tail_half) if n >= 4)
    return _report("delta_axioms", den.params, [den.to_dict()], rep.unit_integral_residuals, tol,
                   cfg=cfg, conditions={"axioms": rep.passed, "zero_tail_eps_0.5": zero_tail},
                   notes=rep.to_dict())


def check_delta_closure(den1, den2, kind="star", n_max=16, cfg=None, tol=1e-4):
    cfg = cfg or QuadratureConfig(4.0, 64 * n_max)
    rep = star_closure_check(den1, den2, kind, n_max, cfg, tol)
    return _report(f"delta_closure_{kind}", den1.params, [den1.to_dict(), den2.to_dict()],
                   rep.unit_integral_residuals, tol, cfg=cfg,
                   conditions={"axioms": rep.passed}, notes=rep.to_dict())


def check_delta_transform(den: DeltaSeqSpec, A=DEFAULT_PARAMS, schedule=(4, 8, 16, 32, 64),
                          s_grid=np.linspace(-2.0, 2.0, 41), cfg=QuadratureConfig(1.0, 1024),
                          tol=0.1):
    """sup_s |sqrt(2 pi i b) exp(-(i/2)(d/b)s^2) C(delta_n)(s) - 1| across the schedule."""
    sups = [normalized_transform_sup(den, A, n, s_grid, cfg) for n in schedule]
    raw = transform_values(den.term(schedule[-1]), A, "cct", s_grid, aligned_config(cfg, schedule[-1]))
    return _report("delta_transform", A, [den.to_dict()], [sups[-1]], tol, cfg=cfg, grid=s_grid,
                   conditions={"non_increasing": _non_increasing(sups)},
                   notes={"schedule": list(schedule), "sup_residuals": sups,
                          "raw_abs_at_deepest": np.abs(raw).tolist()})


# ---------------------------------------------------------------- identities

def _tv(kind, f, A, s, cfg):
    return transform_values(f, A, kind, s, cfg)


def _phase(rate, s):
    return np.exp(1j * rate * s)


def _id_linearity(fam, f, A, s, cfg, lam=2j, g=None):
    g = g if g is not None else Gaussian(2.0, 0.5)
    lhs = _tv(fam, Sum((Scale(f, lam), g)), A, s, cfg)
    rhs = lam * _tv(fam, f, A, s, cfg) + _tv(fam, g, A, s, cfg)
    return lhs, {"statement": rhs, "derived": rhs}


def _id_convolution(fam, f, A, s, cfg, g=None):
    g = g if g is not None else Gaussian(1.0, 0.0)
    op = "star" if fam == "cct" else "theta"
    lhs = _tv(fam, Convolution(op, f, g, A, "signed", cfg), A, s, cfg)
    Tf = _tv(fam, f, A, s, cfg)
    P = convolution_prefactor(A, s)
    if fam == "cct":
        Tg = _tv("cct", g, A, s, cfg)
        return lhs, {"statement": Tf * Tg, "derived": P * Tf * Tg}
    return lhs, {"statement": Tf * _tv("cst", g, A, s, cfg),
                 "derived": P * Tf * _tv("cct", g, A, s, cfg)}


def _id_scaling(fam, f, A, s, cfg, k=2.0):
    lhs = _tv(fam, Dilate(f, k), A, s, cfg)
    inner = _tv(fam, Chirp(f, (1.0 / k ** 2 - 1.0) * A.chirp_rate), A, s / k, cfg)
    ph = np.exp((1.0 - 1.0 / k ** 2) * 0.5j * A.out_rate * s ** 2)
    return lhs, {"statement": ph * inner / k, "derived": ph * inner / abs(k)}


def _id_translation(fam, f, A, s, cfg, tau=0.3):
    p = A.chirp_rate
    lhs = _tv(fam, Translate(f, tau), A, s, cfg)
    M = ModulateCexp(f, -p * tau)
    cm, sm = _tv("cct", M, A, s, cfg), _tv("cst", M, A, s, cfg)
    pre = np.exp(0.5j * p * tau ** 2)
    c, sn = np.cos(s * tau / A.b), np.sin(s * tau / A.b)
    if fam == "cct":
        return lhs, {"statement": pre * (c * cm + 1j * sn * sm), "derived": pre * (c * cm + sn * sm)}
    rhs = pre * (c * sm - sn * cm)
    return lhs, {"statement": rhs, "derived": rhs}


def _id_modulation(fam, f, A, s, cfg, x=0.5):
    lhs = _tv(fam, ModulateCexp(f, x), A, s, cfg)
    rhs = _tv(fam, ModulateCos(f, x), A, s, cfg) + 1j * _tv(fam, ModulateSin(f, x), A, s, cfg)
    return lhs, {"statement": rhs, "derived": rhs}


def _shifted(kind, f, A, s, x, cfg):
    bx = A.b * x
    return _tv(kind, f, A, s + bx, cfg), _tv(kind, f, A, s - bx, cfg)


def _id_cos_product(fam, f, A, s, cfg, x=0.5):
    lhs = _tv(fam, ModulateCos(f, x), A, s, cfg)
    plus, minus = _shifted(fam, f, A, s, x, cfg)
    dbx2 = A.d * A.b * x * x
    w = A.d * x
    neg = np.exp(-0.5j * dbx2) / 2
    pos = np.exp(0.5j * dbx2) / 2
    derived = neg * (_phase(-w, s) * plus + _phase(w, s) * minus)
    flipped = pos * (_phase(w, s) * plus + _phase(-w, s) * minus)
    if fam == "cct":
        return lhs, {"statement": derived, "proof": flipped, "derived": derived}
    return lhs, {"statement": flipped, "proof": flipped, "derived": derived}


def _id_sin_product(fam, f, A, s, cfg, x=0.5):
    lhs = _tv(fam, ModulateSin(f, x), A, s, cfg)
    dbx2 = A.d * A.b * x * x
    w = A.d * x
    neg = np.exp(-0.5j * dbx2) / 2
    pos = np.exp(0.5j * dbx2) / 2
    if fam == "cct":
        plus, minus = _shifted("cst", f, A, s, x, cfg)
        derived = neg * (_phase(-w, s) * plus - _phase(w, s) * minus)
        proof = pos * (_phase(w, s) * plus - _phase(-w, s) * minus)
        return lhs, {"statement": derived, "proof": proof, "derived": derived}
    plus, minus = _shifted("cct", f, A, s, x, cfg)
    derived = neg * (_phase(w, s) * minus - _phase(-w, s) * plus)
    printed = pos * (_phase(-w, s) * minus - _phase(w, s) * plus)
    return lhs, {"statement": printed, "proof": printed, "derived": derived}


IDENTITIES = {
    "linearity": (_id_linearity, {"lam": 1.0}, {"lam": 2j}),
    "convolution": (_id_convolution, {"g": Zero()}, {}),
    "scaling": (_id_scaling, {"k": 1.0}, {"k": 2.0}),
    "translation": (_id_translation, {"tau": 0.0}, {"tau": 0.3}),
    "modulation": (_id_modulation, {"x": 0.0}, {"x": 0.5}),
    "cos_product": (_id_cos_product, {"x": 0.0}, {"x": 0.5}),
    "sin_product": (_id_sin_product, {"x": 0.0}, {"x": 0.5}),
}
IDENTITY_NAMES = [f"{fam}.{name}" for fam in ("cct", "cst") for name in IDENTITIES]


def check_identity(which: str, f: FunctionSpec | None = None, A=DEFAULT_PARAMS, s_grid=S_IDENTITY,
                   cfg=LIGHT_QUADRATURE, tol=1e-4, degenerate=False, **args):
    """One of the 14 transform identities, e.g. "cct.cos_product".

    Every printed convention is evaluated; the report's residual is the shipping
    ("derived") form and the notes record the residual of each alternative.
    """
    fam, name = which.split(".")
    fn, deg_args, gen_args = IDENTITIES[name]
    kwargs = dict(deg_args if degenerate else gen_args)
    kwargs.update(args)
    if name == "scaling" and kwargs.get("k") == 0:
        from .errors import ZeroScale
        raise ZeroScale("scaling factor k must be nonzero")
    f = f if f is not None else Gaussian(2.0, 0.5)
    s = np.asarray(s_grid, dtype=float)
    lhs, forms = fn(fam, f, A, s, cfg, **kwargs)
    residuals = {k: np.abs(lhs - v) for k, v in forms.items()}
    maxes = {k: float(np.max(v)) for k, v in residuals.items()}
    holding = sorted(k for k, v in maxes.items() if v <= tol)
    notes = {"conventions": maxes, "shipping": SHIPPING, "holding": holding,
             "losing": sorted(set(maxes) - set(holding)),
             "arguments": {k: (repr(v) if not isinstance(v, FunctionSpec) else v.to_dict())
                           for k, v in kwargs.items()}}
    label = f"identity_{which}" + ("_degenerate" if degenerate else "")
    return _report(label, A, [f], residuals[SHIPPING], tol, cfg=cfg, grid=s, notes=notes)


def adjudicate(names=("cct.cos_product", "cct.sin_product", "cst.cos_product", "cst.sin_product",
                      "cct.translation", "cct.convolution", "cst.convolution"),
               functions=None, params=PARITY_PARAMS, cfg=LIGHT_QUADRATURE, tol=1e-4):
    """Which conventions hold, per identity, across functions and parameter sets."""
    functions = functions or corpus(n_random=0)
    out = {}
    for which in names:
        winners = None
        for f in functions:
            for A in params:
                rep = check_identity(which, f, A, cfg=cfg, tol=tol)
                won = set(rep.notes["holding"])
                winners = won if winners is None else winners & won
        out[which] = sorted(winners)
    return out


# ---------------------------------------------------------------- Boehmian checks

def _boehmian_den(A, x=0.0):
    return DeltaSeqSpec("triangular", x, A)


def check_boehmian_quotient(A=DEFAULT_PARAMS, kind="star", depth=4, tol=1e-6,
                            cfg=bm.DEFAULT_BOEHMIAN_QUADRATURE):
    f = Gaussian(1.0, 0.0) if kind == "star" else GaussianMoment(1.0)
    B = bm.embed(f, _boehmian_den(A), kind, depth, cfg)
    r = bm.quotient_check(B, cfg, tol)
    return _report(f"boehmian_quotient_{kind}", A, [f], r.details["residuals"], tol, cfg=cfg,
                   grid=bm.T_GRID, grid_name="t", notes={"pairs": r.details["pairs"], "depth": depth})


def check_boehmian_reflexivity(A=DEFAULT_PARAMS, depth=4, cfg=bm.DEFAULT_BOEHMIAN_QUADRATURE):
    B = bm.embed(Gaussian(1.0, 0.0), _boehmian_den(A), "star", depth, cfg)
    res = bm.equivalence_residuals(B, B, cfg)
    return _report("boehmian_reflexivity", A, [Gaussian(1.0, 0.0)], res, 0.0, cfg=cfg,
                   notes={"depth": depth})


def check_boehmian_consistency(A=DEFAULT_PARAMS, depth=32, s_grid=np.linspace(-2, 2, 33),
                               cfg=bm.DEFAULT_BOEHMIAN_QUADRATURE, tol=1e-3):
    """Ratio field of embed(f) against sqrt(2 pi i b) exp(-(i/2)(d/b)s^2) C(f)."""
    f = Gaussian(1.0, 0.0)
    s = np.asarray(s_grid, dtype=float)
    TB = bm.transform(bm.embed(f, _boehmian_den(A), "star", depth, cfg), "cct", s, cfg)
    target = convolution_prefactor(A, s) * transform_values(f, A, "cct", s, cfg)
    return _report("boehmian_consistency", A, [f], np.abs(TB.ratio(depth) - target), tol,
                   cfg=cfg, grid=s, notes={"depth": depth})


def check_boehmian_convolution(A=DEFAULT_PARAMS, depth=32, s_grid=np.linspace(-2, 2, 33),
                               cfg=bm.DEFAULT_BOEHMIAN_QUADRATURE, tol=1e-3):
    """Ratio field of embed(f) ⋆ embed(g) against the product of the two ratio fields."""
    f, g = Gaussian(1.0, 0.0), Gaussian(2.0, 0.0)
    s = np.asarray(s_grid, dtype=float)
    B1 = bm.embed(f, _boehmian_den(A), "star", depth, cfg)
    B2 = bm.embed(g, _boehmian_den(A), "star", depth, cfg)
    r1 = bm.transform(B1, "cct", s, cfg).ratio(depth)
    r2 = bm.transform(B2, "cct", s, cfg).ratio(depth)
    T12 = bm.transform(bm.convolve(B1, B2), "cct", s, cfg)
    r12 = T12.ratio(depth)
    res = np.abs(r12 - r1 * r2)
    d = B1.delta(depth)
    cd = transform_values(d, A, "cct", s, cfg)
    defect = np.abs(T12.denominators[depth].values / (convolution_prefactor(A, s) * cd * cd) - 1)
    return _report("boehmian_convolution", A, [f, g], res, tol, cfg=cfg, grid=s,
                   notes={"depth": depth,
                          "relative_max": float(np.max(res / np.abs(r1 * r2))),
                          "denominator_defect_max": float(np.max(defect))})


# ---------------------------------------------------------------- suites

def suite_conv_theorems(A=DEFAULT_PARAMS):
    g0, g1, m = Gaussian(1.0, 0.0), Gaussian(2.0, 0.5), GaussianMoment(1.0)
    reps = [check_cc_convolution(g0, g0, A, compare_modes=True),
            check_cs_convolution(m, g0, A, compare_modes=True)]
    fs = corpus(n_random=3)
    reps += [check_theta_decomposition(f, g, A) for f in fs for g in fs]
    for kind in ("star", "theta", "otimes"):
        reps.append(check_norm_bounds(kind, g0, g1, A))
    reps.append(check_norm_bounds("classic", g0, g0, A))
    return reps


def suite_identities(A=DEFAULT_PARAMS):
    reps = []
    for which in IDENTITY_NAMES:
        reps.append(check_identity(which, A=A, degenerate=True, tol=1e-12))
        reps.append(check_identity(which, A=A))
    return reps


def suite_semigroup(A=DEFAULT_PARAMS):
    f, g, h = gaussian_triple()
    return [check_semigroup(kind, f, g, h, A) for kind in ("star", "theta", "otimes")]


def suite_delta(A=DEFAULT_PARAMS):
    fourier = preset("fourier")
    den = DeltaSeqSpec("triangular", 0.0, fourier)
    return [
        check_delta_axioms(DeltaSeqSpec("triangular", 0.0, A), ns=range(1, 65)),
        check_delta_axioms(DeltaSeqSpec("triangular", 0.5, A)),
        check_delta_closure(DeltaSeqSpec("triangular", 0.0, fourier), den),
        check_approx_identity(Gaussian(1.0, 0.0), den, "star"),
        check_approx_identity(GaussianMoment(1.0), den, "theta"),
        check_delta_transform(DeltaSeqSpec("triangular", 0.0, A), A),
    ]


def suite_roundtrip(A=DEFAULT_PARAMS):
    g = Gaussian(1.0, 0.0)
    reps = [check_roundtrip(g, preset("fourier")),
            check_roundtrip(g, A, cfg=QuadratureConfig(16.0, 8192)),
            check_fourier_crosscheck(g), check_fourier_crosscheck(Gaussian(2.0, 0.5))]
    for P in PARITY_PARAMS:
        reps += [check_parity_split(f, P) for f in corpus()]
    return reps


def suite_boehmian(A=DEFAULT_PARAMS):
    return [check_boehmian_quotient(A, "star"), check_boehmian_quotient(A, "theta"),
            check_boehmian_reflexivity(A), check_boehmian_consistency(A),
            check_boehmian_convolution(A)]


SUITES = {
    "conv-theorems": suite_conv_theorems,
    "identities": suite_identities,
    "semigroup": suite_semigroup,
    "delta": suite_delta,
    "roundtrip": suite_roundtrip,
    "boehmian": suite_boehmian,
}


def run_suite(name: str, A=DEFAULT_PARAMS, tol_override: float | None = None) -> list[PropertyReport]:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    reports = [r for n in names for r in SUITES[n](A)]
    if tol_override is not None:
        for r in reports:
            r.tolerance = tol_override
            r.passed = r.max_residual <= tol_override and all(r.conditions.values())
    return reports


def suite_document(name: str, reports: list[PropertyReport]) -> dict:
    return {"suite": name, "pass": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports]}
