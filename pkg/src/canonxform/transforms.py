"""Linear canonical transform and its cosine / sine halves.

For b != 0

    L_A f(s) = K(s) * int exp(-i s t / b) exp((i/2)(a/b) t^2) f(t) dt,
    K(s)     = exp((i/2)(d/b) s^2) / sqrt(2 pi i b),

and the cosine (sine) transform replaces exp(-i s t / b) by cos (sin).
For b == 0 the LCT is the pointwise map sqrt(d) exp((i/2) c d s^2) f(d s).
"""
from __future__ import annotations

import numpy as np

from .errors import BZero, EmptyGrid, NegativeDUnderRoot
from .functions import (FunctionSpec, QuadratureConfig, SampledField, check_oscillation,
                        check_spike, chirp, current_quadrature, map_chunks, node_values)
from .params import CanonicalParams, inverse

KINDS = ("lct", "cct", "cst")
_CHUNK = 1 << 21


def sqrt_2pi_ib(b: float) -> complex:
    """Principal root of 2 pi i b; every prefactor in the package goes through here."""
    return complex(np.sqrt(complex(0.0, 2.0 * np.pi * b)))


def kernel_prefactor(A: CanonicalParams, s) -> np.ndarray:
    """K(s) = exp((i/2)(d/b) s^2) / sqrt(2 pi i b)."""
    return chirp(A.out_rate, s) / sqrt_2pi_ib(A.b)


def convolution_prefactor(A: CanonicalParams, s) -> np.ndarray:
    """sqrt(2 pi i b) exp(-(i/2)(d/b) s^2), the factor carried by every convolution theorem."""
    return sqrt_2pi_ib(A.b) * chirp(-A.out_rate, s)


def _b_zero_lct(f: FunctionSpec, A: CanonicalParams, s: np.ndarray) -> np.ndarray:
    if A.d < 0:
        raise NegativeDUnderRoot(f"b = 0 branch needs sqrt(d) with d = {A.d} < 0")
    return np.sqrt(A.d) * chirp(A.c * A.d, s) * f._eval(A.d * s)


def transform_values(f: FunctionSpec, A: CanonicalParams, kind: str, s,
                     cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Transform of f at arbitrary points s (any order)."""
    if kind not in KINDS:
        raise ValueError(f"unknown transform kind {kind!r}")
    cfg = cfg or current_quadrature()
    s = np.asarray(s, dtype=float).reshape(-1)
    if A.b_zero:
        if kind != "lct":
            raise BZero(f"{kind} is undefined for b = 0")
        return _b_zero_lct(f, A, s)
    if s.size == 0:
        return np.zeros(0, dtype=complex)
    check_oscillation(cfg, A, float(np.max(np.abs(s))))
    check_spike(cfg, f)
    x = cfg.nodes()
    wf = cfg.weights() * chirp(A.chirp_rate, x) * node_values(f, cfg)
    rows = max(1, _CHUNK // x.size)

    def block(lo):
        phase = np.outer(s[lo:lo + rows] / A.b, x)
        if kind == "cct":
            k = np.cos(phase)
        elif kind == "cst":
            k = np.sin(phase)
        else:
            k = np.exp(-1j * phase)
        return (k * wf).sum(axis=1)

    acc = np.concatenate(map_chunks(block, range(0, s.size, rows)))
    return kernel_prefactor(A, s) * acc


def lct_point(f, A, s, cfg=None) -> complex:
    return complex(transform_values(f, A, "lct", [s], cfg)[0])


def cct_point(f, A, s, cfg=None) -> complex:
    return complex(transform_values(f, A, "cct", [s], cfg)[0])


def cst_point(f, A, s, cfg=None) -> complex:
    return complex(transform_values(f, A, "cst", [s], cfg)[0])


def transform_grid(f: FunctionSpec, A: CanonicalParams, kind: str, s_grid,
                   cfg: QuadratureConfig | None = None) -> SampledField:
    s = np.asarray(s_grid, dtype=float)
    if s.size == 0:
        raise EmptyGrid("empty s grid")
    return SampledField(s, transform_values(f, A, kind, s, cfg))


def inverse_lct(F: FunctionSpec, A: CanonicalParams, t_grid,
                cfg: QuadratureConfig | None = None) -> SampledField:
    """LCT with parameters A^-1 = (d, -b, -c, a)."""
    return transform_grid(F, inverse(A), "lct", t_grid, cfg)
