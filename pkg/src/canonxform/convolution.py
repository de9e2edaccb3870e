"""The four convolution products.

With the hat g^(u) = exp((i/2)(a/b) u^2) g(u) and p = a/b:

    (f * g)(t) = int f(x) g(t - x) dx
    (f ⋆ g)(t) = exp(-(i/2) p t^2)/2 * int f^(x) [g^(x + t) + g^(x - t)] dx
    (f Θ g)(t) = exp(-(i/2) p t^2)/2 * int f^(x) [g^(x - t) - g^(x + t)] dx
    (f ⊗ g)(t) = exp(-(i/2) p t^2)   * int f^(x) g^(x + t) dx

so Θ = ⋆ - ⊗.  In mirrored mode the x - t term reads
exp((i/2) p (x - t)^2) g(|x - t|).

Convolutions are lazy FunctionSpec nodes that integrate on their own
QuadratureConfig when evaluated.  When every evaluation point is a lattice
point of that config, g is tabulated once on the lattice and the integral
becomes a gather, which keeps nested convolutions at O(N^2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BZero
from .functions import (FunctionSpec, QuadratureConfig, Zero, cached, check_oscillation,
                        check_spike, chirp, current_quadrature, map_chunks, node_values)
from .params import CanonicalParams

OPS = ("classic", "star", "theta", "otimes")
MODES = ("signed", "mirrored")
_CHUNK = 1 << 21


@dataclass(frozen=True, eq=False)
class Convolution(FunctionSpec):
    op: str
    f: FunctionSpec
    g: FunctionSpec
    params: CanonicalParams | None = None
    mode: str = "signed"
    cfg: QuadratureConfig | None = None
    kind = "convolution"

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown convolution {self.op!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown abs mode {self.mode!r}")
        if self.op != "classic":
            if self.params is None:
                raise ValueError(f"{self.op} needs canonical parameters")
            if self.params.b_zero:
                raise BZero(f"{self.op} convolution needs b != 0")
        if self.cfg is None:
            object.__setattr__(self, "cfg", current_quadrature())

    def children(self):
        return (self.f, self.g)

    @property
    def rate(self) -> float:
        return 0.0 if self.op == "classic" else self.params.chirp_rate

    # hatted g at arbitrary points u
    def _ghat(self, u: np.ndarray, mirror: bool = False) -> np.ndarray:
        arg = np.abs(u) if mirror else u
        return chirp(self.rate, u) * self.g._eval(arg.reshape(-1)).reshape(u.shape)

    def _ghat_lattice(self, lo: int, hi: int, mirror: bool) -> np.ndarray:
        h = self.cfg.step
        return cached(self.g, ("lattice", h, lo, hi, mirror, self.rate),
                      lambda: self._ghat(np.arange(lo, hi + 1) * h, mirror))

    def _eval(self, t: np.ndarray) -> np.ndarray:
        if t.size == 0:
            return np.zeros(0, dtype=complex)
        cfg = self.cfg
        if self.op != "classic":
            check_oscillation(cfg, self.params)
        check_spike(cfg, self.f, self.g)
        if isinstance(self.g, Zero) or isinstance(self.f, Zero):
            return np.zeros(t.shape, dtype=complex)
        x = cfg.nodes()
        half = cfg.points // 2
        wf = cfg.weights() * chirp(self.rate, x) * node_values(self.f, cfg)
        m = np.rint(t / cfg.step)
        on_lattice = np.all(np.abs(t / cfg.step - m) < 1e-9)
        k = np.arange(cfg.points + 1) - half
        rows = max(1, _CHUNK // x.size)
        need_minus = self.op != "otimes"
        need_plus = self.op != "classic"
        mirror = self.mode == "mirrored" and self.op != "classic"

        if on_lattice:
            m = m.astype(np.int64)
            reach = half + int(np.max(np.abs(m)))
            plus_tab = self._ghat_lattice(-reach, reach, False) if need_plus else None
            minus_tab = self._ghat_lattice(-reach, reach, mirror) if need_minus else None

        def block(lo):
            tt = t[lo:lo + rows]
            if on_lattice:
                mm = m[lo:lo + rows, None]
                gp = plus_tab[k[None, :] + mm + reach] if need_plus else None
                if self.op == "classic":
                    gm = minus_tab[mm - k[None, :] + reach]
                elif need_minus:
                    gm = minus_tab[k[None, :] - mm + reach]
            else:
                if need_plus:
                    gp = self._ghat(x[None, :] + tt[:, None])
                if self.op == "classic":
                    gm = self._ghat(tt[:, None] - x[None, :])
                elif need_minus:
                    gm = self._ghat(x[None, :] - tt[:, None], mirror)
            if self.op == "classic":
                return (gm * wf).sum(axis=1)
            if self.op == "star":
                return 0.5 * ((gp + gm) * wf).sum(axis=1)
            if self.op == "theta":
                return 0.5 * ((gm - gp) * wf).sum(axis=1)
            return (gp * wf).sum(axis=1)

        acc = np.concatenate(map_chunks(block, range(0, t.size, rows)))
        if self.op == "classic":
            return acc
        return chirp(-self.rate, t) * acc

    def to_dict(self):
        d = {"kind": self.kind, "op": self.op, "mode": self.mode,
             "quadrature": self.cfg.to_dict(), "f": self.f.to_dict(), "g": self.g.to_dict()}
        if self.params is not None:
            d["params"] = self.params.as_list()
        return d

    @classmethod
    def from_dict(cls, d, decode):
        params = CanonicalParams(*d["params"]) if d.get("params") is not None else None
        cfg = QuadratureConfig.from_dict(d["quadrature"]) if "quadrature" in d else None
        return cls(d["op"], decode(d["f"]), decode(d["g"]), params,
                   d.get("mode", "signed"), cfg)


def conv(op: str, f, g, A=None, mode="signed", cfg=None) -> Convolution:
    return Convolution(op, f, g, A, mode, cfg)


def conv_classic(f, g, cfg=None) -> Convolution:
    return Convolution("classic", f, g, None, "signed", cfg)


def conv_star(f, g, A, mode="signed", cfg=None) -> Convolution:
    return Convolution("star", f, g, A, mode, cfg)


def conv_theta(f, g, A, mode="signed", cfg=None) -> Convolution:
    return Convolution("theta", f, g, A, mode, cfg)


def conv_otimes(f, g, A, cfg=None) -> Convolution:
    return Convolution("otimes", f, g, A, "signed", cfg)
