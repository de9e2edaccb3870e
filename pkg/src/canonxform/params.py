"""The unimodular parameter quadruple A = (a, b, c, d)."""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import DegenerateB, NotUnimodular

DET_TOL = 1e-12
B_MIN = 1e-9


@dataclass(frozen=True)
class CanonicalParams:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not math.isfinite(v):
                raise NotUnimodular(f"{name}={v} is not finite")
            object.__setattr__(self, name, float(v))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_TOL:
            raise NotUnimodular(f"ad - bc = {det!r}, expected 1")
        if self.b != 0.0 and abs(self.b) < B_MIN:
            raise DegenerateB(f"|b| = {abs(self.b):.3e} is below {B_MIN}")

    @property
    def b_zero(self) -> bool:
        return self.b == 0.0

    @property
    def chirp_rate(self) -> float:
        """a/b, the rate of the hat chirp."""
        return self.a / self.b

    @property
    def out_rate(self) -> float:
        """d/b, the rate of the output chirp."""
        return self.d / self.b

    def as_list(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]

    def __iter__(self):
        return iter(self.as_list())


def validate(a, b, c, d) -> CanonicalParams:
    return CanonicalParams(a, b, c, d)


def inverse(A: CanonicalParams) -> CanonicalParams:
    return CanonicalParams(A.d, -A.b, -A.c, A.a)


def _dot(x1, y1, x2, y2) -> float:
    # cancellation down to rounding level is an exact zero (e.g. A @ inverse(A))
    p, q = x1 * y1, x2 * y2
    v = p + q
    return 0.0 if abs(v) <= 8 * sys.float_info.epsilon * (abs(p) + abs(q)) else v


def compose(A1: CanonicalParams, A2: CanonicalParams) -> CanonicalParams:
    """Matrix product A1 @ A2."""
    return CanonicalParams(
        _dot(A1.a, A2.a, A1.b, A2.c),
        _dot(A1.a, A2.b, A1.b, A2.d),
        _dot(A1.c, A2.a, A1.d, A2.c),
        _dot(A1.c, A2.b, A1.d, A2.d),
    )


def preset(kind: str, z: float | None = None) -> CanonicalParams:
    if kind == "fourier":
        return CanonicalParams(0.0, 1.0, -1.0, 0.0)
    if kind == "identity":
        return CanonicalParams(1.0, 0.0, 0.0, 1.0)
    if kind == "fresnel":
        if z is None:
            raise ValueError("fresnel preset needs z")
        return CanonicalParams(1.0, z, 0.0, 1.0)
    raise ValueError(f"unknown preset {kind!r}")


def parse(text) -> CanonicalParams:
    """Accept 'a,b,c,d', a preset name, 'fresnel:z', or a 4-sequence."""
    if isinstance(text, str):
        t = text.strip()
        if t in ("fourier", "identity"):
            return preset(t)
        if t.startswith("fresnel:"):
            return preset("fresnel", float(t.split(":", 1)[1]))
        parts = [p for p in t.strip("[]").split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma separated numbers, got {text!r}")
        return CanonicalParams(*(float(p) for p in parts))
    vals = list(text)
    if len(vals) != 4:
        raise ValueError("expected [a, b, c, d]")
    return CanonicalParams(*(float(v) for v in vals))
