"""Command line front end: transform, convolve, delta, boehmian, verify.

Exit codes: 0 success, 1 a check failed, 2 usage or runtime error.
Outputs are written atomically (temp file in the target directory, then rename).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import boehmian as bm
from .convolution import MODES, OPS, Convolution
from .delta import DeltaSeqSpec, check_axioms, dyadic
from .errors import CanonXformError, NotUnimodular, UsageError
from .functions import QuadratureConfig, SampledField, from_dict
from .params import CanonicalParams, parse as parse_params
from .transforms import KINDS, transform_grid
from .verify import SUITES, run_suite, suite_document

COMMANDS = ("transform", "convolve", "delta", "boehmian", "verify")
DEFAULT_QUADRATURE = {
    "transform": (12.0, 8192),
    "convolve": (12.0, 2048),
    "delta": (1.0, 1024),
    "boehmian": (bm.DEFAULT_BOEHMIAN_QUADRATURE.half_width, bm.DEFAULT_BOEHMIAN_QUADRATURE.points),
    "verify": (12.0, 8192),
}


@dataclass
class RunConfig:
    command: str
    params: CanonicalParams | None
    quadrature: QuadratureConfig
    paths: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str, flag: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"{flag}: expected lo:hi:n, got {text!r}") from None
    if n < 2:
        raise UsageError(f"{flag}: need n >= 2")
    if not lo < hi:
        raise UsageError(f"{flag}: lo >= hi")
    return np.linspace(lo, hi, n)


def _params(text: str) -> CanonicalParams:
    try:
        return parse_params(text)
    except NotUnimodular as e:
        raise UsageError(f"--params: NotUnimodular: {e}") from None
    except (ValueError, CanonXformError) as e:
        raise UsageError(f"--params: {e}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--trunc", type=float, help="half width T of the integration window")
    common.add_argument("--points", type=int, help="number of trapezoid panels N")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--params", default="1,2,1,3", help="a,b,c,d or a preset name")

    p = _Parser(prog="canonxform", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("transform", parents=[common])
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--sgrid", required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("convolve", parents=[common])
    s.add_argument("--op", choices=OPS, required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--tgrid", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--abs-mode", choices=MODES, default="signed")

    s = sub.add_parser("delta", parents=[common])
    s.add_argument("--family", choices=["triangular"], default="triangular")
    s.add_argument("--x", type=float, default=0.0)
    s.add_argument("--nmax", type=int, default=64)
    s.add_argument("--report", required=True)

    s = sub.add_parser("boehmian", parents=[common])
    s.add_argument("--check", choices=["quotient", "equivalence", "limit", "delta-lim"], required=True)
    s.add_argument("--spec", required=True)
    s.add_argument("--spec2")
    s.add_argument("--depth", type=int, default=16)
    s.add_argument("--sgrid", default="-2:2:33")
    s.add_argument("--report", required=True)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--suite", choices=[*SUITES, "all"], required=True)
    s.add_argument("--report", required=True)
    s.add_argument("--metadata", action="store_true", help="append a timing/version block")
    return p


_VALUE_FLAGS = ("--sgrid", "--tgrid", "--params", "--x")


def _glue(argv: list[str]) -> list[str]:
    # values such as -4:4:256 would otherwise be read as options
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def parse_args(argv: list[str]) -> RunConfig:
    ns = _build_parser().parse_args(_glue(list(argv)))
    A = _params(ns.params)
    T, N = DEFAULT_QUADRATURE[ns.command]
    try:
        q = QuadratureConfig(ns.trunc if ns.trunc is not None else T,
                             ns.points if ns.points is not None else N,
                             1e-8)
    except ValueError as e:
        raise UsageError(f"--trunc/--points: {e}") from None
    if ns.tol is not None and not ns.tol > 0:
        raise UsageError("--tol must be positive")
    cfg = RunConfig(ns.command, A, q, options={"tol": ns.tol})
    if ns.command == "transform":
        cfg.paths = {"input": ns.input, "out": ns.out}
        cfg.grids = {"s": parse_grid(ns.sgrid, "--sgrid")}
        cfg.options["kind"] = ns.kind
    elif ns.command == "convolve":
        cfg.paths = {"f": ns.f, "g": ns.g, "out": ns.out}
        cfg.grids = {"t": parse_grid(ns.tgrid, "--tgrid")}
        cfg.options.update(op=ns.op, mode=ns.abs_mode)
    elif ns.command == "delta":
        if ns.nmax < 4:
            raise UsageError("--nmax must be >= 4")
        cfg.paths = {"report": ns.report}
        cfg.options.update(family=ns.family, x=ns.x, nmax=ns.nmax)
    elif ns.command == "boehmian":
        if ns.depth < 2:
            raise UsageError("--depth must be >= 2")
        if ns.check == "equivalence" and not ns.spec2:
            raise UsageError("--check equivalence needs --spec2")
        cfg.paths = {"spec": ns.spec, "spec2": ns.spec2, "report": ns.report}
        cfg.grids = {"s": parse_grid(ns.sgrid, "--sgrid")}
        cfg.options.update(check=ns.check, depth=ns.depth)
    else:
        cfg.paths = {"report": ns.report}
        cfg.options.update(suite=ns.suite, metadata=ns.metadata)
    for k, v in cfg.paths.items():
        if v is not None and not v:
            raise UsageError(f"empty path for {k}")
    return cfg


# ---------------------------------------------------------------- io

def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------- commands

def _run_transform(cfg: RunConfig) -> int:
    f = from_dict(_load(cfg.paths["input"]))
    field_ = transform_grid(f, cfg.params, cfg.options["kind"], cfg.grids["s"], cfg.quadrature)
    write_atomic(cfg.paths["out"], field_.to_csv("s"))
    return 0


def _run_convolve(cfg: RunConfig) -> int:
    f = from_dict(_load(cfg.paths["f"]))
    g = from_dict(_load(cfg.paths["g"]))
    op = cfg.options["op"]
    c = Convolution(op, f, g, None if op == "classic" else cfg.params, cfg.options["mode"],
                    cfg.quadrature)
    t = cfg.grids["t"]
    write_atomic(cfg.paths["out"], SampledField(t, c._eval(t)).to_csv("t"))
    return 0


def _run_delta(cfg: RunConfig) -> int:
    spec = DeltaSeqSpec(cfg.options["family"], cfg.options["x"], cfg.params)
    rep = check_axioms(spec, cfg.options["nmax"], cfg.quadrature, cfg.options["tol"] or 1e-8)
    write_atomic(cfg.paths["report"], _json(rep.to_dict()))
    return 0 if rep.passed else 1


def _load_boehmian(path, cfg: RunConfig, depth):
    return bm.from_dict(_load(path), cfg.params, cfg.quadrature, depth)


def _run_boehmian(cfg: RunConfig) -> int:
    depth = cfg.options["depth"]
    check = cfg.options["check"]
    tol = cfg.options["tol"]
    B = _load_boehmian(cfg.paths["spec"], cfg, depth)
    doc = {"check": check, "depth": depth, "spec": B.to_dict()}
    if check == "quotient":
        r = bm.quotient_check(B, cfg.quadrature, tol or 1e-6)
        doc.update(r.to_dict())
        ok = r.passed
    elif check == "equivalence":
        B2 = _load_boehmian(cfg.paths["spec2"], cfg, depth)
        res = bm.equivalence_residuals(B, B2, cfg.quadrature)
        tol = tol or 1e-4
        ok = max(res) <= tol
        doc.update({"residuals": res, "max_residual": max(res), "tolerance": tol, "pass": ok})
    elif check == "limit":
        which = "cct" if B.kind == "star" else "cst"
        schedule = dyadic(depth, 4) or [depth]
        TB = bm.transform(B, which, cfg.grids["s"], cfg.quadrature, schedule)
        deepest, rep = bm.limit_estimate(TB, schedule)
        doc.update(rep.to_dict())
        doc["deepest"] = {"s": deepest.grid.tolist(), "re": deepest.values.real.tolist(),
                          "im": deepest.values.imag.tolist()}
        ok = rep.monotone
    else:
        seq = _sequence(cfg, depth) if cfg.paths["spec2"] else _default_sequence(B)
        r = bm.delta_lim_check(seq, B, cfg.quadrature, tol or 1e-8)
        doc.update(r.to_dict())
        ok = r.passed
    write_atomic(cfg.paths["report"], _json(doc))
    return 0 if ok else 1


def _sequence(cfg, depth):
    d = _load(cfg.paths["spec2"])
    items = d["sequence"] if "sequence" in d else [d]
    return [bm.from_dict(x, cfg.params, cfg.quadrature, depth) for x in items]


def _default_sequence(B, count=8):
    """B_k = (1 + 1/k) B, a sequence that converges to B."""
    return [bm.scale(B, 1.0 + 1.0 / k) for k in range(1, count + 1)]


def _run_verify(cfg: RunConfig) -> int:
    start = time.perf_counter()
    name = cfg.options["suite"]
    reports = run_suite(name, cfg.params, cfg.options["tol"])
    doc = suite_document(name, reports)
    if cfg.options.get("metadata"):
        doc["metadata"] = {"version": __version__, "elapsed_s": time.perf_counter() - start,
                           "threads": os.environ.get("CANON_XFORM_THREADS", "1")}
    write_atomic(cfg.paths["report"], _json(doc))
    return 0 if doc["pass"] else 1


_DISPATCH = {"transform": _run_transform, "convolve": _run_convolve, "delta": _run_delta,
             "boehmian": _run_boehmian, "verify": _run_verify}


def _fail(exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return 2


def run(config: RunConfig) -> int:
    try:
        return _DISPATCH[config.command](config)
    except (CanonXformError, OSError, ValueError, KeyError, ArithmeticError) as exc:
        return _fail(exc)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        return _fail(exc)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
