import json

import numpy as np
import pytest

from canonxform import functions as fn
from canonxform import verify as vf
from canonxform.errors import ZeroScale
from canonxform.params import CanonicalParams, preset

A = vf.DEFAULT_PARAMS
G = fn.gaussian()


def test_report_json_shape():
    rep = vf.check_parity_split(G, A)
    d = json.loads(json.dumps(rep.to_dict()))
    for key in ("name", "params", "inputs", "abs_mode", "grid_meta", "residuals", "max_residual",
                "tolerance", "pass"):
        assert key in d
    assert d["pass"] is True and d["params"] == [1, 2, 1, 3]
    assert d["grid_meta"]["quadrature"] == {"trunc": 12.0, "points": 2048, "tol": 1e-8}


def test_corpus_is_fixed():
    a, b = vf.corpus(), vf.corpus()
    assert len(a) == 25
    t = np.linspace(-3, 3, 13)
    assert all(np.array_equal(f(t), g(t)) for f, g in zip(a, b))


def test_convolution_theorems_with_zero():
    for check in (vf.check_cc_convolution, vf.check_cs_convolution):
        rep = check(fn.zero(), G, cfg=vf.LIGHT_QUADRATURE)
        assert rep.max_residual <= 1e-14


def test_modes_agree_for_even_inputs():
    rep = vf.check_cc_convolution(G, fn.gaussian(2, 0), cfg=vf.LIGHT_QUADRATURE, compare_modes=True)
    assert rep.notes["max_residual_mirrored"] == rep.max_residual


def test_sine_theorem_with_even_f():
    rep = vf.check_cs_convolution(G, G, preset("fourier"), cfg=vf.LIGHT_QUADRATURE)
    assert rep.max_residual <= 1e-12


def test_sine_theorem_generic():
    rep = vf.check_cs_convolution(fn.gaussian_moment(1), fn.gaussian(2, 0.5), A,
                                  cfg=vf.LIGHT_QUADRATURE)
    assert rep.passed


def test_roundtrip_special_cases():
    assert vf.check_roundtrip(fn.zero(), preset("fourier"), cfg=vf.LIGHT_QUADRATURE).max_residual == 0
    rep = vf.check_roundtrip(fn.gaussian(1, 0.5), preset("identity"))
    assert rep.max_residual <= 1e-15
    rep = vf.check_roundtrip(G, CanonicalParams(2, 0, 1, 0.5))
    assert rep.max_residual <= 1e-15


def test_fft_oracle_matches_closed_form():
    s, vals = vf.fourier_oracle(fn.gaussian(np.sqrt(2), 0))
    keep = np.abs(s) < 4
    want = np.exp(-1j * np.pi / 4) * np.exp(-s[keep] ** 2 / 2)
    assert np.max(np.abs(vals[keep] - want)) < 1e-12


def test_semigroup_trivial_cases():
    f, g, h = vf.gaussian_triple()
    for kind in ("star", "theta", "otimes"):
        rep = vf.check_semigroup(kind, f, fn.zero(), h)
        assert rep.max_residual == 0 and rep.notes["associativity_max"] == 0
    rep = vf.check_semigroup("theta", f, g, h)
    assert rep.max_residual <= 1e-15
    assert vf.check_semigroup("classic", f, g, h).passed


def test_semigroup_associativity_is_a_condition():
    f, g, h = fn.gaussian_moment(1), fn.gaussian(1, 0.5), fn.gaussian(0.75, 0)
    rep = vf.check_semigroup("star", f, g, h)
    assert rep.max_residual <= 1e-8
    assert not rep.conditions["associativity"] and not rep.passed


@pytest.mark.parametrize("which", vf.IDENTITY_NAMES)
def test_identity_degenerate(which):
    rep = vf.check_identity(which, degenerate=True, tol=1e-12)
    assert rep.passed, rep.notes


@pytest.mark.parametrize("which", vf.IDENTITY_NAMES)
def test_identity_generic(which):
    rep = vf.check_identity(which)
    assert rep.passed, rep.notes
    assert rep.notes["shipping"] == "derived"
    assert "derived" in rep.notes["holding"]


def test_scaling_needs_absolute_value_for_negative_k():
    rep = vf.check_identity("cct.scaling", k=-2.0)
    assert rep.passed and rep.notes["losing"] == ["statement"]


def test_scaling_rejects_zero():
    with pytest.raises(ZeroScale):
        vf.check_identity("cct.scaling", k=0.0)


def test_cos_product_adjudication_for_cosine_transform():
    # the printed statement holds; the signs in its derivation do not
    rep = vf.check_identity("cct.cos_product", G, A)
    conv = rep.notes["conventions"]
    assert conv["statement"] <= 1e-4 and conv["proof"] > 1e-1
    assert rep.notes["losing"] == ["proof"]


def test_sine_transform_product_rules_lose_both_printed_forms():
    for which in ("cst.cos_product", "cst.sin_product"):
        rep = vf.check_identity(which)
        assert rep.notes["losing"] == ["proof", "statement"]
        assert rep.passed


def test_other_losing_forms():
    assert vf.check_identity("cct.translation").notes["losing"] == ["statement"]
    assert vf.check_identity("cct.convolution").notes["losing"] == ["statement"]
    assert vf.check_identity("cst.convolution").notes["losing"] == ["statement"]


def test_adjudication_is_stable_across_corpus_and_params():
    out = vf.adjudicate(functions=[G, fn.gaussian(2, 0.5), fn.gaussian_moment(1)])
    assert out["cct.cos_product"] == ["derived", "statement"]
    assert out["cct.sin_product"] == ["derived", "statement"]
    assert out["cst.cos_product"] == ["derived"]
    assert out["cst.sin_product"] == ["derived"]
    assert out["cct.translation"] == ["derived"]


def test_run_suite_tolerance_override_and_unknown():
    reps = vf.run_suite("semigroup", tol_override=1e-30)
    assert not all(r.passed for r in reps)
    assert all(r.tolerance == 1e-30 for r in reps)
    with pytest.raises(ValueError):
        vf.run_suite("everything")


def test_suite_document():
    doc = vf.suite_document("semigroup", vf.run_suite("semigroup"))
    assert doc["pass"] is True and len(doc["reports"]) == 3
    json.dumps(doc)


def test_non_finite_residual_is_an_error():
    with pytest.raises(ArithmeticError):
        vf._report("x", A, [], [float("nan")], 1.0)
