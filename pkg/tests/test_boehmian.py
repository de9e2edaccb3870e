import functools

import numpy as np
import pytest

from canonxform import boehmian as bm
from canonxform import functions as fn
from canonxform.convolution import conv_star
from canonxform.delta import DeltaSeqSpec
from canonxform.errors import DenominatorNearZero, KindMismatch
from canonxform.params import CanonicalParams, preset
from canonxform.verify import check_boehmian_consistency, check_boehmian_quotient

A = CanonicalParams(1, 2, 1, 3)
DEN = DeltaSeqSpec("triangular", 0.0, A)
DEN_X = DeltaSeqSpec("triangular", 0.5, A)
S = np.linspace(-2, 2, 9)
G = fn.gaussian()


def test_embed_zero():
    B = bm.embed(fn.zero(), DEN, "star", 4)
    assert all(not np.any(B.term(n)(S)) for n in range(1, 5))


def test_embed_validation():
    with pytest.raises(ValueError):
        bm.embed(G, DEN, "star", 1)
    with pytest.raises(ValueError):
        bm.Boehmian(bm.Fixed(G), DEN, "otimes", 4)


def test_quotient_embedded_star_and_theta():
    assert check_boehmian_quotient(A, "star").passed
    assert check_boehmian_quotient(A, "theta").passed


def test_quotient_broken_sequence_fails():
    B = bm.Boehmian(bm.IndexWeighted(G, float, "index_scaled"), DEN, "star", 4)
    r = bm.quotient_check(B)
    assert not r.passed and r.max_residual > 0.1


def test_quotient_depth_two_checks_one_pair():
    r = bm.quotient_check(bm.embed(G, DEN, "star", 2))
    assert r.details["pairs"] == [[1, 2]]


def test_equivalence_examples():
    B = bm.embed(G, DEN, "star", 4)
    assert bm.equivalence_residuals(B, B) == [0.0] * 4
    assert bm.equivalence_check(B, bm.embed(G, DEN_X, "star", 4), tol=1e-4)
    assert not bm.equivalence_check(B, bm.embed(fn.scale(2, G), DEN, "star", 4))
    with pytest.raises(KindMismatch):
        bm.equivalence_check(B, bm.embed(G, DEN, "theta", 4))


def test_scale_and_additive_inverse():
    B = bm.embed(G, DEN, "star", 4)
    Z = bm.algebra("scale", B, factor=0)
    assert all(not np.any(Z.term(n)(S)) for n in range(1, 5))
    neg = bm.add(B, bm.scale(B, -1))
    assert max(bm.equivalence_residuals(neg, bm.embed(fn.zero(), DEN, "star", 4))) == 0.0


def test_binary_ops_need_matching_kind():
    with pytest.raises(KindMismatch):
        bm.add(bm.embed(G, DEN, "star", 4), bm.embed(G, DEN, "theta", 4))
    with pytest.raises(ValueError):
        bm.algebra("add", bm.embed(G, DEN, "star", 4))


@functools.lru_cache(maxsize=None)
def _conv_vs_embed(A, depth):
    f, g = G, fn.gaussian(2, 0)
    den = DeltaSeqSpec("triangular", 0.0, A)
    lhs = bm.convolve(bm.embed(f, den, "star", depth), bm.embed(g, den, "star", depth))
    rhs = bm.embed(conv_star(f, g, A, cfg=bm.DEFAULT_BOEHMIAN_QUADRATURE), den, "star", depth)
    return tuple(bm.equivalence_residuals(lhs, rhs))


@pytest.mark.xfail(strict=True, reason="needs ⋆-associativity, which fails for the non-even "
                   "triangular spike; residual shrinks with n but is ~1e-2 at depth 8")
def test_convolve_of_embeddings_matches_embedding_of_product():
    assert max(_conv_vs_embed(A, 8)) <= 1e-4


def test_convolve_of_embeddings_converges_to_embedding_of_product():
    for P in (A, preset("fourier")):
        res = _conv_vs_embed(P, 8)
        assert all(b < a for a, b in zip(res, res[1:]))
        assert res[-1] < res[0] / 10


def test_transform_pairing():
    with pytest.raises(KindMismatch):
        bm.transform(bm.embed(G, DEN, "theta", 4), "cct", S)
    with pytest.raises(KindMismatch):
        bm.transform(bm.embed(G, DEN, "star", 4), "cst", S)


def test_transform_examples():
    TB = bm.transform(bm.embed(fn.zero(), DEN, "star", 4), "cct", S)
    assert not np.any(TB.numerators[4].values)
    assert TB.ratio_field(4).grid.size == S.size


def test_sine_numerators_of_even_function_vanish_like_one_over_n():
    # f Θ delta_n is odd but not zero for even f (the spike is one-sided); it fades as 1/n
    even = fn.reflect_abs(fn.gaussian(1, 0.5))
    TB = bm.transform(bm.embed(even, DEN, "theta", 16), "cst", S, indices=[4, 8, 16])
    sups = [np.max(np.abs(TB.numerators[n].values)) for n in (4, 8, 16)]
    for a, b in zip(sups, sups[1:]):
        assert 1.9 < a / b < 2.1


def test_consistency_with_function_transform():
    rep = check_boehmian_consistency(A, depth=16)
    assert rep.passed and rep.max_residual < 1e-10


def test_denominator_guard(monkeypatch):
    monkeypatch.setattr(bm, "DEN_FLOOR", 1e3)
    with pytest.raises(DenominatorNearZero) as e:
        bm.transform(bm.embed(G, DEN, "star", 4), "cct", S)
    assert e.value.n == 4


def test_ratio_fields_separate_inequivalent_boehmians():
    B1 = bm.embed(G, DEN, "star", 8)
    B2 = bm.embed(G, DEN_X, "star", 8)
    B3 = bm.embed(fn.scale(2, G), DEN, "star", 8)
    r1, r2, r3 = (bm.transform(B, "cct", S).ratio(8) for B in (B1, B2, B3))
    assert np.max(np.abs(r1 - r2)) < 1e-10
    assert np.max(np.abs(r1 - r3)) > 0.1


def test_limit_estimate_examples():
    B = bm.embed(G, DEN, "star", 32)
    _, rep = bm.limit_estimate(bm.transform(B, "cct", S, indices=[4, 8, 16, 32]), [4, 8, 16, 32])
    assert rep.monotone and rep.deltas[-1] < rep.deltas[0]
    C = bm.Boehmian(bm.Fixed(G), DEN, "star", 8)
    _, rep = bm.limit_estimate(bm.transform(C, "cct", S, indices=[2, 4, 8]), [2, 4, 8])
    assert rep.deltas == [0.0, 0.0] and rep.monotone
    D = bm.Boehmian(bm.IndexWeighted(G, lambda n: float((-1) ** n), "alternating"), DEN, "star", 6)
    _, rep = bm.limit_estimate(bm.transform(D, "cct", S, indices=range(1, 7)), list(range(1, 7)))
    assert not rep.monotone
    with pytest.raises(ValueError):
        bm.limit_estimate(bm.transform(B, "cct", S, indices=[4, 8]), [8, 4])


def test_delta_lim_examples():
    B = bm.embed(G, DEN, "star", 8)
    conv = bm.delta_lim_check([bm.embed(fn.scale(1 + 1 / k, G), DEN, "star", 8) for k in range(1, 6)], B)
    norms = conv.details["norms"]
    assert conv.passed
    k = np.arange(1, 6)
    assert np.allclose(np.array(norms) * k, norms[0], rtol=0.1)
    assert bm.delta_lim_check([B, B, B], B).details["norms"] == [0.0, 0.0, 0.0]
    div = bm.delta_lim_check([bm.embed(fn.scale(k, G), DEN, "star", 8) for k in range(1, 6)], B)
    assert not div.passed


def test_delta_variant_needs_shared_denominator():
    B = bm.embed(G, DEN, "star", 4)
    with pytest.raises(KindMismatch):
        bm.delta_lim_check([bm.embed(G, DEN_X, "star", 4)], B, variant="delta")


def test_from_dict_templates():
    for template in ("embed", "constant", "index_scaled", "alternating"):
        d = {"kind": "star", "numerator": {"template": template, "f": G.to_dict()},
             "denominator": {"family": "triangular", "x": 0}, "depth": 4}
        B = bm.from_dict(d, A)
        assert B.depth == 4 and B.params == A
        assert B.to_dict()["numerator"]["template"] == template
    with pytest.raises(ValueError):
        bm.from_dict({"numerator": {"template": "wild"}}, A)


def test_convolution_ratio_defect_shrinks_like_inverse_square():
    # R(B1 ⋆ B2) = R1 R2 only up to C(delta ⋆ delta) / (P C(delta)^2) - 1, which is O(1/n^2)
    from canonxform.verify import check_boehmian_convolution
    reps = [check_boehmian_convolution(A, depth=d) for d in (8, 16, 32)]
    defects = [r.notes["denominator_defect_max"] for r in reps]
    for a, b in zip(defects, defects[1:]):
        assert 3.9 < a / b < 4.1
    for r in reps:
        assert r.notes["relative_max"] == pytest.approx(r.notes["denominator_defect_max"], rel=0.05)
