import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from canonxform import functions as fn
from canonxform.convolution import (Convolution, conv_classic, conv_otimes, conv_star, conv_theta)
from canonxform.errors import BZero, UnderResolved
from canonxform.functions import QuadratureConfig, l1_norm, use_quadrature
from canonxform.params import CanonicalParams, preset
from canonxform.verify import check_norm_bounds, check_theta_decomposition, corpus

A = CanonicalParams(1, 2, 1, 3)
F = preset("fourier")
CFG = QuadratureConfig(10.0, 4096)
LIGHT = QuadratureConfig(12.0, 2048)
T = np.linspace(-2, 2, 9)
G = fn.gaussian()
HALF_GAUSS = lambda t: math.sqrt(math.pi / 2) * np.exp(-t ** 2 / 2)


def test_classic_gaussian():
    got = conv_classic(G, G, CFG)(T)
    assert np.max(np.abs(got - HALF_GAUSS(T))) <= 1e-8


def test_star_reduces_to_convolution_when_a_is_zero():
    assert np.max(np.abs(conv_star(G, G, F, cfg=CFG)(T) - HALF_GAUSS(T))) <= 1e-6


def test_otimes_reduces_to_correlation_when_a_is_zero():
    assert np.max(np.abs(conv_otimes(G, G, F, cfg=CFG)(T) - HALF_GAUSS(T))) <= 1e-6


def test_theta_examples():
    assert np.max(np.abs(conv_theta(G, fn.gaussian(2, 0), F, cfg=CFG)(T))) <= 1e-8
    got = conv_theta(fn.gaussian_moment(1), G, F, cfg=CFG)(T)
    assert np.max(np.abs(got - T / 2 * HALF_GAUSS(T))) <= 1e-6


@pytest.mark.parametrize("op", ["classic", "star", "theta", "otimes"])
def test_zero_argument(op):
    P = None if op == "classic" else A
    assert not np.any(Convolution(op, G, fn.zero(), P, cfg=LIGHT)(T))
    assert not np.any(Convolution(op, fn.zero(), G, P, cfg=LIGHT)(T))


def test_star_commutes_for_gaussian_pair():
    t = np.array([-1.0, 0.0, 2.0])
    f, g = fn.gaussian(1, 0), fn.gaussian(2, 0.5)
    assert np.max(np.abs(conv_star(f, g, A, cfg=LIGHT)(t) - conv_star(g, f, A, cfg=LIGHT)(t))) <= 1e-8


def test_otimes_commutes_for_centred_gaussians():
    f, g = fn.gaussian(1, 0), fn.gaussian(2, 0)
    assert np.max(np.abs(conv_otimes(f, g, A, cfg=LIGHT)(T) - conv_otimes(g, f, A, cfg=LIGHT)(T))) <= 1e-8


def test_swap_laws_in_general():
    # for arbitrary inputs: g Θ f = -(f Θ g) and (g ⊗ f)(t) = (f ⊗ g)(-t)
    f, g = fn.gaussian_moment(1), fn.gaussian(2, 0.5)
    fg = conv_theta(f, g, A, cfg=LIGHT)(T)
    gf = conv_theta(g, f, A, cfg=LIGHT)(T)
    assert np.max(np.abs(fg + gf)) <= 1e-10
    assert np.max(np.abs(fg)) > 0.1
    ofg = conv_otimes(f, g, A, cfg=LIGHT)(T)
    ogf = conv_otimes(g, f, A, cfg=LIGHT)(-T)
    assert np.max(np.abs(ofg - ogf)) <= 1e-10
    assert np.max(np.abs(ofg - conv_otimes(g, f, A, cfg=LIGHT)(T))) > 0.1


def test_star_associativity_needs_even_inputs():
    f, g, h = fn.gaussian_moment(1), fn.gaussian(1, 0.5), fn.gaussian(0.75, 0)
    inner = QuadratureConfig(12.0, 512)
    left = conv_star(conv_star(f, g, A, cfg=inner), h, A, cfg=LIGHT)(T)
    right = conv_star(f, conv_star(g, h, A, cfg=inner), A, cfg=LIGHT)(T)
    assert np.max(np.abs(left - right)) > 1e-3


def test_mirrored_matches_signed_for_even_g():
    f, g = fn.gaussian(2, 0.5), fn.reflect_abs(fn.gaussian(1, 0.5))
    for op in ("star", "theta"):
        s = Convolution(op, f, g, A, "signed", LIGHT)(T)
        m = Convolution(op, f, g, A, "mirrored", LIGHT)(T)
        assert np.max(np.abs(s - m)) <= 1e-14


def test_lattice_path_matches_direct_path():
    f, g = fn.gaussian(2, 0.5), fn.gaussian_moment(1)
    h = LIGHT.step
    t = np.arange(-40, 41, 8) * h
    for op in ("classic", "star", "theta", "otimes"):
        P = None if op == "classic" else A
        c = Convolution(op, f, g, P, cfg=LIGHT)
        lattice = c(t)
        direct = c(np.append(t, 0.3 * h))[:-1]
        assert np.max(np.abs(lattice - direct)) <= 1e-13


def test_ambient_config_is_captured_at_construction():
    small = QuadratureConfig(6.0, 512)
    with use_quadrature(small):
        c = conv_star(G, G, A)
    assert c.cfg is small


def test_errors():
    with pytest.raises(BZero):
        conv_star(G, G, preset("identity"))
    with pytest.raises(ValueError):
        Convolution("dot", G, G, A)
    with pytest.raises(ValueError):
        Convolution("star", G, G, A, "folded")
    with pytest.raises(UnderResolved):
        conv_star(G, G, A, cfg=QuadratureConfig(12.0, 64))(T)
    with pytest.raises(UnderResolved):
        conv_star(G, fn.triangular_delta(64), F, cfg=QuadratureConfig(1.0, 64))(T)


def test_json_roundtrip():
    c = conv_theta(fn.gaussian_moment(1), conv_star(G, G, A, cfg=LIGHT), A, "mirrored", LIGHT)
    back = fn.from_dict(json.loads(json.dumps(c.to_dict())))
    assert np.array_equal(back(T), c(T))


def test_decomposition_on_corpus():
    fs = corpus(n_random=2)
    for f in fs:
        for g in fs:
            assert check_theta_decomposition(f, g, A).passed


def test_norm_bounds():
    f, g = fn.gaussian(1, 0), fn.gaussian(2, 0.5)
    for kind in ("star", "theta", "otimes"):
        assert check_norm_bounds(kind, f, g, A).passed
    rep = check_norm_bounds("classic", G, G)
    assert rep.passed and rep.max_residual <= 1e-6


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.sampled_from(["star", "theta", "otimes"]))
def test_bilinear_in_first_argument(lr, li, op):
    lam = complex(lr, li)
    f, h, g = fn.gaussian(1, 0.5), fn.gaussian_moment(1), fn.gaussian(2, 0)
    lhs = Convolution(op, fn.add(fn.scale(lam, f), h), g, A, cfg=LIGHT)(T)
    rhs = lam * Convolution(op, f, g, A, cfg=LIGHT)(T) + Convolution(op, h, g, A, cfg=LIGHT)(T)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_star_norm_of_gaussians_below_product():
    f, g = fn.gaussian(1, 0), fn.gaussian(2, 0.5)
    assert l1_norm(conv_star(f, g, A, cfg=LIGHT), LIGHT) <= l1_norm(f, LIGHT) * l1_norm(g, LIGHT)
