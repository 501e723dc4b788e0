import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussbesov.expansion import HermiteExpansion, random_expansion
from gaussbesov.quadrature import TimeQuadrature
from gaussbesov.spaces import (
    SpaceParams,
    besov_grid,
    besov_infty_constant,
    besov_norm,
    besov_seminorm,
    choose_k,
    derivative_norm_profile,
    gk_function,
    hardy_constant,
    hermite_closed_form_norm,
    hermite_closed_form_seminorm,
    infty_from_q_constant,
    k_shift_constant,
    triebel_grid,
    triebel_norm,
    triebel_seminorm,
)

H0 = HermiteExpansion.constant(1)
H1 = HermiteExpansion.basis((1,))
H2 = HermiteExpansion.basis((2,))
P = SpaceParams(0.5, 2, 2)


def test_choose_k():
    assert [choose_k(a) for a in (0, 0.5, 1.0, 1.3, 2.0)] == [1, 1, 2, 2, 3]
    with pytest.raises(ValueError):
        choose_k(-0.1)


def test_params_validation():
    assert P.k == 1 and P.gamma == 1.0
    assert SpaceParams(1.0).k == 2
    assert SpaceParams(0.5, "4", "inf").q == math.inf
    assert P.with_(alpha=1.5).k == 2
    for bad in (dict(alpha=-1), dict(alpha=0.5, p=1), dict(alpha=0.5, q=0.5), dict(alpha=1.0, k=1), dict(alpha=0.5, k=0)):
        with pytest.raises(ValueError):
            SpaceParams(**bad)


def test_besov_examples():
    assert besov_seminorm(H2, P) == pytest.approx(2**-0.25, rel=1e-12)
    assert besov_seminorm(H0, P) == 0.0
    assert besov_seminorm(3 * H2, P) == pytest.approx(3 * 2**-0.25, rel=1e-12)
    assert besov_norm(H2, P) == pytest.approx(1 + 2**-0.25, rel=1e-12)
    assert besov_norm(H0, P) == pytest.approx(1.0)
    assert besov_norm(HermiteExpansion.zero(1), P) == 0.0
    res = besov_seminorm(H2, P, full_output=True)
    assert res.error < 1e-8


def test_besov_infty_examples():
    q_inf = SpaceParams(0.5, 2, "inf")
    assert besov_infty_constant(H1, q_inf) == pytest.approx(math.sqrt(0.5) * math.exp(-0.5), rel=1e-9)
    assert besov_infty_constant(H0, q_inf) == 0.0
    assert besov_infty_constant(-2.5 * H1, q_inf) == pytest.approx(2.5 * math.sqrt(0.5) * math.exp(-0.5), rel=1e-9)
    assert besov_seminorm(H1, q_inf) == pytest.approx(besov_infty_constant(H1, q_inf))


def test_triebel_examples():
    assert triebel_seminorm(H2, P) == pytest.approx(2**-0.25, rel=1e-12)
    assert triebel_seminorm(H0, P) == 0.0
    assert triebel_norm(H0, P) == pytest.approx(1.0)
    assert triebel_norm(HermiteExpansion.zero(1), P) == 0.0
    for params in (P, SpaceParams(1.3, 4, 2), SpaceParams(0.0, 2, 4)):
        assert triebel_norm(H2, params) == pytest.approx(besov_norm(H2, params), rel=1e-10)
    with pytest.raises(ValueError):
        triebel_seminorm(H2, SpaceParams(0.5, 2, "inf"))


def test_gk_function():
    assert gk_function(H0, 1, [0.3]) == 0.0
    assert gk_function(H1, 1, [1.0]) == pytest.approx(math.sqrt(2) / 2, rel=1e-10)
    with pytest.raises(ValueError):
        gk_function(H1, 0, [1.0])


def test_closed_form_norm_examples():
    assert hermite_closed_form_norm((2,), P) == pytest.approx(1 + 2**-0.25)
    assert hermite_closed_form_norm((1,), SpaceParams(0.0, 2, 2)) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        hermite_closed_form_norm((0,), P)
    with pytest.raises(ValueError):
        hermite_closed_form_seminorm((1,), SpaceParams(0.5, 2, "inf"))


@pytest.mark.parametrize("beta", [1, 2, 3, 4])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.3])
@pytest.mark.parametrize("p,q", [(2, 2), (4, 2), (2, 4)])
def test_closed_form_seminorms(beta, alpha, p, q):
    params = SpaceParams(alpha, p, q)
    f = HermiteExpansion.basis((beta,))
    ref = hermite_closed_form_seminorm((beta,), params)
    assert besov_seminorm(f, params) == pytest.approx(ref, rel=1e-5)
    assert triebel_seminorm(f, params) == pytest.approx(ref, rel=1e-5)


def test_closed_form_two_dimensional():
    params = SpaceParams(1.3, 4, 2)
    f = HermiteExpansion.basis((2, 1))
    ref = hermite_closed_form_seminorm((2, 1), params)
    assert besov_seminorm(f, params) == pytest.approx(ref, rel=1e-8)
    assert triebel_seminorm(f, params) == pytest.approx(ref, rel=1e-8)


def test_constants():
    assert hardy_constant(0.5, 3, 1) == pytest.approx(1 / (0.5 * 1.5))
    assert hardy_constant(0.5, 1, 1) == 1.0
    assert k_shift_constant(0.5, 2, 1) == pytest.approx(2 * 2**1.5)
    assert infty_from_q_constant(0.5, 1, 2) == pytest.approx(math.sqrt(1 / 0.5))
    with pytest.raises(ValueError):
        hardy_constant(1.5, 3, 1)


def test_profile_and_grids():
    ts = np.geomspace(1e-3, 10, 20)
    prof = derivative_norm_profile(H2, 1, 2, ts)
    assert np.allclose(prof, math.sqrt(2) * np.exp(-math.sqrt(2) * ts))
    assert np.allclose(derivative_norm_profile(H0 + H2, 0, 2, [0.0]), math.sqrt(2))
    assert triebel_grid(1, 3, 2, 2).exact_degree >= 6
    assert besov_grid(2, 2, 4).exact_degree >= 8


def test_shared_time_rule_gives_identical_values():
    rule = TimeQuadrature.auto(1.0, 1.0)
    a = besov_seminorm(H2, P, rule)
    b = besov_seminorm(H2, P, rule)
    assert a == b


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.3, 0.5, 1.3]), st.floats(-3, 3).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity_and_triangle(seed, alpha, c):
    rng = np.random.default_rng(seed)
    f, g = random_expansion(1, 4, rng), random_expansion(1, 4, rng)
    params = SpaceParams(alpha, 2, 2)
    for semi in (besov_seminorm, triebel_seminorm):
        sf, sg = semi(f, params), semi(g, params)
        assert semi(c * f, params) == pytest.approx(abs(c) * sf, rel=1e-9)
        assert semi(f + g, params) <= (sf + sg) * (1 + 1e-9)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_p_equals_q_equality(seed):
    f = random_expansion(2, 3, np.random.default_rng(seed))
    assert triebel_norm(f, P) == pytest.approx(besov_norm(f, P), rel=1e-8)
