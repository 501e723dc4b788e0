import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from gaussbesov.exceptions import QuadratureError
from gaussbesov.quadrature import SubordinationQuadrature
from gaussbesov.stable import (
    MAX_DERIVATIVE_ORDER,
    StableDerivativeForm,
    stable_abs_deriv_constant,
    stable_abs_deriv_mass,
    stable_density,
    stable_derivative_form,
    stable_expectation,
    stable_laplace,
    stable_moment_constant,
    stable_neg_moment,
    stable_tv_constant,
)


def g_mp(t, s):
    return t * mpmath.exp(-t * t / (4 * s)) / (2 * mpmath.sqrt(mpmath.pi) * s ** mpmath.mpf(1.5))


@pytest.mark.parametrize("k", range(0, 7))
def test_derivative_form_against_finite_differences(k):
    form = stable_derivative_form(k)
    assert all(2 * j - i == k for i, j in form.terms)
    mpmath.mp.dps = 40
    try:
        for t, s in [(0.3, 0.2), (1.0, 1.0), (2.5, 0.7), (4.0, 3.0), (0.8, 5.0)]:
            # central differences at high working precision, step tuned to the scale sqrt(s)
            ref = float(mpmath.diff(lambda tt: g_mp(tt, mpmath.mpf(s)), mpmath.mpf(t), k,
                                    h=mpmath.mpf(10) ** -8 * math.sqrt(s)))
            val = float(form.evaluate(t, s))
            scale = float(sum(abs(a) * t**i * s ** (-j) for (i, j), a in form.terms.items())) * stable_density(t, s)
            assert abs(val - ref) <= 1e-6 * max(abs(ref), scale)
    finally:
        mpmath.mp.dps = 15


def test_derivative_form_first_terms():
    f1 = stable_derivative_form(1)
    assert dict(f1.terms) == {(-1, 0): Fraction(1), (1, 1): Fraction(-1, 2)}
    f2 = stable_derivative_form(2)
    # g'' = (-3/(2s) + t^2/(4s^2)) g
    assert dict(f2.terms) == {(0, 1): Fraction(-3, 2), (2, 2): Fraction(1, 4)}


def test_derivative_form_validation():
    with pytest.raises(ValueError):
        stable_derivative_form(-1)
    with pytest.raises(ValueError):
        stable_derivative_form(MAX_DERIVATIVE_ORDER + 1)
    assert stable_derivative_form(10, max_k=10).k == 10
    with pytest.raises(ValueError):
        StableDerivativeForm(1, {(0, 0): Fraction(1)})


def test_density_mass_by_adaptive_quadrature():
    for t in (0.2, 1.0, 3.0):
        mass = integrate.quad(lambda s: stable_density(t, s), 0, np.inf, limit=200, epsabs=1e-13)[0]
        assert mass == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        stable_density(0.0, 1.0)
    with pytest.raises(ValueError):
        stable_density(1.0, -1.0)


@pytest.mark.parametrize("k", range(0, 5))
@pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
def test_neg_moments(k, t):
    assert stable_neg_moment(k, t) == pytest.approx(stable_moment_constant(k) / t ** (2 * k), rel=1e-8)


def test_neg_moment_spot_values():
    assert stable_neg_moment(0, 3.0) == pytest.approx(1.0, rel=1e-12)
    assert stable_neg_moment(1, 1.0) == pytest.approx(2.0, rel=1e-12)
    assert stable_neg_moment(2, 2.0) == pytest.approx(0.75, rel=1e-12)
    assert stable_moment_constant(1) == pytest.approx(2.0) and stable_moment_constant(2) == pytest.approx(12.0)
    res = stable_neg_moment(3, 1.0, full_output=True)
    assert res.error < 1e-10


@pytest.mark.parametrize("lam", [1.0, 4.0, 9.0, 25.0])
@pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
def test_laplace_transform(lam, t):
    assert abs(stable_laplace(t, lam) - math.exp(-t * math.sqrt(lam))) <= 1e-6


def test_tv_constants():
    assert [stable_tv_constant(k) for k in range(7)] == pytest.approx([1, 2, 6, 36, 300, 3240, 42840])


@pytest.mark.parametrize("k", range(1, 5))
def test_abs_derivative_mass_by_adaptive_quadrature(k):
    form = stable_derivative_form(k)
    t = 1.3
    # break the s-range at the sign changes of the derivative
    c = form.v_polynomial()
    w = np.roots(np.trim_zeros(c[::-1], "f"))
    breaks = sorted(t * t / (4 * r.real) for r in w if abs(r.imag) < 1e-10 and r.real > 0)
    edges = [0.0] + breaks + [np.inf]
    ref = sum(integrate.quad(lambda s: abs(float(form.evaluate(t, s))), a, b, limit=400, epsabs=1e-15)[0]
              for a, b in zip(edges[:-1], edges[1:]))
    assert stable_abs_deriv_mass(k, t) == pytest.approx(ref, rel=1e-8)
    assert stable_abs_deriv_constant(k) <= stable_tv_constant(k)


def test_abs_derivative_constants():
    assert stable_abs_deriv_constant(0) == pytest.approx(1.0, abs=1e-12)
    assert stable_abs_deriv_constant(1) == pytest.approx(0.96788, rel=1e-5)
    assert stable_abs_deriv_mass(2, 2.0, full_output=True).error < 1e-9


def test_expectation_tolerance_guard():
    quad = SubordinationQuadrature(points_per_panel=2, v_max=2.0, linear_panel_width=1.5)
    with pytest.raises(QuadratureError):
        stable_expectation(lambda s: np.cos(40 * s), 1.0, quad, tol=1e-14)
    res = stable_expectation(lambda s: np.ones_like(s), 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.floats(0.05, 20.0))
def test_moment_scaling(k, t):
    # t^{2k} int s^-k mu_t(ds) does not depend on t
    assert t ** (2 * k) * stable_neg_moment(k, t) == pytest.approx(stable_moment_constant(k), rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_derivative_form_homogeneity(k, t, lam):
    # g(lam t, lam^2 s) = lam^-2 g(t, s), so d^k_t g scales by lam^-(k+2)
    form = stable_derivative_form(k)
    s = 0.9
    a = float(form.evaluate(lam * t, lam * lam * s))
    b = float(form.evaluate(t, s)) * lam ** (-(k + 2))
    assert a == pytest.approx(b, rel=1e-9, abs=1e-300)
