import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussbesov.expansion import HermiteExpansion, pi0, random_expansion
from gaussbesov.fractional import (
    bessel_inverse,
    bessel_poisson_integral,
    bessel_potential,
    bessel_via_integral,
    fractional_derivative,
    riesz_derivative_identity_check,
    riesz_potential,
    riesz_via_derivative_integral,
    riesz_via_integral,
)


def test_multiplier_examples():
    h4 = HermiteExpansion.basis((4,))
    assert riesz_potential(h4, 1.0)[(4,)] == pytest.approx(0.5)
    assert fractional_derivative(h4, 1.0)[(4,)] == pytest.approx(2.0)
    assert bessel_potential(HermiteExpansion.basis((3,)), 2.0)[(3,)] == pytest.approx(0.25)
    assert riesz_potential(HermiteExpansion.constant(1), 1.0).is_zero()
    for op in (riesz_potential, fractional_derivative, bessel_potential, bessel_inverse):
        with pytest.raises(ValueError):
            op(h4, 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.7, 3.0])
@pytest.mark.parametrize("d", [1, 2])
def test_integral_forms_match_multipliers(alpha, d, rng):
    f = random_expansion(d, 5, rng)
    x = rng.uniform(-1.4, 1.4, d)
    assert riesz_via_integral(f, alpha, x) == pytest.approx(riesz_potential(f, alpha)(x), abs=1e-10)
    assert riesz_via_derivative_integral(pi0(f), alpha, x) == pytest.approx(riesz_potential(f, alpha)(x), abs=1e-10)
    assert bessel_via_integral(f, alpha, x) == pytest.approx(bessel_potential(f, alpha)(x), abs=1e-10)
    res = bessel_via_integral(f, alpha, x, full_output=True)
    assert res.error < 1e-8


def test_riesz_through_subordinated_semigroup():
    h1 = HermiteExpansion.basis((1,))
    assert riesz_via_integral(h1, 1.0, [1.0], inner="subordination") == pytest.approx(math.sqrt(2), abs=1e-8)
    with pytest.raises(ValueError):
        riesz_via_integral(h1, 1.0, [1.0], inner="bad")


def test_derivative_form_needs_mean_zero():
    with pytest.raises(ValueError):
        riesz_via_derivative_integral(HermiteExpansion.constant(1), 1.0, [0.0])


def test_poisson_form_of_bessel_integral_differs():
    # the Poisson-subordinated integral has multiplier (1 + sqrt n)^-alpha, not (1 + n)^-alpha/2
    h1 = HermiteExpansion.basis((1,))
    x = [0.5]
    assert bessel_poisson_integral(h1, 2.0, x) == pytest.approx(h1(x) / 4, abs=1e-10)
    assert bessel_potential(h1, 2.0)(x) == pytest.approx(h1(x) / 2)
    one = HermiteExpansion.constant(1)
    assert bessel_poisson_integral(one, 2.0, x) == pytest.approx(1.0, abs=1e-12)


def test_zero_input():
    z = HermiteExpansion.zero(1)
    assert riesz_via_integral(z, 1.0, [0.0]) == 0.0
    assert bessel_via_integral(z, 1.0, [0.0]) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1000), st.floats(0.1, 4.0), st.floats(0.1, 4.0))
def test_identities(seed, a, b):
    f = random_expansion(2, 5, np.random.default_rng(seed))
    ok, res = riesz_derivative_identity_check(f, a)
    assert ok and res <= 1e-12
    assert bessel_potential(bessel_potential(f, a), b).max_abs_diff(bessel_potential(f, a + b)) <= 1e-14
    assert bessel_inverse(bessel_potential(f, a), a).max_abs_diff(f) <= 1e-13
