import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussbesov.exceptions import BudgetExceededError, DimensionError
from gaussbesov.hermite import (
    INF,
    LpSpec,
    MultiIndex,
    as_exponent,
    gauss_hermite_grid,
    grid_for,
    hermite_1d,
    hermite_basis,
    hermite_eval,
    lp_norm,
    multi_indices,
)

X = sympy.Symbol("x")


def rodrigues(n):
    """Physicists' Hermite polynomial from Rodrigues' formula, normalized by sqrt(2^n n!)."""
    H = sympy.simplify((-1) ** n * sympy.exp(X**2) * sympy.diff(sympy.exp(-(X**2)), X, n))
    return sympy.lambdify(X, H / sympy.sqrt(2**n * sympy.factorial(n)), "math")


@pytest.mark.parametrize("n", range(0, 9))
def test_recurrence_matches_rodrigues(n):
    ref = rodrigues(n)
    for x in (-2.3, -0.7, 0.0, 0.4, 1.9):
        assert hermite_1d(n, x)[n] == pytest.approx(ref(x), rel=1e-12, abs=1e-12)


def test_spot_values():
    assert hermite_eval((1,), [1.0]) == pytest.approx(math.sqrt(2))
    assert hermite_eval((2,), [0.0]) == pytest.approx(-1 / math.sqrt(2))
    assert hermite_eval((1, 1), [1.0, 1.0]) == pytest.approx(2.0)


def test_orthonormal_in_two_dimensions():
    betas = multi_indices(2, 4)
    grid = gauss_hermite_grid(6, 2)
    B = hermite_basis(betas, grid.nodes)
    gram = B.T @ (grid.weights[:, None] * B)
    assert np.allclose(gram, np.eye(len(betas)), atol=1e-12)


def test_grid_moments_and_exactness():
    g = gauss_hermite_grid(5, 1)
    assert g.exact_degree == 9
    assert g.weights.sum() == pytest.approx(1.0, abs=1e-15)
    x = g.nodes[:, 0]
    # int x^2 dgamma_1 = 1/2, int x^4 = 3/4, int x^8 = 105/16
    assert g.integrate(x**2) == pytest.approx(0.5)
    assert g.integrate(x**4) == pytest.approx(0.75)
    assert g.integrate(x**8) == pytest.approx(105 / 16)


def test_grid_budget():
    with pytest.raises(BudgetExceededError):
        gauss_hermite_grid(100, 3, max_nodes=1000)
    with pytest.raises(ValueError):
        gauss_hermite_grid(0, 1)


def test_multi_indices_count_and_order():
    idx = multi_indices(3, 4)
    assert len(idx) == math.comb(7, 3)
    assert [b.order for b in idx] == sorted(b.order for b in idx)
    assert multi_indices(2, -1) == []
    with pytest.raises(BudgetExceededError):
        multi_indices(10, 10, budget=100)


def test_multi_index_validation():
    assert MultiIndex((2, 1)).factorial == 2
    assert MultiIndex(3).dim == 1
    for bad in ((-1,), (1.5,), (), (True,)):
        with pytest.raises(ValueError):
            MultiIndex(bad)


def test_lp_norm_examples():
    g = grid_for(1, 1, 4)
    # ||h_1||_4^4 = 4 int x^4 dgamma = 3
    assert lp_norm(lambda p: math.sqrt(2) * p[:, 0], 4, g) == pytest.approx(3**0.25, rel=1e-14)
    assert lp_norm(lambda p: np.ones(len(p)), 3.5, g) == pytest.approx(1.0)
    assert lp_norm(np.zeros(g.size), 2, g) == 0.0
    assert lp_norm(lambda p: p[:, 0], INF, g) == pytest.approx(np.abs(g.nodes).max())
    with pytest.raises(DimensionError):
        lp_norm(np.ones(g.size + 1), 2, g)


@pytest.mark.parametrize("p", [1, 0.5, -2, float("nan"), "-inf"])
def test_exponent_validation(p):
    with pytest.raises(ValueError):
        as_exponent(p)


def test_exponent_parsing():
    assert as_exponent("inf") == INF
    assert LpSpec.parse("4").p == 4.0
    assert LpSpec(INF).is_inf


def test_hermite_basis_dimension_mismatch():
    with pytest.raises(DimensionError):
        hermite_basis([(1, 0)], np.zeros((3, 1)))
    assert hermite_basis([], np.zeros((4, 2))).shape == (4, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(-4, 4))
def test_recurrence_satisfies_ode(n, x):
    # h_n'' - 2x h_n' + 2n h_n = 0, checked with the derivative identity h_n' = sqrt(2n) h_{n-1}
    h = hermite_1d(n + 1, x)
    d1 = math.sqrt(2 * n) * h[n - 1] if n >= 1 else 0.0
    d2 = math.sqrt(2 * n * 2 * (n - 1)) * h[n - 2] if n >= 2 else 0.0
    scale = 1 + abs(h[n]) + abs(x * d1) + abs(d2)
    assert abs(d2 - 2 * x * d1 + 2 * n * h[n]) <= 1e-10 * scale


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), st.integers(0, 5), st.sampled_from([2.0, 4.0, 6.0]))
def test_even_p_grid_is_exact(d, deg, p):
    # refining an exact grid must not change the value
    rng = np.random.default_rng(deg * 10 + d)
    betas = multi_indices(d, deg)
    c = rng.uniform(-1, 1, len(betas))

    def f(pts):
        return hermite_basis(betas, pts) @ c

    g = grid_for(d, deg, p)
    finer = gauss_hermite_grid(g.n_per_axis + 3, d)
    assert lp_norm(f, p, g) == pytest.approx(lp_norm(f, p, finer), rel=1e-11)
