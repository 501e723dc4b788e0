"""Acceptance gate: one test per criterion, each at its stated tolerance."""
import json
import math

import mpmath
import numpy as np
import pytest

from gaussbesov.expansion import HermiteExpansion, pi0, random_expansion
from gaussbesov.fractional import (
    bessel_potential,
    bessel_via_integral,
    riesz_derivative_identity_check,
    riesz_potential,
    riesz_via_integral,
)
from gaussbesov.hermite import gauss_hermite_grid, grid_for, lp_norm
from gaussbesov.semigroup import (
    ou_apply_mehler,
    ou_apply_spectral,
    poisson_apply_kernel,
    poisson_apply_spectral,
    poisson_apply_subordination,
)
from gaussbesov.spaces import (
    SpaceParams,
    besov_grid,
    besov_infty_constant,
    besov_norm,
    besov_seminorm,
    choose_k,
    derivative_norm_profile,
    hardy_constant,
    hermite_closed_form_seminorm,
    triebel_norm,
    triebel_seminorm,
)
from gaussbesov.stable import (
    stable_density,
    stable_derivative_form,
    stable_laplace,
    stable_moment_constant,
    stable_neg_moment,
    stable_tv_constant,
)
from gaussbesov.verify import SuiteConfig, check_contraction, check_interpolation, report_document, run_suite

SEED = 20240601


def seeded_expansions(count=20, degree=4, seed=SEED):
    rng = np.random.default_rng(seed)
    return [random_expansion(1 + i % 2, degree, rng) for i in range(count)]


def test_criterion_01_stable_moments():
    for k in range(5):
        for t in (0.25, 1.0, 4.0):
            exact = 4.0**k * math.gamma(k + 0.5) / math.sqrt(math.pi) / t ** (2 * k)
            assert abs(stable_neg_moment(k, t) / exact - 1) <= 1e-8
    assert stable_neg_moment(0, 1.0) == pytest.approx(1.0, rel=1e-8)
    assert stable_neg_moment(1, 1.0) == pytest.approx(2.0, rel=1e-8)
    assert stable_neg_moment(2, 2.0) == pytest.approx(0.75, rel=1e-8)


def test_criterion_02_laplace_oracle():
    for lam in (1.0, 4.0, 9.0, 25.0):
        for t in (0.1, 1.0, 5.0):
            assert abs(stable_laplace(t, lam) - math.exp(-t * math.sqrt(lam))) <= 1e-6


def test_criterion_03_derivative_forms():
    mpmath.mp.dps = 40
    try:
        for k in range(7):
            form = stable_derivative_form(k)
            assert all(2 * j - i == k for i, j in form.terms)
            for t in (0.2, 0.9, 2.0, 4.5):
                for s in (0.15, 0.8, 2.0, 6.0):
                    g = lambda tt: tt * mpmath.exp(-tt * tt / (4 * s)) / (2 * mpmath.sqrt(mpmath.pi) * mpmath.mpf(s) ** 1.5)
                    ref = float(mpmath.diff(g, mpmath.mpf(t), k, h=mpmath.mpf(10) ** -8 * math.sqrt(s)))
                    val = float(form.evaluate(t, s))
                    # relative to the size of the terms, so sign changes of the derivative are harmless
                    scale = float(sum(abs(a) * t**i * s ** (-j) for (i, j), a in form.terms.items())) * stable_density(t, s)
                    assert abs(val - ref) <= 1e-6 * max(abs(ref), scale)
    finally:
        mpmath.mp.dps = 15


def test_criterion_04_cross_representation():
    rng = np.random.default_rng(SEED)
    for d in (1, 2):
        for _ in range(2):
            f = random_expansion(d, 6, rng)
            grid = gauss_hermite_grid(4, d)
            for t in (0.1, 0.5, 1.0, 2.0, 5.0):
                T_ref, P_ref = ou_apply_spectral(f, t), poisson_apply_spectral(f, t)
                for _ in range(2):
                    x = rng.uniform(-1, 1, d)
                    x *= rng.uniform(0, 2) / np.linalg.norm(x)
                    assert abs(ou_apply_mehler(f, t, x, grid) - T_ref(x)) <= 1e-6
                    assert abs(poisson_apply_subordination(f, t, x) - P_ref(x)) <= 1e-6
                    assert abs(poisson_apply_subordination(f, t, x, inner="mehler") - P_ref(x)) <= 1e-6
                if d == 1 or t in (0.1, 5.0):
                    assert abs(poisson_apply_kernel(f, t, x) - P_ref(x)) <= 1e-6


def test_criterion_05_fractional_identities():
    rng = np.random.default_rng(SEED + 5)
    for f in [random_expansion(1 + i % 2, 6, rng) for i in range(6)]:
        scale = f.abs_sum()
        for alpha in (0.5, 1.0, 1.7, 3.0):
            ok, residual = riesz_derivative_identity_check(f, alpha)
            assert ok and residual <= 1e-12
            x = rng.uniform(-1.4, 1.4, f.dim)
            assert abs(riesz_via_integral(f, alpha, x) - riesz_potential(f, alpha)(x)) <= 1e-6
            assert abs(bessel_via_integral(f, alpha, x) - bessel_potential(f, alpha)(x)) <= 1e-6
            for beta in (0.5, 2.0):
                law = bessel_potential(bessel_potential(f, alpha), beta).max_abs_diff(bessel_potential(f, alpha + beta))
                assert law <= 1e-15 * scale
        assert pi0(f).mean == 0.0


def test_criterion_06_closed_form_norms():
    for beta in range(1, 5):
        for alpha in (0.0, 0.5, 1.3):
            for p, q in ((2, 2), (4, 2), (2, 4)):
                params = SpaceParams(alpha, p, q)
                k = params.k
                hb = lp_norm(HermiteExpansion.basis((beta,)), p, grid_for(1, beta, p))
                ref = beta ** (alpha / 2) * q ** (-(k - alpha)) * math.gamma((k - alpha) * q) ** (1 / q) * hb
                f = HermiteExpansion.basis((beta,))
                assert abs(besov_seminorm(f, params) / ref - 1) <= 1e-5
                assert abs(triebel_seminorm(f, params) / ref - 1) <= 1e-5
    spot = besov_seminorm(HermiteExpansion.basis((2,)), SpaceParams(0.5, 2, 2, k=1))
    assert spot == pytest.approx(2**-0.25, rel=1e-5) and spot == pytest.approx(0.840896, abs=1e-6)


def test_criterion_07_besov_triebel_comparison():
    for f in seeded_expansions():
        b, t = besov_norm(f, SpaceParams(0.5, 2, 2)), triebel_norm(f, SpaceParams(0.5, 2, 2))
        assert abs(b - t) <= 1e-8 * b
        b42, t42 = besov_norm(f, SpaceParams(0.5, 4, 2)), triebel_norm(f, SpaceParams(0.5, 4, 2))
        assert t42 <= b42 * (1 + 1e-9)
        b24, t24 = besov_norm(f, SpaceParams(0.5, 2, 4)), triebel_norm(f, SpaceParams(0.5, 2, 4))
        assert b24 <= t24 * (1 + 1e-9)


def test_criterion_08_monotonicity():
    ts = np.geomspace(1e-3, 20.0, 50)
    for f in seeded_expansions(count=8):
        for p in (2.0, 4.0):
            grid = besov_grid(f.dim, f.degree(), p)
            norm_f = lp_norm(f, p, grid)
            for k in range(4):
                N = derivative_norm_profile(f, k, p, ts, grid)
                assert np.all(np.diff(N) <= 1e-12 * max(N.max(), 1e-300))
                assert np.all(ts**k * N <= stable_tv_constant(k) * norm_f * (1 + 1e-12))


def test_criterion_09_k_bracketing():
    for f in seeded_expansions(count=8):
        if f.is_constant():
            continue
        for alpha in (0.5, 1.3):
            l = choose_k(alpha)
            k = l + 1
            D = hardy_constant(alpha, k, l)
            assert D == pytest.approx(1 / (l - alpha))
            for p in (2.0, 4.0):
                Sk = besov_seminorm(f, SpaceParams(alpha, p, 2, k=k))
                Sl = besov_seminorm(f, SpaceParams(alpha, p, 2, k=l))
                assert Sl <= D * Sk * (1 + 1e-9)
            Ak = besov_infty_constant(f, SpaceParams(alpha, 2, "inf", k=k))
            Al = besov_infty_constant(f, SpaceParams(alpha, 2, "inf", k=l))
            assert Al <= D * Ak * (1 + 1e-6)


def test_criterion_10_contraction():
    for f in seeded_expansions(count=8):
        for params in (SpaceParams(0.5, 2, 2), SpaceParams(1.3, 4, 2)):
            for s in (0.1, 1.0):
                for beta in (0.5, 2.0):
                    report = check_contraction(f, params, s, bessel_order=beta, tol=1e-9)
                    assert report.passed, report.violations()
                    assert sum(o.label.startswith("F norm") for o in report.observed) == 3


def test_criterion_11_smoothing_on_basis():
    for b in range(1, 5):
        for alpha, beta, (p, q) in ((0.5, 1.0, (2, 2)), (0.0, 0.5, (4, 2)), (1.3, 2.0, (2, 4))):
            target_params = SpaceParams(alpha + beta, p, q)
            assert target_params.k == choose_k(alpha + beta)
            value = besov_norm(bessel_potential(HermiteExpansion.basis((b,)), beta), target_params)
            hb = lp_norm(HermiteExpansion.basis((b,)), p, grid_for(1, b, p))
            closed = (1 + b) ** (-beta / 2) * (hb + hermite_closed_form_seminorm((b,), target_params))
            assert abs(value / closed - 1) <= 1e-5


def test_criterion_12_interpolation():
    for f in seeded_expansions():
        grid = grid_for(f.dim, f.degree(), 8)
        for r0, r1, eta in ((2.0, 4.0, 0.5), (1.5, 6.0, 0.3), (3.0, 8.0, 0.7)):
            assert check_interpolation(f, r0, r1, eta, grid, tol=1e-9).passed


def test_criterion_13_determinism(default_reports):
    again = run_suite(SuiteConfig(threads=4))
    a = json.dumps(report_document(default_reports, SuiteConfig()))
    b = json.dumps(report_document(again, SuiteConfig()))
    assert a == b
