"""
Numerical verification harness.

Every inequality and identity of the theory that can be evaluated on
polynomial inputs is a named check. A check returns a :class:`CheckReport`
listing what it observed and the bound each observation had to satisfy.
:func:`run_suite` runs a selection of checks in a fixed order; the report
is a pure function of the :class:`SuiteConfig`.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .expansion import HermiteExpansion, pi0, random_expansion, sobolev_norm
from .fractional import (
    bessel_inverse,
    bessel_potential,
    bessel_via_integral,
    riesz_derivative_identity_check,
    riesz_potential,
    riesz_via_derivative_integral,
    riesz_via_integral,
)
from .hermite import GaussHermiteGrid, as_exponent, gauss_hermite_grid, grid_for, lp_norm
from .quadrature import TimeQuadrature
from .semigroup import (
    ou_apply_mehler,
    ou_apply_spectral,
    ou_kernel,
    ou_maximal,
    poisson_apply_kernel,
    poisson_apply_spectral,
    poisson_apply_subordination,
    poisson_derivative_values,
    poisson_kernel,
)
from .spaces import (
    SpaceParams,
    besov_grid,
    besov_infty_constant,
    besov_norm,
    besov_seminorm,
    choose_k,
    derivative_norm_profile,
    gk_function,
    hardy_constant,
    hermite_closed_form_seminorm,
    infty_from_q_constant,
    k_shift_constant,
    triebel_norm,
    triebel_seminorm,
)
from .stable import (
    stable_abs_deriv_constant,
    stable_abs_deriv_mass,
    stable_density,
    stable_derivative_form,
    stable_laplace,
    stable_moment_constant,
    stable_neg_moment,
    stable_tv_constant,
)

__all__ = [
    "Observation",
    "CheckReport",
    "SuiteConfig",
    "SUITES",
    "CHECKS",
    "check_ids",
    "run_suite",
    "report_document",
    "check_contraction",
    "check_smoothing",
    "check_interpolation",
    "hermite_norm_table",
    "stable_moment_table",
]


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class Observation:
    """A measured value, optionally with the bound it must satisfy.

    ``relation`` is ``"<="`` (value at most bound) or ``">="``; observations
    without a bound are informational.
    """

    label: str
    value: float
    bound: float | None = None
    relation: str = "<="

    @property
    def violated(self) -> bool:
        if self.bound is None:
            return not math.isfinite(self.value)
        if not math.isfinite(self.value):
            return True
        return self.value > self.bound if self.relation == "<=" else self.value < self.bound

    def as_document(self) -> dict:
        doc = {"label": self.label, "value": _num(self.value)}
        if self.bound is not None:
            doc["bound"] = _num(self.bound)
            doc["relation"] = self.relation
        if self.violated:
            doc["violated"] = True
        return doc


def _num(x: float):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check.

    A failing report always carries at least one observation marked
    ``violated``.
    """

    check_id: str
    status: str
    observed: tuple[Observation, ...]
    tolerance: float
    topic: str = ""
    runtime_ms: int = 0
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def violations(self) -> list[Observation]:
        return [o for o in self.observed if o.violated]

    def as_document(self, timings: bool = False) -> dict:
        doc = {
            "check_id": self.check_id,
            "status": self.status,
            "topic": self.topic,
            "tolerance": _num(self.tolerance),
            "observed": [o.as_document() for o in self.observed],
        }
        if self.message:
            doc["message"] = self.message
        if timings:
            doc["runtime_ms"] = self.runtime_ms
        return doc


class _Recorder:
    """Collects observations for one check."""

    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.items: list[Observation] = []

    def le(self, label: str, value: float, bound: float):
        self.items.append(Observation(label, float(value), float(bound), "<="))

    def ge(self, label: str, value: float, bound: float):
        self.items.append(Observation(label, float(value), float(bound), ">="))

    def close(self, label: str, value: float, target: float, tol: float | None = None, relative: bool = False):
        """Record ``|value - target|`` (relative to ``|target|`` if asked) against ``tol``."""
        tol = self.tolerance if tol is None else tol
        dev = abs(value - target)
        if relative:
            dev /= max(abs(target), 1e-300)
        self.le(label, dev, tol)

    def info(self, label: str, value: float):
        self.items.append(Observation(label, float(value)))

    def worst(self, label: str, devs, tol: float | None = None):
        """Record only the largest of many deviations."""
        devs = list(devs)
        self.le(label, max(devs) if devs else 0.0, self.tolerance if tol is None else tol)


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class SuiteConfig:
    """Inputs of a verification run.

    Parameters
    ----------
    seed : int
        Seed of the generator that draws random expansions.
    dims : tuple of int
        Dimensions to exercise.
    max_degree : int
        Degree of random expansions in the norm and theorem checks.
    operator_degree : int
        Degree of random expansions in the semigroup and fractional checks.
    n_random : int
        Number of random expansions per sampled family.
    tol_scale : float
        Multiplies every tolerance.
    tolerances : dict
        Per-check overrides of the base tolerance.
    threads : int
        Worker threads; results do not depend on it.
    kernel_dims : tuple of int
        Dimensions for the Poisson-Hermite kernel check (2-D is slower).
    """

    seed: int = 20240601
    dims: tuple[int, ...] = (1, 2)
    max_degree: int = 4
    operator_degree: int = 6
    n_random: int = 20
    tol_scale: float = 1.0
    tolerances: dict = field(default_factory=dict)
    threads: int = 1
    kernel_dims: tuple[int, ...] = (1, 2)

    def __post_init__(self):
        if self.max_degree < 0 or self.operator_degree < 0:
            raise ValueError("degrees must be >= 0")
        if self.n_random < 1 or self.threads < 1:
            raise ValueError("n_random and threads must be >= 1")
        if not self.tol_scale > 0:
            raise ValueError("tol_scale must be positive")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("dims must be a nonempty list of positive integers")

    @classmethod
    def from_env(cls, **kwargs) -> "SuiteConfig":
        """Config whose thread count comes from ``GH_THREADS`` when set."""
        env = os.environ.get("GH_THREADS")
        if env and "threads" not in kwargs:
            kwargs["threads"] = max(1, int(env))
        return cls(**kwargs)

    def tol(self, check_id: str, base: float) -> float:
        return self.tolerances.get(check_id, base) * self.tol_scale

    def rng(self, check_id: str) -> np.random.Generator:
        """Generator private to one check, so check order and threading do not matter."""
        salt = sum((i + 1) * ord(c) for i, c in enumerate(check_id))
        return np.random.default_rng([self.seed, salt])

    def as_document(self) -> dict:
        return {
            "seed": self.seed,
            "dims": list(self.dims),
            "max_degree": self.max_degree,
            "operator_degree": self.operator_degree,
            "n_random": self.n_random,
            "tol_scale": self.tol_scale,
            "tolerances": dict(sorted(self.tolerances.items())),
            "kernel_dims": list(self.kernel_dims),
        }


def _expansions(cfg: SuiteConfig, rng, degree: int, count: int | None = None, dims=None):
    count = cfg.n_random if count is None else count
    dims = cfg.dims if dims is None else dims
    out = []
    for i in range(count):
        d = dims[i % len(dims)]
        out.append(random_expansion(d, degree, rng))
    return out


def _points(rng, dim: int, n: int, radius: float = 2.0) -> np.ndarray:
    return rng.uniform(-radius, radius, size=(n, dim)) / math.sqrt(dim)


# ---------------------------------------------------------------- stable law


def _contour_derivative(fn: Callable[[np.ndarray], np.ndarray], t: float, k: int, radius: float, n: int = 64) -> float:
    """``d^k fn / dt^k`` at ``t`` from Cauchy's formula on a circle (fn entire in t)."""
    theta = 2.0 * math.pi * np.arange(n) / n
    z = t + radius * np.exp(1j * theta)
    vals = fn(z) * np.exp(-1j * k * theta)
    return float((math.factorial(k) * vals.mean() / radius**k).real)


def _check_derivative_form(cfg, rec: _Recorder):
    rng = cfg.rng("stable.derivative-form")
    samples = rng.uniform(0.1, 5.0, size=(8, 2))
    for k in range(0, 7):
        form = stable_derivative_form(k)
        bad = [key for key in form.terms if 2 * key[1] - key[0] != k]
        rec.le(f"k={k} terms violating 2j-i=k", len(bad), 0)
        devs = []
        for t, s in samples:
            def g(z, s=s):
                return z * np.exp(-z * z / (4.0 * s)) / (2.0 * math.sqrt(math.pi) * s**1.5)

            ref = _contour_derivative(g, t, k, radius=0.5 * math.sqrt(s))
            val = float(form.evaluate(t, s))
            scale = sum(abs(float(a)) * t**i * s ** (-j) for (i, j), a in form.terms.items()) * stable_density(t, s)
            devs.append(abs(val - ref) / max(abs(ref), scale))
        rec.worst(f"k={k} max relative deviation from contour derivative", devs)


def _check_neg_moments(cfg, rec):
    for k in range(0, 5):
        for t in (0.25, 1.0, 4.0):
            exact = stable_moment_constant(k) / t ** (2 * k)
            rec.close(f"k={k} t={t} relative error", stable_neg_moment(k, t), exact, relative=True)
    rec.close("k=1 t=1 value", stable_neg_moment(1, 1.0), 2.0, relative=True)
    rec.close("k=2 t=2 value", stable_neg_moment(2, 2.0), 0.75, relative=True)


def _abs_deriv_mass_adaptive(k: int, t: float) -> float:
    """``int |d^k_t g(t, s)| ds`` by adaptive quadrature in ``s``, split at sign changes."""
    form = stable_derivative_form(k)
    c = form.v_polynomial()
    coeffs = np.trim_zeros(c[::-1], "f")
    roots = np.roots(coeffs) if coeffs.size > 1 else np.array([])
    # t^k factor vanishes where sum c_j v^(2j) = 0, i.e. at s = t^2 / (4 w)
    s_breaks = sorted(t * t / (4.0 * w.real) for w in roots if abs(w.imag) < 1e-10 and w.real > 0)
    edges = [0.0] + s_breaks + [np.inf]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda s: abs(float(form.evaluate(t, s))), a, b, limit=400,
                                epsabs=1e-15, epsrel=1e-12)[0]
    return total


def _check_tv_bound(cfg, rec):
    for k in range(0, 7):
        mk = stable_abs_deriv_constant(k)
        rec.le(f"k={k} t^k int|d^k g| ds vs chain constant", mk, stable_tv_constant(k))
        if k <= 4:
            for t in (0.5, 1.0, 2.0):
                rec.close(f"k={k} t={t} t^k * adaptive mass vs M_k", t**k * _abs_deriv_mass_adaptive(k, t), mk,
                          relative=True)


def _check_laplace(cfg, rec):
    for lam in (1.0, 4.0, 9.0, 25.0):
        for t in (0.1, 1.0, 5.0):
            rec.close(f"lambda={lam} t={t}", stable_laplace(t, lam), math.exp(-t * math.sqrt(lam)))
    for t in (0.3, 3.0):
        mass = integrate.quad(lambda s: stable_density(t, s), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        rec.close(f"t={t} total mass", mass, 1.0)
        rec.close(f"t={t} zeroth moment", stable_neg_moment(0, t), 1.0)


# ---------------------------------------------------------------- semigroups


def _check_mehler(cfg, rec):
    rng = cfg.rng("semigroup.mehler")
    for f in _expansions(cfg, rng, cfg.operator_degree, count=4):
        grid = gauss_hermite_grid(cfg.operator_degree // 2 + 1, f.dim)
        devs = []
        for t in (0.1, 0.7, 2.0, 5.0):
            Tf = ou_apply_spectral(f, t)
            for x in _points(rng, f.dim, 4):
                devs.append(abs(ou_apply_mehler(f, t, x, grid) - Tf(x)))
        rec.worst(f"d={f.dim} max |Mehler - spectral|", devs)
    # Lebesgue-density form of the OU kernel against the spectral value
    f = _expansions(cfg, rng, 4, count=1, dims=(1,))[0]
    ys, w = np.polynomial.legendre.leggauss(200)
    devs = []
    for t in (0.3, 1.5):
        for x in (-1.0, 0.4):
            c = math.exp(-t) * x
            half = 12.0 * math.sqrt(-math.expm1(-2 * t))
            y = c + half * ys
            val = float(np.sum(half * w * ou_kernel([t], [x], y[:, None])[:, 0] * f(y[:, None])))
            devs.append(abs(val - ou_apply_spectral(f, t)([x])))
    rec.worst("d=1 max |kernel integral - spectral|", devs)


def _check_subordination(cfg, rec):
    rng = cfg.rng("semigroup.subordination")
    for f in _expansions(cfg, rng, cfg.operator_degree, count=4):
        d1, d2 = [], []
        for t in (0.1, 0.5, 2.0, 5.0):
            Pf = poisson_apply_spectral(f, t)
            for x in _points(rng, f.dim, 3):
                ref = Pf(x)
                d1.append(abs(poisson_apply_subordination(f, t, x) - ref))
                d2.append(abs(poisson_apply_subordination(f, t, x, inner="mehler") - ref))
        rec.worst(f"d={f.dim} max |subordination(T spectral) - spectral P|", d1)
        rec.worst(f"d={f.dim} max |subordination(T Mehler) - spectral P|", d2)


def _check_kernel(cfg, rec):
    rng = cfg.rng("semigroup.poisson-kernel")
    # p(1, 0, 0) against the OU kernel composed with the stable density by adaptive quadrature
    ref = integrate.quad(lambda s: ou_kernel([s], [0.0], [[0.0]])[0, 0] * stable_density(1.0, s), 0, np.inf,
                         epsabs=1e-14, epsrel=1e-12, limit=400)[0]
    rec.close("p(1,0,0) vs adaptive subordination", poisson_kernel(1.0, [0.0], [0.0]), ref)
    one = HermiteExpansion.constant(1)
    rec.close("int p(1, 0.5, y) dy", poisson_apply_kernel(one, 1.0, [0.5]), 1.0)
    h1 = HermiteExpansion.basis((1,))
    rec.close("P_1 h_1(0.5) through the kernel", poisson_apply_kernel(h1, 1.0, [0.5]), math.exp(-1) * math.sqrt(2) * 0.5)
    for d in cfg.kernel_dims:
        f = random_expansion(d, cfg.operator_degree, rng)
        cases = [(0.1, 2), (1.0, 2), (5.0, 2)] if d == 1 else [(0.5, 1), (2.0, 1)]
        devs = []
        for t, npts in cases:
            Pf = poisson_apply_spectral(f, t)
            for x in _points(rng, d, npts):
                devs.append(abs(poisson_apply_kernel(f, t, x) - Pf(x)))
        rec.worst(f"d={d} max |kernel - spectral P|", devs)


def _check_semigroup_law(cfg, rec):
    rng = cfg.rng("semigroup.semigroup-law")
    for f in _expansions(cfg, rng, cfg.operator_degree, count=4):
        scale = max(f.abs_sum(), 1e-300)
        for s, t in ((0.3, 0.9), (1.0, 2.5)):
            a = ou_apply_spectral(ou_apply_spectral(f, s), t).max_abs_diff(ou_apply_spectral(f, s + t))
            b = poisson_apply_spectral(poisson_apply_spectral(f, s), t).max_abs_diff(poisson_apply_spectral(f, s + t))
            rec.le(f"d={f.dim} s={s} t={t} OU law residual", a / scale, rec.tolerance)
            rec.le(f"d={f.dim} s={s} t={t} Poisson law residual", b / scale, rec.tolerance)


# ---------------------------------------------------------------- lemmas


def _check_maximal(cfg, rec):
    rng = cfg.rng("lemma.maximal-bound")
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        for k in (1, 2, 3):
            mk = stable_abs_deriv_constant(k)
            ratios = []
            for x in _points(rng, f.dim, 4):
                tstar = ou_maximal(f, x)
                ts = np.array([0.05, 0.3, 1.0, 3.0])
                vals = ts**k * np.abs(poisson_derivative_values(f, ts, k, x[None, :])[:, 0])
                ratios.append(float(np.max(vals)) / max(mk * tstar, 1e-300))
            rec.le(f"d={f.dim} k={k} max t^k|d^k P_t f| / (M_k T*f)", max(ratios), 1.0 + rec.tolerance)


def _lemma_pairs(alpha):
    k0 = choose_k(alpha)
    return [(k0 + 1, k0), (k0 + 2, k0)]


def _check_besov_infty_k(cfg, rec):
    rng = cfg.rng("lemma.besov-infty-k-equivalence")
    tol = rec.tolerance
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        if f.is_constant():
            continue
        for alpha in (0.5, 1.3):
            for k, l in _lemma_pairs(alpha):
                Ak = besov_infty_constant(f, SpaceParams(alpha, 2, "inf", k=k))
                Al = besov_infty_constant(f, SpaceParams(alpha, 2, "inf", k=l))
                rec.le(f"d={f.dim} a={alpha} A_{l}/(D A_{k})", Al / (hardy_constant(alpha, k, l) * Ak), 1 + tol)
                rec.le(f"d={f.dim} a={alpha} A_{k}/(C 2^(k-a) A_{l})", Ak / (k_shift_constant(alpha, k, l) * Al), 1 + tol)


def _check_besov_k(cfg, rec):
    rng = cfg.rng("lemma.besov-k-equivalence")
    tol = rec.tolerance
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        if f.is_constant():
            continue
        for alpha in (0.5, 1.3):
            for p in (2.0, 4.0):
                for k, l in _lemma_pairs(alpha):
                    Sk = besov_seminorm(f, SpaceParams(alpha, p, 2, k=k))
                    Sl = besov_seminorm(f, SpaceParams(alpha, p, 2, k=l))
                    rec.le(f"d={f.dim} a={alpha} p={p} S_{l}/(D S_{k})", Sl / (hardy_constant(alpha, k, l) * Sk), 1 + tol)
                    rec.le(f"d={f.dim} a={alpha} p={p} S_{k}/(A S_{l})", Sk / (k_shift_constant(alpha, k, l) * Sl), 1 + tol)


def _check_monotonicity(cfg, rec):
    rng = cfg.rng("lemma.monotonicity")
    ts = np.geomspace(1e-3, 20.0, 50)
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        for p in (2.0, 4.0):
            grid = besov_grid(f.dim, f.degree(), p)
            fp = lp_norm(f, p, grid)
            for k in (0, 1, 2, 3):
                N = derivative_norm_profile(f, k, p, ts, grid)
                rise = float(np.max(np.diff(N))) if N.size > 1 else 0.0
                top = max(float(N.max()), 1e-300)
                rec.le(f"d={f.dim} p={p} k={k} largest increase / max", rise / top, rec.tolerance)
                if fp > 0:
                    rec.le(f"d={f.dim} p={p} k={k} max t^k N(t) / (C_k ||f||)",
                           float(np.max(ts**k * N)) / (stable_tv_constant(k) * fp), 1.0)


def _check_triebel_k(cfg, rec):
    rng = cfg.rng("lemma.triebel-k-equivalence")
    tol = rec.tolerance
    for f in _expansions(cfg, rng, cfg.max_degree, count=4):
        if f.is_constant():
            continue
        for alpha in (0.5, 1.3):
            for k, l in _lemma_pairs(alpha):
                Sk = triebel_seminorm(f, SpaceParams(alpha, 2, 2, k=k))
                Sl = triebel_seminorm(f, SpaceParams(alpha, 2, 2, k=l))
                rec.le(f"d={f.dim} a={alpha} S_{l}/(D S_{k})", Sl / (hardy_constant(alpha, k, l) * Sk), 1 + tol)
                rec.info(f"d={f.dim} a={alpha} S_{k}/S_{l}", Sk / Sl)
                # same pairs with p != q exercise the pointwise form
                Sk4 = triebel_seminorm(f, SpaceParams(alpha, 2, 4, k=k))
                Sl4 = triebel_seminorm(f, SpaceParams(alpha, 2, 4, k=l))
                rec.le(f"d={f.dim} a={alpha} q=4 S_{l}/(D S_{k})", Sl4 / (hardy_constant(alpha, k, l) * Sk4), 1 + tol)


# ---------------------------------------------------------------- fractional


_ALPHAS = (0.5, 1.0, 1.7, 3.0)


def _check_riesz_identity(cfg, rec):
    rng = cfg.rng("fractional.riesz-derivative-inverse")
    fs = _expansions(cfg, rng, cfg.operator_degree, count=4)
    fs.append(HermiteExpansion(1, {(0,): 1.0, (2,): 1.0}))
    fs.append(HermiteExpansion.zero(1))
    for f in fs:
        for alpha in (0.7, 1.5) + _ALPHAS:
            ok, res = riesz_derivative_identity_check(f, alpha)
            rec.le(f"d={f.dim} a={alpha} composition residual", res / max(f.abs_sum(), 1.0), rec.tolerance)


def _check_riesz_integral(cfg, rec):
    rng = cfg.rng("fractional.riesz-integral")
    for f in _expansions(cfg, rng, cfg.operator_degree, count=4):
        for alpha in _ALPHAS:
            Rf = riesz_potential(f, alpha)
            g = pi0(f)
            d1, d2 = [], []
            for x in _points(rng, f.dim, 3):
                d1.append(abs(riesz_via_integral(f, alpha, x) - Rf(x)))
                d2.append(abs(riesz_via_derivative_integral(g, alpha, x) - Rf(x)))
            rec.worst(f"d={f.dim} a={alpha} |integral - multiplier|", d1)
            rec.worst(f"d={f.dim} a={alpha} |derivative integral - multiplier|", d2)
    h1 = HermiteExpansion.basis((1,))
    rec.close("h_1 a=1 x=1 through subordinated P_t", riesz_via_integral(h1, 1.0, [1.0], inner="subordination"), math.sqrt(2))


def _check_bessel(cfg, rec):
    rng = cfg.rng("fractional.bessel")
    for f in _expansions(cfg, rng, cfg.operator_degree, count=4):
        for alpha in _ALPHAS:
            Jf = bessel_potential(f, alpha)
            devs = [abs(bessel_via_integral(f, alpha, x) - Jf(x)) for x in _points(rng, f.dim, 3)]
            rec.worst(f"d={f.dim} a={alpha} |integral - multiplier|", devs)
        scale = max(f.abs_sum(), 1e-300)
        for a, b in ((0.5, 1.0), (1.7, 3.0)):
            law = bessel_potential(bessel_potential(f, a), b).max_abs_diff(bessel_potential(f, a + b))
            rec.le(f"d={f.dim} J_{a} J_{b} = J_{a + b} residual", law / scale, 1e-14 * cfg.tol_scale)
            back = bessel_inverse(bessel_potential(f, a), a).max_abs_diff(f)
            rec.le(f"d={f.dim} inverse of J_{a} residual", back / scale, 1e-14 * cfg.tol_scale)


# ---------------------------------------------------------------- spaces


def _check_closed_forms(cfg, rec):
    cases = [((b,), a, p, q) for b in range(1, 5) for a in (0.0, 0.5, 1.3) for p, q in ((2, 2), (4, 2), (2, 4))]
    if 2 in cfg.dims:
        cases += [((1, 1), 0.5, 2, 2), ((2, 1), 1.3, 4, 2), ((1, 2), 0.5, 2, 4)]
    devs_b, devs_f = [], []
    for beta, a, p, q in cases:
        P = SpaceParams(a, p, q)
        f = HermiteExpansion.basis(beta)
        ref = hermite_closed_form_seminorm(beta, P)
        devs_b.append(abs(besov_seminorm(f, P) / ref - 1))
        devs_f.append(abs(triebel_seminorm(f, P) / ref - 1))
    rec.worst("max relative error, Besov seminorm of h_beta", devs_b)
    rec.worst("max relative error, Triebel seminorm of h_beta", devs_f)
    rec.close("h_2 a=0.5 p=q=2 spot value", besov_seminorm(HermiteExpansion.basis((2,)), SpaceParams(0.5, 2, 2)),
              2 ** -0.25, relative=True)
    h1 = HermiteExpansion.basis((1,))
    rec.close("A_1(h_1) a=0.5", besov_infty_constant(h1, SpaceParams(0.5, 2, "inf")),
              math.sqrt(0.5) * math.exp(-0.5), relative=True)
    rec.close("g_1(h_1)(1)", gk_function(h1, 1, [1.0]), math.sqrt(2) / 2, relative=True)
    h4 = HermiteExpansion.basis((4,))
    rec.close("g_2(h_4)(0.7)", gk_function(h4, 2, [0.7]), abs(h4([0.7])) * 4 * math.sqrt(6 / 256), relative=True)


def _check_besov_inclusion(cfg, rec):
    rng = cfg.rng("spaces.besov-inclusion")
    tol = rec.tolerance
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        if f.is_constant():
            continue
        grid = besov_grid(f.dim, f.degree(), 2)
        fp = lp_norm(f, 2, grid)
        # same alpha, q1 <= q2
        for alpha in (0.5, 1.3):
            k = choose_k(alpha)
            for q1, q2 in ((1.0, 2.0), (2.0, 4.0)):
                s1 = besov_seminorm(f, SpaceParams(alpha, 2, q1, k=k), grid=grid)
                s2 = besov_seminorm(f, SpaceParams(alpha, 2, q2, k=k), grid=grid)
                a_inf = besov_infty_constant(f, SpaceParams(alpha, 2, "inf", k=k), grid=grid)
                c = infty_from_q_constant(alpha, k, q1)
                rec.le(f"d={f.dim} a={alpha} q1={q1} A_k/(C S_q1)", a_inf / (c * s1), 1 + tol)
                rec.le(f"d={f.dim} a={alpha} q1={q1} q2={q2} S_q2/(C^(1-q1/q2) S_q1)",
                       s2 / (c ** (1 - q1 / q2) * s1), 1 + tol)
        # alpha1 > alpha2 > 0, common k
        for a1, a2, q1, q2 in ((1.3, 0.5, 2.0, 1.0), (0.8, 0.3, 1.0, 4.0)):
            k = choose_k(a1)
            s1 = besov_seminorm(f, SpaceParams(a1, 2, q1, k=k), grid=grid)
            s2 = besov_seminorm(f, SpaceParams(a2, 2, q2, k=k), grid=grid)
            c = infty_from_q_constant(a1, k, q1)
            bound = ((c * s1) ** q2 / ((a1 - a2) * q2) + (stable_tv_constant(k) * fp) ** q2 / (a2 * q2)) ** (1 / q2)
            rec.le(f"d={f.dim} a1={a1} a2={a2} S_2/bound", s2 / bound, 1 + tol)


def _check_triebel_inclusion(cfg, rec):
    rng = cfg.rng("spaces.triebel-inclusion")
    ratios = []
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        if f.is_constant():
            continue
        for a1, a2, q1, q2 in ((1.3, 0.5, 2.0, 2.0), (1.3, 0.5, 4.0, 2.0), (0.8, 0.3, 2.0, 1.0)):
            k = choose_k(a1)
            grid = besov_grid(f.dim, f.degree(), 2)
            s1 = triebel_seminorm(f, SpaceParams(a1, 2, q1, k=k))
            s2 = triebel_seminorm(f, SpaceParams(a2, 2, q2, k=k))
            ratios.append(s2 / (s1 + lp_norm(f, 2, grid)))
    rec.info("fitted C = max F(a2,q2) / (F(a1,q1) + ||f||)", max(ratios, default=0.0))
    rec.le("all ratios finite (count of non-finite)", sum(not math.isfinite(r) for r in ratios), 0)


def _check_bf_comparison(cfg, rec):
    rng = cfg.rng("spaces.besov-triebel-comparison")
    eq, pq, qp = [], [], []
    for f in _expansions(cfg, rng, cfg.max_degree):
        for alpha in (0.5,):
            b = besov_norm(f, SpaceParams(alpha, 2, 2))
            t = triebel_norm(f, SpaceParams(alpha, 2, 2))
            eq.append(abs(b - t) / max(b, 1e-300))
            b42 = besov_norm(f, SpaceParams(alpha, 4, 2))
            t42 = triebel_norm(f, SpaceParams(alpha, 4, 2))
            pq.append((t42 - b42) / max(b42, 1e-300))
            b24 = besov_norm(f, SpaceParams(alpha, 2, 4))
            t24 = triebel_norm(f, SpaceParams(alpha, 2, 4))
            qp.append((b24 - t24) / max(t24, 1e-300))
    rec.worst("p=q=2 max |B - F| / B", eq, 1e-8 * cfg.tol_scale)
    rec.worst("p=4>q=2 max (F - B) / B", pq, 1e-9 * cfg.tol_scale)
    rec.worst("q=4>p=2 max (B - F) / F", qp, 1e-9 * cfg.tol_scale)


# ---------------------------------------------------------------- theorems


def _check_sobolev_embedding(cfg, rec):
    rng = cfg.rng("theorem.sobolev-embedding")
    r_f2, r_bpp = [], []
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        for alpha in (0.5, 1.3):
            for p in (2.0, 4.0):
                sob = sobolev_norm(f, alpha, p, grid_for(f.dim, f.degree(), p))
                r_f2.append(triebel_norm(f, SpaceParams(alpha, p, 2)) / sob)
                if p >= 2:
                    b = besov_norm(f, SpaceParams(alpha, p, p))
                    t = triebel_norm(f, SpaceParams(alpha, p, p))
                    rec.le(f"d={f.dim} a={alpha} p={p} |B_pp - F_pp| / B_pp", abs(b - t) / b, 1e-8 * cfg.tol_scale)
                    r_bpp.append(b / sob)
            # p <= 2: through B_{p,2} <= F_{p,2}
            b2 = besov_norm(f, SpaceParams(alpha, 2, 2))
            t2 = triebel_norm(f, SpaceParams(alpha, 2, 2))
            rec.le(f"d={f.dim} a={alpha} p=2 B_p2 - F_p2 (relative)", (b2 - t2) / t2, 1e-9 * cfg.tol_scale)
    rec.info("max ||f||_F(a,p,2) / ||f||_(p,a)", max(r_f2))
    rec.info("max ||f||_B(a,p,p) / ||f||_(p,a)", max(r_bpp))
    rec.le("non-finite ratios", sum(not math.isfinite(r) for r in r_f2 + r_bpp), 0)


def check_interpolation(f: HermiteExpansion, r0: float, r1: float, eta: float, grid: GaussHermiteGrid | None = None,
                        tol: float = 1e-9) -> CheckReport:
    """``||f||_r <= ||f||_r0**(1-eta) ||f||_r1**eta`` with ``1/r = (1-eta)/r0 + eta/r1``."""
    t0 = time.perf_counter()
    if not (1 < r0 < math.inf and 1 < r1 < math.inf and 0 < eta < 1):
        raise ValueError("need 1 < r0, r1 < inf and 0 < eta < 1")
    r = 1.0 / ((1 - eta) / r0 + eta / r1)
    if grid is None:
        grid = grid_for(f.dim, f.degree(), 2 * math.ceil(max(r0, r1) / 2))
    rec = _Recorder(tol)
    lhs = lp_norm(f, r, grid)
    rhs = lp_norm(f, r0, grid) ** (1 - eta) * lp_norm(f, r1, grid) ** eta
    rec.info("||f||_r", lhs)
    rec.le("||f||_r - bound (relative)", (lhs - rhs) / max(rhs, 1e-300), tol)
    return _report("theorem.interpolation", "Hoelder interpolation of Gaussian L^p norms", rec, t0)


def _check_interpolation(cfg, rec):
    rng = cfg.rng("theorem.interpolation")
    triples = ((2.0, 4.0, 0.5), (1.5, 6.0, 0.3), (3.0, 8.0, 0.7))
    for f in _expansions(cfg, rng, cfg.max_degree):
        grid = grid_for(f.dim, f.degree(), 8)
        for r0, r1, eta in triples:
            sub = check_interpolation(f, r0, r1, eta, grid, tol=rec.tolerance)
            rec.items.extend(o for o in sub.observed if o.bound is not None)
    # seminorm interpolation with a shared k, time rule and grid
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        if f.is_constant():
            continue
        m = math.sqrt(f.spectral_gap())
        for (a0, p0, q0), (a1, p1, q1), theta in (((0.3, 2, 2), (1.2, 4, 4), 0.5), ((0.0, 4, 2), (0.9, 2, 4), 0.25)):
            a = (1 - theta) * a0 + theta * a1
            p = 1 / ((1 - theta) / p0 + theta / p1)
            q = 1 / ((1 - theta) / q0 + theta / q1)
            k = choose_k(max(a0, a1))
            quad = TimeQuadrature.covering([((k - aa) * qq, qq * m) for aa, qq in ((a0, q0), (a1, q1), (a, q))])
            grid = gauss_hermite_grid(max(40 if f.dim == 1 else 24, 2 * f.degree() + 1), f.dim)
            vals = {}
            for name, norm in (("B", besov_seminorm), ("F", triebel_seminorm)):
                s0 = norm(f, SpaceParams(a0, p0, q0, k=k), quad, grid)
                s1 = norm(f, SpaceParams(a1, p1, q1, k=k), quad, grid)
                s = norm(f, SpaceParams(a, p, q, k=k), quad, grid)
                vals[name] = (s, s0 ** (1 - theta) * s1**theta)
                rec.le(f"d={f.dim} theta={theta} {name}: S - S0^(1-th) S1^th (relative)",
                       (vals[name][0] - vals[name][1]) / vals[name][1], rec.tolerance)


def check_contraction(
    f: HermiteExpansion,
    params: SpaceParams,
    s: float,
    *,
    bessel_order: float | None = None,
    tol: float = 1e-9,
) -> CheckReport:
    """``P_s``, ``T_s`` and ``J_beta`` do not increase the Besov and Triebel norms.

    ``bessel_order`` defaults to ``s``. The first observations record the
    ratio of seminorms for ``P_s`` (``exp(-s)`` on ``h_1``).
    """
    t0 = time.perf_counter()
    if not s > 0:
        raise ValueError("s must be positive")
    beta = s if bessel_order is None else bessel_order
    rec = _Recorder(tol)
    ops = (
        (f"P_{s}", poisson_apply_spectral(f, s)),
        (f"T_{s}", ou_apply_spectral(f, s)),
        (f"J_{beta}", bessel_potential(f, beta)),
    )
    spaces = [("B", besov_norm, besov_seminorm)]
    if not math.isinf(params.q) and not math.isinf(params.p):
        spaces.append(("F", triebel_norm, triebel_seminorm))
    for name, norm, semi in spaces:
        grid = besov_grid(f.dim, f.degree(), params.p) if name == "B" else None
        base = norm(f, params, grid=grid)
        base_semi = semi(f, params, grid=grid)
        for label, g in ops:
            val = norm(g, params, grid=grid)
            if label.startswith("P") and base_semi > 0:
                rec.info(f"{name} seminorm ratio {label}", semi(g, params, grid=grid) / base_semi)
            rec.le(f"{name} norm {label} f - norm f (relative)", (val - base) / max(base, 1e-300), tol)
    return _report("theorem.boundedness", "P_s, T_s and J_beta are bounded on B and F", rec, t0)


def _check_boundedness(cfg, rec):
    rng = cfg.rng("theorem.boundedness")
    fs = _expansions(cfg, rng, cfg.max_degree, count=8)
    fs.append(HermiteExpansion.basis((1,)))
    fs.append(HermiteExpansion.constant(1))
    for f in fs:
        for params in (SpaceParams(0.5, 2, 2), SpaceParams(1.3, 4, 2)):
            for s in (0.1, 1.0):
                for beta in (0.5, 2.0):
                    sub = check_contraction(f, params, s, bessel_order=beta, tol=rec.tolerance)
                    rec.items.extend(o for o in sub.observed if o.bound is not None)
    sub = check_contraction(HermiteExpansion.basis((1,)), SpaceParams(0.5, 2, 2), 1.0)
    ratio = [o.value for o in sub.observed if o.label.startswith("B seminorm ratio")][0]
    rec.close("h_1 Besov seminorm ratio under P_1 vs exp(-1)", ratio, math.exp(-1))


def check_smoothing(
    f: HermiteExpansion,
    alpha: float,
    beta: float,
    params: SpaceParams,
    *,
    tol: float = 1e-5,
) -> CheckReport:
    """``J_beta`` maps ``B^alpha_{p,q}`` into ``B^{alpha+beta}_{p,q}``.

    Records the ratio of target to source norm. For a single ``h_b`` also
    compares with ``(1+|b|)**(-beta/2) (||h_b||_p + closed-form seminorm)``.
    """
    t0 = time.perf_counter()
    if not beta > 0:
        raise ValueError("beta must be positive")
    rec = _Recorder(tol)
    src = SpaceParams(alpha, params.p, params.q)
    dst = SpaceParams(alpha + beta, params.p, params.q)
    g = bessel_potential(f, beta)
    target = besov_norm(g, dst)
    source = besov_norm(f, src)
    rec.info("target norm", target)
    rec.info("ratio target / source", target / source if source > 0 else 0.0)
    rec.le("non-finite norms", int(not (math.isfinite(target) and math.isfinite(source))), 0)
    if len(f) == 1:
        (b, c), = f.items()
        grid = besov_grid(f.dim, b.order, params.p)
        hb = lp_norm(HermiteExpansion.basis(b), params.p, grid)
        semi = hermite_closed_form_seminorm(b, dst, grid) if b.order > 0 else 0.0
        closed = abs(c) * (1 + b.order) ** (-beta / 2) * (hb + semi)
        rec.close("relative deviation from closed form", target, closed, tol, relative=True)
    return _report("theorem.smoothing", "J_beta is bounded from B^alpha to B^(alpha+beta)", rec, t0)


def _check_smoothing(cfg, rec):
    rng = cfg.rng("theorem.smoothing")
    for b in range(1, 5):
        for alpha, beta, (p, q) in ((0.5, 1.0, (2, 2)), (0.0, 0.5, (4, 2)), (1.3, 2.0, (2, 4))):
            sub = check_smoothing(HermiteExpansion.basis((b,)), alpha, beta, SpaceParams(alpha, p, q), tol=rec.tolerance)
            rec.items.extend(o for o in sub.observed if o.bound is not None)
    ratios = []
    for f in _expansions(cfg, rng, cfg.max_degree, count=6):
        sub = check_smoothing(f, 0.5, 1.0, SpaceParams(0.5, 2, 2))
        ratios.extend(o.value for o in sub.observed if o.label.startswith("ratio"))
    rec.info("max ratio over random expansions", max(ratios, default=0.0))
    rec.le("non-finite ratios", sum(not math.isfinite(r) for r in ratios), 0)


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class _Check:
    check_id: str
    suite: str
    topic: str
    tolerance: float
    run: Callable


CHECKS: tuple[_Check, ...] = (
    _Check("stable.derivative-form", "stable", "t-derivatives of the stable density as a finite sum", 1e-6, _check_derivative_form),
    _Check("stable.neg-moments", "stable", "negative moments of the stable law", 1e-8, _check_neg_moments),
    _Check("stable.tv-bound", "stable", "total variation of t-derivatives of the stable law", 1e-8, _check_tv_bound),
    _Check("stable.laplace", "stable", "Laplace transform of the stable law", 1e-6, _check_laplace),
    _Check("semigroup.mehler", "semigroup", "Mehler formula and OU kernel vs Hermite multipliers", 1e-6, _check_mehler),
    _Check("semigroup.subordination", "semigroup", "Poisson-Hermite semigroup by subordination", 1e-6, _check_subordination),
    _Check("semigroup.poisson-kernel", "semigroup", "Poisson-Hermite kernel", 1e-6, _check_kernel),
    _Check("semigroup.semigroup-law", "semigroup", "semigroup property of T_t and P_t", 1e-14, _check_semigroup_law),
    _Check("lemma.maximal-bound", "lemmas", "|d^k P_t f| bounded by the OU maximal function", 1e-9, _check_maximal),
    _Check("lemma.besov-infty-k-equivalence", "lemmas", "A_k(f) for different k", 1e-6, _check_besov_infty_k),
    _Check("lemma.besov-k-equivalence", "lemmas", "Besov seminorms for different k", 1e-9, _check_besov_k),
    _Check("lemma.monotonicity", "lemmas", "||d^k P_t f||_p is non-increasing and O(t^-k)", 1e-12, _check_monotonicity),
    _Check("lemma.triebel-k-equivalence", "lemmas", "Triebel seminorms for different k", 1e-9, _check_triebel_k),
    _Check("fractional.riesz-derivative-inverse", "fractional", "I_alpha D_alpha = D_alpha I_alpha = Pi_0", 1e-12, _check_riesz_identity),
    _Check("fractional.riesz-integral", "fractional", "Riesz potential as a Poisson semigroup integral", 1e-6, _check_riesz_integral),
    _Check("fractional.bessel", "fractional", "Bessel potential integral form and semigroup law", 1e-6, _check_bessel),
    _Check("spaces.closed-form", "spaces", "B and F norms of Hermite polynomials", 1e-5, _check_closed_forms),
    _Check("spaces.besov-inclusion", "spaces", "inclusions between Besov spaces", 1e-9, _check_besov_inclusion),
    _Check("spaces.triebel-inclusion", "spaces", "inclusions between Triebel spaces", 1e-9, _check_triebel_inclusion),
    _Check("spaces.besov-triebel-comparison", "spaces", "B versus F for p = q, p > q, q > p", 1e-9, _check_bf_comparison),
    _Check("theorem.sobolev-embedding", "theorems", "Gaussian Sobolev spaces embed in F and B", 1e-9, _check_sobolev_embedding),
    _Check("theorem.interpolation", "theorems", "interpolation of L^p, B and F", 1e-9, _check_interpolation),
    _Check("theorem.boundedness", "theorems", "P_s, T_s and J_beta are bounded on B and F", 1e-9, _check_boundedness),
    _Check("theorem.smoothing", "theorems", "J_beta is bounded from B^alpha to B^(alpha+beta)", 1e-5, _check_smoothing),
)

SUITES = ("stable", "semigroup", "lemmas", "fractional", "spaces", "theorems")


def check_ids(suite: str = "all") -> list[str]:
    """Ids of the checks in ``suite``, in execution order."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    return [c.check_id for c in CHECKS if suite == "all" or c.suite == suite]


def _report(check_id: str, topic: str, rec: _Recorder, t0: float, message: str = "") -> CheckReport:
    observed = tuple(rec.items)
    status = "fail" if any(o.violated for o in observed) else "pass"
    return CheckReport(check_id, status, observed, rec.tolerance, topic, int(round(1000 * (time.perf_counter() - t0))),
                       message)


def _run_one(check: _Check, cfg: SuiteConfig) -> CheckReport:
    t0 = time.perf_counter()
    rec = _Recorder(cfg.tol(check.check_id, check.tolerance))
    try:
        check.run(cfg, rec)
    except Exception as exc:  # a crashing check is a failed check, not a crashed suite
        rec.items.append(Observation(f"raised {type(exc).__name__}", math.nan))
        return _report(check.check_id, check.topic, rec, t0, message=str(exc))
    return _report(check.check_id, check.topic, rec, t0)


def run_suite(config: SuiteConfig | None = None, suite: str = "all") -> list[CheckReport]:
    """Run the checks of ``suite`` and return their reports in registry order.

    Failures are reported, never raised. Each check draws from its own
    seeded generator, so the reports do not depend on ``config.threads``.
    """
    cfg = config or SuiteConfig()
    selected = [c for c in CHECKS if c.check_id in set(check_ids(suite))]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(lambda c: _run_one(c, cfg), selected))
    return [_run_one(c, cfg) for c in selected]


def report_document(reports: list[CheckReport], config: SuiteConfig, suite: str = "all",
                    timings: bool = False) -> dict:
    """Serializable summary of a run. Without ``timings`` it is byte-stable."""
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
    return {
        "suite": suite,
        "config": config.as_document(),
        "summary": counts,
        "reports": [r.as_document(timings) for r in reports],
    }


# ---------------------------------------------------------------- tables


def hermite_norm_table(beta_range, alphas, p, q, k: int | None = None) -> list[dict]:
    """Rows comparing numeric and closed-form Besov seminorms of ``h_b`` (1-D)."""
    p = as_exponent(p)
    rows = []
    for b in beta_range:
        for a in alphas:
            params = SpaceParams(a, p, q, k=k)
            f = HermiteExpansion.basis((b,))
            num = besov_seminorm(f, params)
            ref = hermite_closed_form_seminorm((b,), params)
            rows.append({
                "beta": b, "alpha": params.alpha, "p": params.p, "q": params.q, "k": params.k,
                "seminorm_numeric": num, "seminorm_closed_form": ref, "rel_err": abs(num - ref) / ref,
            })
    return rows


def stable_moment_table(ks, ts) -> list[dict]:
    """Rows comparing numeric negative moments of the stable law with ``C_k / t**(2k)``."""
    rows = []
    for k in ks:
        for t in ts:
            num = stable_neg_moment(k, t)
            ref = stable_moment_constant(k) / t ** (2 * k)
            rows.append({"k": k, "t": t, "numeric": num, "closed_form": ref, "rel_err": abs(num - ref) / ref})
    return rows
