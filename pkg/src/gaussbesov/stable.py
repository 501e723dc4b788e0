"""
The one-sided stable law of order 1/2 and its ``t``-derivatives.

Its density in ``s`` is

    g(t, s) = t exp(-t**2 / (4 s)) / (2 sqrt(pi) s**(3/2)),   t, s > 0,

and ``int e^{-lambda s} g(t, s) ds = exp(-t sqrt(lambda))``. All integrals
against ``g(t, s) ds`` are computed in the variable ``v = t / (2 sqrt(s))``,
in which the law becomes ``(2/sqrt(pi)) exp(-v**2) dv``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np
from scipy import special

from .exceptions import QuadratureError
from .quadrature import QuadResult, SubordinationQuadrature

__all__ = [
    "MAX_DERIVATIVE_ORDER",
    "QuadResult",
    "StableDerivativeForm",
    "stable_density",
    "stable_derivative_form",
    "stable_moment_constant",
    "stable_tv_constant",
    "stable_expectation",
    "stable_neg_moment",
    "stable_abs_deriv_mass",
    "stable_abs_deriv_constant",
    "stable_laplace",
]

MAX_DERIVATIVE_ORDER = 8
_DEFAULT_QUAD = SubordinationQuadrature()


def stable_density(t: float, s) -> float | np.ndarray:
    """``g(t, s)``; vectorized over ``s``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    s_arr = np.asarray(s, dtype=float)
    if np.any(~(s_arr > 0)):
        raise ValueError("s must be positive")
    out = t * np.exp(-t * t / (4.0 * s_arr)) / (2.0 * math.sqrt(math.pi) * s_arr**1.5)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StableDerivativeForm:
    """``d^k/dt^k g(t, s) = sum a_ij t**i s**(-j) g(t, s)``.

    ``terms`` maps ``(i, j)`` to the exact rational ``a_ij``. Every key
    satisfies ``2 j - i = k``.
    """

    k: int
    terms: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        for (i, j) in self.terms:
            if not (0 <= j <= self.k and 2 * j - i == self.k):
                raise ValueError(f"term {(i, j)} is not homogeneous of order {self.k}")
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(self.terms.items(), key=lambda kv: kv[0][1]))))

    def factor(self, t: float, s):
        """``sum a_ij t**i s**(-j)``, the ratio of the derivative to ``g``."""
        s = np.asarray(s, dtype=float)
        return sum(float(a) * t**i * s ** (-j) for (i, j), a in self.terms.items())

    def evaluate(self, t: float, s):
        """``d^k/dt^k g(t, s)``."""
        return self.factor(t, s) * stable_density(t, s)

    def v_polynomial(self) -> np.ndarray:
        """Coefficients ``c_j`` of ``t**k * factor = sum_j c_j v**(2j)``.

        With ``s = t**2/(4 v**2)`` each term ``a_ij t**(i+k) s**(-j)`` equals
        ``a_ij 4**j v**(2j)``, independent of ``t``.
        """
        c = np.zeros(self.k + 1)
        for (i, j), a in self.terms.items():
            c[j] += float(a * 4**j)
        return c

    def abs_coefficient_sum(self) -> Fraction:
        return sum((abs(a) for a in self.terms.values()), Fraction(0))

    def as_document(self) -> dict:
        return {
            "k": self.k,
            "terms": [{"i": i, "j": j, "a": str(a)} for (i, j), a in self.terms.items()],
        }


@lru_cache(maxsize=None)
def _form_terms(k: int) -> tuple[tuple[tuple[int, int], Fraction], ...]:
    if k == 0:
        return (((0, 0), Fraction(1)),)
    out: dict[tuple[int, int], Fraction] = {}
    # d/dt [t^i s^-j g] = i t^(i-1) s^-j g + t^i s^-j g (1/t - t/(2s))
    for (i, j), a in _form_terms(k - 1):
        for key, val in (((i - 1, j), a * (i + 1)), ((i + 1, j + 1), -a / 2)):
            out[key] = out.get(key, Fraction(0)) + val
    return tuple((key, a) for key, a in sorted(out.items(), key=lambda kv: kv[0][1]) if a != 0)


def stable_derivative_form(k: int, *, max_k: int = MAX_DERIVATIVE_ORDER) -> StableDerivativeForm:
    """Exact coefficients of ``d^k/dt^k g``.

    >>> stable_derivative_form(1).terms[(-1, 0)], stable_derivative_form(1).terms[(1, 1)]
    (Fraction(1, 1), Fraction(-1, 2))
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a nonnegative integer")
    if k > max_k:
        raise ValueError(f"k = {k} exceeds the configured maximum {max_k}")
    return StableDerivativeForm(int(k), dict(_form_terms(int(k))))


def stable_moment_constant(k: int) -> float:
    """``C_k = 4**k Gamma(k + 1/2) / sqrt(pi)``, so ``int s**-k mu_t(ds) = C_k / t**(2k)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return 4.0**k * math.exp(math.lgamma(k + 0.5)) / math.sqrt(math.pi)


def stable_tv_constant(k: int) -> float:
    """``sum |a_ij| C_j``: the bound ``t**k int |d^k_t g| ds <= stable_tv_constant(k)``.

    Obtained by applying the triangle inequality to the derivative form and
    then the negative-moment identity term by term.
    """
    form = stable_derivative_form(k)
    return math.fsum(float(abs(a)) * stable_moment_constant(j) for (i, j), a in form.terms.items())


def _check_t(t):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def _integrate_v(fn: Callable[[np.ndarray], np.ndarray], quad: SubordinationQuadrature, breakpoints=()) -> float:
    v, w = quad.rule(breakpoints)
    return math.fsum(w * fn(v))


def stable_expectation(
    F: Callable[[np.ndarray], np.ndarray],
    t: float,
    s_quad: SubordinationQuadrature | None = None,
    *,
    bound: float | None = None,
    tol: float | None = None,
) -> QuadResult:
    """``int F(s) mu_t(ds)`` for a vectorized ``F``.

    Parameters
    ----------
    F : callable
        Maps an array of ``s`` values to an array of values.
    t : float
        Time parameter of the stable law.
    s_quad : SubordinationQuadrature, optional
    bound : float, optional
        A bound on ``|F|`` on ``s > t**2 / (4 v_min**2)``, used to bound the
        part of the law the rule does not cover. That part is filled with
        ``F`` at the largest covered ``s``; the default bound is the same value.
    tol : float, optional
        If given, raise :class:`QuadratureError` when the error estimate
        exceeds it.

    Returns
    -------
    QuadResult
        The error is the difference between the rule and its refinement
        plus the uncovered mass times the bound.
    """
    _check_t(t)
    quad = s_quad or _DEFAULT_QUAD

    def in_v(v):
        return F(t * t / (4.0 * v * v))

    # the uncovered head (huge s) is filled with the value at v_min
    head = quad.head_mass() * float(np.asarray(in_v(np.array([quad.v_min])))[0])
    value = _integrate_v(in_v, quad) + head
    fine = _integrate_v(in_v, quad.refined()) + head
    if bound is None:
        bound = float(abs(np.asarray(in_v(np.array([quad.v_min])))[0]))
    tail_bound = float(abs(np.asarray(in_v(np.array([quad.v_max])))[0]))
    err = abs(fine - value) + quad.head_mass() * bound + quad.tail_mass() * tail_bound
    if tol is not None and not err <= tol:
        raise QuadratureError(f"stable expectation error {err:.3g} exceeds {tol:.3g}", err)
    return QuadResult(fine, err)


def stable_neg_moment(k: int, t: float, s_quad: SubordinationQuadrature | None = None, *, full_output: bool = False):
    """Numeric ``int s**(-k) mu_t(ds)``; compare :func:`stable_moment_constant`.

    In the ``v`` variable the integrand is ``(4 v**2 / t**2)**k``, which
    vanishes at ``v = 0``, so the uncovered head costs nothing.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    res = stable_expectation(lambda s: s ** (-float(k)), t, s_quad, bound=_neg_moment_head_bound(k, t, s_quad))
    return res if full_output else res.value


def _neg_moment_head_bound(k: int, t: float, s_quad) -> float:
    quad = s_quad or _DEFAULT_QUAD
    return (2.0 * quad.v_min / t) ** (2 * k)


def _positive_roots(c: np.ndarray) -> list[float]:
    """Positive ``v`` with ``sum_j c_j v**(2j) = 0``."""
    coeffs = np.trim_zeros(c[::-1], "f")  # highest power of w = v**2 first
    if coeffs.size <= 1:
        return []
    w_roots = np.roots(coeffs)
    real = w_roots[np.abs(w_roots.imag) <= 1e-10 * np.maximum(1.0, np.abs(w_roots))].real
    return sorted(float(math.sqrt(w)) for w in real if w > 0)


def stable_abs_deriv_constant(k: int, s_quad: SubordinationQuadrature | None = None, *, full_output: bool = False):
    """``M_k = t**k int |d^k_t g(t, s)| ds``, which does not depend on ``t``.

    The panel edges include the sign changes of the derivative, so the
    rule integrates a smooth function on each panel.
    """
    form = stable_derivative_form(k)
    c = form.v_polynomial()
    quad = s_quad or _DEFAULT_QUAD
    roots = _positive_roots(c)

    def absval(v):
        return np.abs(np.polyval(c[::-1], v * v))

    head_fill = quad.head_mass() * abs(c[0])
    value = _integrate_v(absval, quad, roots) + head_fill
    fine = _integrate_v(absval, quad.refined(), roots) + head_fill
    head = quad.head_mass() * float(np.sum(np.abs(c)))
    tail = float(special.erfc(quad.v_max)) * float(absval(np.array([quad.v_max]))[0])
    res = QuadResult(fine, abs(fine - value) + head + tail)
    return res if full_output else res.value


def stable_abs_deriv_mass(k: int, t: float, s_quad: SubordinationQuadrature | None = None, *, full_output: bool = False):
    """``int_0^inf |d^k_t g(t, s)| ds``."""
    _check_t(t)
    res = stable_abs_deriv_constant(k, s_quad, full_output=True)
    scale = t ** (-float(k))
    res = QuadResult(res.value * scale, res.error * scale)
    return res if full_output else res.value


def stable_laplace(t: float, lam: float, s_quad: SubordinationQuadrature | None = None, *, full_output: bool = False):
    """Numeric ``int exp(-lam s) mu_t(ds)``; the exact value is ``exp(-t sqrt(lam))``."""
    _check_t(t)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    res = stable_expectation(lambda s: np.exp(-lam * s), t, s_quad, bound=0.0)
    return res if full_output else res.value
