"""
Riesz potentials, fractional derivatives and Bessel potentials.

On Hermite polynomials these are the multipliers

    I_alpha h_beta = |beta|**(-alpha/2) h_beta   (I_alpha h_0 = 0),
    D_alpha h_beta = |beta|**(alpha/2) h_beta,
    J_alpha h_beta = (1 + |beta|)**(-alpha/2) h_beta.

The ``*_via_*`` functions evaluate the semigroup integral representations
pointwise and are used to cross-check the multipliers.
"""
from __future__ import annotations

import math

import numpy as np

from .exceptions import DimensionError
from .expansion import HermiteExpansion, chaos_values, pi0
from .quadrature import QuadResult, TimeQuadrature, time_integral
from .semigroup import poisson_apply_subordination

__all__ = [
    "riesz_potential",
    "fractional_derivative",
    "bessel_potential",
    "bessel_inverse",
    "riesz_via_integral",
    "riesz_via_derivative_integral",
    "bessel_via_integral",
    "bessel_poisson_integral",
    "riesz_derivative_identity_check",
]


def _check_alpha(alpha):
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive, got {alpha!r}")


def riesz_potential(f: HermiteExpansion, alpha: float) -> HermiteExpansion:
    """``I_alpha f``; the constant term is dropped."""
    _check_alpha(alpha)
    return pi0(f).map_order(lambda n: n ** (-alpha / 2.0))


def fractional_derivative(f: HermiteExpansion, alpha: float) -> HermiteExpansion:
    """``D_alpha f = (-L)**(alpha/2) f``."""
    _check_alpha(alpha)
    return pi0(f).map_order(lambda n: n ** (alpha / 2.0))


def bessel_potential(f: HermiteExpansion, alpha: float) -> HermiteExpansion:
    """``J_alpha f = (I - L)**(-alpha/2) f``."""
    _check_alpha(alpha)
    return f.map_order(lambda n: (1.0 + n) ** (-alpha / 2.0))


def bessel_inverse(f: HermiteExpansion, alpha: float) -> HermiteExpansion:
    """``(I - L)**(alpha/2) f``, the inverse of :func:`bessel_potential`."""
    _check_alpha(alpha)
    return f.map_order(lambda n: (1.0 + n) ** (alpha / 2.0))


def _point(f, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (f.dim,):
        raise DimensionError(f"x must be a {f.dim}-vector")
    return x


def _chaos_at(f, x):
    orders, rows = chaos_values(f, x[None, :])
    return np.asarray(orders, dtype=float), rows[:, 0]


def _finish(res: QuadResult, scale: float, full_output: bool):
    res = QuadResult(res.value * scale, res.error * abs(scale))
    return res if full_output else res.value


def riesz_via_integral(
    f: HermiteExpansion,
    alpha: float,
    x,
    t_quad: TimeQuadrature | None = None,
    *,
    inner: str = "spectral",
    full_output: bool = False,
):
    """``(1/Gamma(alpha)) int_0^inf t**(alpha-1) (P_t f(x) - P_inf f(x)) dt``.

    ``P_inf f`` is the constant ``f_hat(0)``. With ``inner="subordination"``
    each ``P_t f(x)`` is itself computed by integrating ``T_s f(x)`` against
    the stable law, so no Poisson multiplier is used anywhere.
    """
    _check_alpha(alpha)
    x = _point(f, x)
    g = pi0(f)
    n, comp = _chaos_at(g, x)
    if n.size == 0:
        res = QuadResult(0.0, 0.0)
        return res if full_output else 0.0
    root = np.sqrt(n)
    if inner == "spectral":
        def phi(t):
            return np.exp(-np.outer(t, root)) @ comp
    elif inner == "subordination":
        def phi(t):
            return np.array([poisson_apply_subordination(g, ti, x) for ti in t])
    else:
        raise ValueError(f"unknown inner evaluation {inner!r}")
    res = time_integral(phi, alpha, root[0], float(np.abs(comp).sum()), t_quad)
    return _finish(res, 1.0 / math.gamma(alpha), full_output)


def riesz_via_derivative_integral(
    f: HermiteExpansion,
    alpha: float,
    x,
    t_quad: TimeQuadrature | None = None,
    *,
    full_output: bool = False,
):
    """``-(1/(alpha Gamma(alpha))) int_0^inf t**alpha d/dt P_t f(x) dt``.

    Valid only for mean-zero ``f``; a nonzero constant term raises ``ValueError``.
    """
    _check_alpha(alpha)
    if f.mean != 0.0:
        raise ValueError("the derivative representation needs a mean-zero expansion")
    x = _point(f, x)
    n, comp = _chaos_at(f, x)
    if n.size == 0:
        res = QuadResult(0.0, 0.0)
        return res if full_output else 0.0
    root = np.sqrt(n)
    weighted = root * comp

    def phi(t):
        # -d/dt P_t f(x) = sum sqrt(n) e^{-t sqrt(n)} J_n f(x)
        return np.exp(-np.outer(t, root)) @ weighted

    res = time_integral(phi, alpha + 1.0, root[0], float(np.abs(weighted).sum()), t_quad)
    return _finish(res, 1.0 / (alpha * math.gamma(alpha)), full_output)


def bessel_via_integral(
    f: HermiteExpansion,
    alpha: float,
    x,
    t_quad: TimeQuadrature | None = None,
    *,
    full_output: bool = False,
):
    """``J_alpha f(x) = (1/Gamma(alpha/2)) int_0^inf t**(alpha/2) e^{-t} T_t f(x) dt/t``.

    This is the subordination of ``(I - L)**(-alpha/2)`` to the OU
    semigroup; it reproduces the multiplier ``(1 + |beta|)**(-alpha/2)``.
    See :func:`bessel_poisson_integral` for the analogous Poisson form.
    """
    _check_alpha(alpha)
    x = _point(f, x)
    n, comp = _chaos_at(f, x)
    if n.size == 0:
        res = QuadResult(0.0, 0.0)
        return res if full_output else 0.0
    rates = 1.0 + n

    def phi(t):
        return np.exp(-np.outer(t, rates)) @ comp

    res = time_integral(phi, alpha / 2.0, 1.0, float(np.abs(comp).sum()), t_quad)
    return _finish(res, 1.0 / math.gamma(alpha / 2.0), full_output)


def bessel_poisson_integral(
    f: HermiteExpansion,
    alpha: float,
    x,
    t_quad: TimeQuadrature | None = None,
    *,
    full_output: bool = False,
):
    """``(1/Gamma(alpha)) int_0^inf t**alpha e^{-t} P_t f(x) dt/t``.

    With the Poisson semigroup this integral has multiplier
    ``(1 + sqrt|beta|)**(-alpha)``, i.e. it equals ``(I + (-L)**(1/2))**(-alpha) f``.
    It agrees with the Bessel potential only on constants.
    """
    _check_alpha(alpha)
    x = _point(f, x)
    n, comp = _chaos_at(f, x)
    if n.size == 0:
        res = QuadResult(0.0, 0.0)
        return res if full_output else 0.0
    rates = 1.0 + np.sqrt(n)

    def phi(t):
        return np.exp(-np.outer(t, rates)) @ comp

    res = time_integral(phi, alpha, 1.0, float(np.abs(comp).sum()), t_quad)
    return _finish(res, 1.0 / math.gamma(alpha), full_output)


def riesz_derivative_identity_check(f: HermiteExpansion, alpha: float, tol: float = 1e-12) -> tuple[bool, float]:
    """Check ``I_alpha D_alpha f = D_alpha I_alpha f = pi0(f)`` coefficientwise.

    Returns ``(ok, residual)`` where ``residual`` is the largest coefficient
    deviation over both compositions.
    """
    _check_alpha(alpha)
    target = pi0(f)
    r1 = riesz_potential(fractional_derivative(f, alpha), alpha).max_abs_diff(target)
    r2 = fractional_derivative(riesz_potential(f, alpha), alpha).max_abs_diff(target)
    residual = max(r1, r2)
    return residual <= tol, residual
