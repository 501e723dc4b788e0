"""
Ornstein-Uhlenbeck and Poisson-Hermite semigroups.

The spectral forms act on coefficients and are exact:

    T_t h_beta = exp(-t |beta|) h_beta,     P_t h_beta = exp(-t sqrt|beta|) h_beta.

The integral forms (Mehler formula, subordination, the Poisson-Hermite
kernel) are computed by quadrature and serve as independent checks of the
spectral path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DimensionError
from .expansion import HermiteExpansion, chaos_values
from .hermite import GaussHermiteGrid, gauss_hermite_grid
from .quadrature import SubordinationQuadrature, gauss_legendre_panels
from .stable import QuadResult, stable_expectation

__all__ = [
    "KernelQuadrature",
    "ou_apply_spectral",
    "ou_apply_mehler",
    "ou_kernel",
    "poisson_apply_spectral",
    "poisson_infinity",
    "poisson_time_derivative",
    "poisson_derivative_values",
    "poisson_apply_subordination",
    "poisson_kernel",
    "poisson_apply_kernel",
    "ou_maximal",
    "default_maximal_grid",
]


def _check_time(t, allow_zero=True):
    if not (t >= 0 if allow_zero else t > 0) or not math.isfinite(t):
        raise ValueError(f"invalid time {t!r}")


def ou_apply_spectral(f: HermiteExpansion, t: float) -> HermiteExpansion:
    """``T_t f`` through ``beta -> exp(-t|beta|)``."""
    _check_time(t)
    return f.map_order(lambda n: math.exp(-t * n))


def poisson_apply_spectral(f: HermiteExpansion, t: float) -> HermiteExpansion:
    """``P_t f`` through ``beta -> exp(-t sqrt|beta|)``."""
    _check_time(t)
    return f.map_order(lambda n: math.exp(-t * math.sqrt(n)))


def poisson_infinity(f: HermiteExpansion) -> HermiteExpansion:
    """``P_inf f``, taken as the limit of ``P_t f``: the constant ``f_hat(0)``."""
    return HermiteExpansion.constant(f.dim, f.mean)


def poisson_time_derivative(f: HermiteExpansion, t: float, k: int) -> HermiteExpansion:
    """``d^k/dt^k P_t f``: ``beta -> (-sqrt|beta|)**k exp(-t sqrt|beta|)``.

    For ``k >= 1`` the constant term is annihilated.
    """
    _check_time(t)
    if int(k) != k or k < 0:
        raise ValueError("k must be a nonnegative integer")
    return f.map_order(lambda n: (-math.sqrt(n)) ** k * math.exp(-t * math.sqrt(n)))


def poisson_derivative_values(f: HermiteExpansion, ts, k: int, points) -> np.ndarray:
    """``d^k/dt^k P_t f(x)`` on a grid of times and points.

    Returns an array of shape ``(len(ts), N)``.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    orders, rows = chaos_values(f, points)
    if not orders:
        return np.zeros((ts.size, np.asarray(points).reshape(-1, f.dim).shape[0]))
    root = np.sqrt(np.asarray(orders, dtype=float))
    mult = (-root[None, :]) ** k * np.exp(-ts[:, None] * root[None, :])
    return mult @ rows


def ou_apply_mehler(f, t: float, x, grid: GaussHermiteGrid) -> float:
    """``T_t f(x) = int f(sqrt(1 - e^{-2t}) u + e^{-t} x) gamma_d(du)`` on ``grid``.

    Exact for polynomial ``f`` of per-axis degree at most ``grid.exact_degree``.
    """
    _check_time(t, allow_zero=False)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (grid.dim,):
        raise DimensionError(f"x must be a {grid.dim}-vector")
    pts = math.sqrt(-math.expm1(-2.0 * t)) * grid.nodes + math.exp(-t) * x[None, :]
    return grid.integrate(np.asarray(f(pts), dtype=float).reshape(-1))


def ou_kernel(s, x, y) -> np.ndarray:
    """Density of ``T_s`` against Lebesgue measure in ``y``.

    ``pi**(-d/2) (1 - e^{-2s})**(-d/2) exp(-|y - e^{-s} x|**2 / (1 - e^{-2s}))``,
    broadcast over ``s`` (1-D) and ``y`` (``(M, d)``); the result has shape
    ``(M, len(s))``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1, x.size)
    d = x.size
    one_minus = -np.expm1(-2.0 * s)
    diff = y[:, None, :] - np.exp(-s)[None, :, None] * x[None, None, :]
    sq = np.einsum("msd,msd->ms", diff, diff)
    return np.exp(-sq / one_minus[None, :]) / (math.pi * one_minus[None, :]) ** (d / 2.0)


@dataclass(frozen=True)
class KernelQuadrature:
    """Rule for the Poisson-Hermite kernel, in the OU time ``s = -log r``.

    The ``s`` range ``[t**2 / (4 head_exponent), s_max]`` is covered by
    Gauss-Legendre panels uniform in ``log s``. Beyond ``s_max`` the OU kernel
    equals its limit ``pi**(-d/2) exp(-|y|**2)`` up to ``O(e^{-s_max})``, and
    that piece is added in closed form.
    """

    head_exponent: float = 700.0
    s_max: float = 40.0
    panel_width: float = 0.25
    points_per_panel: int = 10

    def rule(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        lo = math.log(t * t / (4.0 * self.head_exponent))
        hi = math.log(self.s_max)
        n = max(1, math.ceil((hi - lo) / self.panel_width))
        u, w = gauss_legendre_panels(np.linspace(lo, hi, n + 1), self.points_per_panel)
        s = np.exp(u)
        return s, w * s

    def refined(self) -> "KernelQuadrature":
        return replace(self, panel_width=0.5 * self.panel_width)


_KERNEL_QUAD = KernelQuadrature()


def _kernel_on(t, x, y, quad: KernelQuadrature, chunk: int = 2048) -> np.ndarray:
    s, w = quad.rule(t)
    g = t * np.exp(-t * t / (4.0 * s)) / (2.0 * math.sqrt(math.pi) * s**1.5)
    gw = g * w
    d = x.size
    tail_mass = math.erf(t / (2.0 * math.sqrt(quad.s_max)))
    out = np.empty(y.shape[0])
    for start in range(0, y.shape[0], chunk):
        yc = y[start:start + chunk]
        body = ou_kernel(s, x, yc) @ gw
        limit = np.exp(-np.einsum("md,md->m", yc, yc)) / math.pi ** (d / 2.0)
        out[start:start + chunk] = body + tail_mass * limit
    return out


def poisson_kernel(t: float, x, y, r_quad: KernelQuadrature | None = None, *, full_output: bool = False):
    """The Poisson-Hermite kernel ``p(t, x, y)`` (density in ``y`` against ``dy``).

    The defining integral over ``r`` in ``(0, 1)`` is evaluated after the
    change of variable ``r = e^{-s}``, which turns it into the stable
    subordination of the OU kernel:

        p(t, x, y) = int_0^inf g(t, s) K_s(x, y) ds.

    Parameters
    ----------
    t : float
        Positive time.
    x : array_like
        ``d``-vector.
    y : array_like
        A ``d``-vector or an ``(M, d)`` array of points.
    r_quad : KernelQuadrature, optional
    full_output : bool
        Also return the error estimate (difference from a rule with panels
        half as wide, plus the ``s > s_max`` approximation bound).

    Returns
    -------
    float or ndarray, or QuadResult when ``full_output`` is set.
    """
    _check_time(t, allow_zero=False)
    quad = r_quad or _KERNEL_QUAD
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y_arr = np.asarray(y, dtype=float)
    single = y_arr.ndim <= 1
    y_arr = y_arr.reshape(-1, x.size)
    if single and y_arr.shape[0] != 1:
        raise DimensionError(f"y must be a {x.size}-vector")
    coarse = _kernel_on(t, x, y_arr, quad)
    if not full_output:
        return float(coarse[0]) if single else coarse
    fine = _kernel_on(t, x, y_arr, quad.refined())
    # |K_s - K_inf| <= C e^{-s} for s > s_max; C grows only polynomially in x, y
    xy = 1.0 + np.sum(x * x) + np.einsum("md,md->m", y_arr, y_arr)
    tail_err = math.erf(t / (2.0 * math.sqrt(quad.s_max))) * 4.0 * xy * math.exp(-quad.s_max)
    err = np.abs(fine - coarse) + tail_err
    if single:
        return QuadResult(float(fine[0]), float(err[0]))
    return fine, err


def _radial_rule(t: float, reach: float, points: int = 10) -> tuple[np.ndarray, np.ndarray]:
    rho0 = 1e-4 * min(t, 1.0)
    geo = np.geomspace(rho0, 1.0, max(2, math.ceil(math.log(1.0 / rho0) / math.log(1.5))) + 1)
    lin = np.linspace(1.0, reach, max(2, math.ceil((reach - 1.0) / 0.25)) + 1)
    # the kernel is smooth at y = x, so the first panel can start at 0
    edges = np.concatenate([[0.0], geo, lin[1:]])
    return gauss_legendre_panels(edges, points)


def poisson_apply_kernel(
    f,
    t: float,
    x,
    r_quad: KernelQuadrature | None = None,
    *,
    n_theta: int = 96,
) -> float:
    """``P_t f(x) = int p(t, x, y) f(y) dy`` by quadrature in polar coordinates about ``x``.

    Supports ``d = 1`` and ``d = 2``. ``f`` maps ``(N, d)`` arrays to values.
    """
    _check_time(t, allow_zero=False)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.size
    reach = float(np.linalg.norm(x)) + 8.0
    rho, w = _radial_rule(t, reach)
    if d == 1:
        y = np.concatenate([x[0] + rho, x[0] - rho])[:, None]
        wy = np.concatenate([w, w])
    elif d == 2:
        theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        y = (x[None, None, :] + rho[:, None, None] * dirs[None, :, :]).reshape(-1, 2)
        wy = np.repeat(w * rho, n_theta) * (2.0 * math.pi / n_theta)
    else:
        raise DimensionError("kernel application is implemented for d = 1 and d = 2")
    vals = poisson_kernel(t, x, y, r_quad) * np.asarray(f(y), dtype=float).reshape(-1)
    return math.fsum(wy * vals)


def poisson_apply_subordination(
    f: HermiteExpansion,
    t: float,
    x,
    s_quad: SubordinationQuadrature | None = None,
    *,
    inner: str = "spectral",
    grid: GaussHermiteGrid | None = None,
    full_output: bool = False,
):
    """``P_t f(x) = int T_s f(x) mu_t(ds)``.

    Parameters
    ----------
    inner : {"spectral", "mehler"}
        How ``T_s f(x)`` is evaluated inside the ``s`` integral. ``"mehler"``
        uses :func:`ou_apply_mehler` on ``grid`` (built from the degree of
        ``f`` when omitted) and involves no spectral multipliers at all.
    """
    _check_time(t, allow_zero=False)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (f.dim,):
        raise DimensionError(f"x must be a {f.dim}-vector")
    if inner == "spectral":
        orders, rows = chaos_values(f, x[None, :])
        if not orders:
            res = QuadResult(0.0, 0.0)
            return res if full_output else 0.0
        n = np.asarray(orders, dtype=float)
        comp = rows[:, 0]

        def F(s):
            return np.exp(-np.outer(s, n)) @ comp

        bound = abs(f.mean)
    elif inner == "mehler":
        grid = grid or gauss_hermite_grid(f.degree() // 2 + 1, f.dim)

        def F(s):
            return np.array([ou_apply_mehler(f, si, x, grid) for si in s])

        bound = None
    else:
        raise ValueError(f"unknown inner evaluation {inner!r}")
    res = stable_expectation(F, t, s_quad, bound=bound)
    return res if full_output else res.value


def default_maximal_grid() -> np.ndarray:
    """200 log-spaced times on ``[1e-4, 20]``."""
    return np.geomspace(1e-4, 20.0, 200)


def ou_maximal(f: HermiteExpansion, x, t_grid=None) -> float:
    """Grid approximation of ``T* f(x) = sup_t |T_t f(x)|``.

    Candidates are the times in ``t_grid`` plus the limits ``t -> 0``
    (``f(x)``) and ``t -> inf`` (``f_hat(0)``).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (f.dim,):
        raise DimensionError(f"x must be a {f.dim}-vector")
    ts = default_maximal_grid() if t_grid is None else np.asarray(t_grid, dtype=float).ravel()
    if ts.size == 0:
        raise ValueError("t_grid is empty")
    orders, rows = chaos_values(f, x[None, :])
    if not orders:
        return 0.0
    n = np.asarray(orders, dtype=float)
    comp = rows[:, 0]
    vals = np.exp(-np.outer(ts, n)) @ comp
    return float(max(np.max(np.abs(vals)), abs(comp.sum()), abs(f.mean)))
