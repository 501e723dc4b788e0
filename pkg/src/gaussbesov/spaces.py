"""
Gaussian Besov-Lipschitz and Triebel-Lizorkin norms of Hermite expansions.

For ``f`` with derivative profile ``u(t, x) = d^k/dt^k P_t f(x)`` and
``gamma = (k - alpha) q``:

* Besov seminorm: ``(int_0^inf t**gamma ||u(t, .)||_p**q dt/t)**(1/q)``;
  for ``q = INF`` the smallest ``A`` with ``||u(t, .)||_p <= A t**(alpha-k)``.
* Triebel seminorm: ``|| (int_0^inf t**gamma |u(t, .)|**q dt/t)**(1/q) ||_p``.

The norms add ``||f||_p``. Time integrals use :func:`time_integral`, whose
error estimate includes analytic bounds for both ends of ``(0, inf)``. The
``x`` integrals use Gauss-Hermite grids: exact for Besov with even ``p``,
and a quadrature approximation for Triebel unless ``G**p`` is a polynomial
(``p = q``, or ``q`` an even integer dividing ``p``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from .expansion import HermiteExpansion, chaos_values
from .hermite import (
    DEFAULT_NODE_BUDGET,
    INF,
    GaussHermiteGrid,
    MultiIndex,
    as_exponent,
    gauss_hermite_grid,
    grid_for,
    lp_norm,
)
from .quadrature import QuadResult, TimeQuadrature, time_integral
from .stable import stable_tv_constant

__all__ = [
    "SpaceParams",
    "choose_k",
    "besov_grid",
    "triebel_grid",
    "besov_time_rule",
    "derivative_norm_profile",
    "besov_seminorm",
    "besov_norm",
    "besov_infty_constant",
    "triebel_seminorm",
    "triebel_norm",
    "gk_function",
    "hermite_closed_form_seminorm",
    "hermite_closed_form_norm",
    "hardy_constant",
    "k_shift_constant",
    "infty_from_q_constant",
]


def choose_k(alpha: float) -> int:
    """Smallest integer strictly greater than ``alpha``.

    >>> choose_k(0), choose_k(0.5), choose_k(1.0)
    (1, 1, 2)
    """
    if not alpha >= 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    return int(math.floor(alpha)) + 1


def _parse_q(q) -> float:
    if isinstance(q, str) and q.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    q = float(q)
    if math.isnan(q) or q < 1:
        raise ValueError(f"q must be >= 1 or INF, got {q!r}")
    return q


@dataclass(frozen=True)
class SpaceParams:
    """Smoothness ``alpha``, integrability ``p``, fine index ``q`` and derivative order ``k``.

    ``k`` defaults to :func:`choose_k` of ``alpha`` and must exceed ``alpha``.
    """

    alpha: float
    p: float = 2.0
    q: float = 2.0
    k: int | None = field(default=None)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not alpha >= 0 or math.isinf(alpha):
            raise ValueError(f"alpha must be a finite number >= 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", _parse_q(self.q))
        k = choose_k(alpha) if self.k is None else self.k
        if int(k) != k or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        if not k > alpha:
            raise ValueError(f"k = {k} must exceed alpha = {alpha}")
        object.__setattr__(self, "k", int(k))

    @property
    def gamma(self) -> float:
        """Power ``(k - alpha) q`` of ``t`` in the time integral."""
        return (self.k - self.alpha) * self.q

    def with_(self, **changes) -> "SpaceParams":
        """Copy with changes; ``k`` is re-derived from ``alpha`` unless given."""
        if "alpha" in changes and "k" not in changes:
            changes["k"] = None
        return replace(self, **changes)

    def as_document(self) -> dict:
        q = "inf" if math.isinf(self.q) else self.q
        p = "inf" if math.isinf(self.p) else self.p
        return {"alpha": self.alpha, "p": p, "q": q, "k": self.k}


def besov_grid(dim: int, degree: int, p, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> GaussHermiteGrid:
    """Grid on which Besov ``L^p`` norms of degree-``degree`` polynomials are computed."""
    return grid_for(dim, degree, p, max_nodes=max_nodes)


def _is_even_int(x: float) -> bool:
    return not math.isinf(x) and float(x).is_integer() and int(x) % 2 == 0


def triebel_grid(dim: int, degree: int, p, q, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> GaussHermiteGrid:
    """Grid for the outer ``L^p`` norm of the Triebel square function.

    When ``p = q``, or ``q`` is an even integer with ``p / q`` an integer,
    ``G**p`` is a polynomial and :func:`besov_grid` integrates it exactly.
    Otherwise a dense grid is used (80 points per axis in 1-D, 40 in 2-D).
    """
    p, q = as_exponent(p), _parse_q(q)
    if p == q or (_is_even_int(q) and not math.isinf(p) and (p / q).is_integer()):
        return besov_grid(dim, degree, p, max_nodes=max_nodes)
    base = {1: 80, 2: 40}.get(dim, 12)
    exact = besov_grid(dim, degree, p, max_nodes=max_nodes)
    return gauss_hermite_grid(max(base, exact.n_per_axis), dim, max_nodes=max_nodes)


def _lp_rows(U: np.ndarray, p: float, weights: np.ndarray) -> np.ndarray:
    """``L^p`` norm of each row of ``U`` against ``weights``."""
    A = np.abs(U)
    if math.isinf(p):
        return A.max(axis=1)
    scale = A.max(axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * (((A / safe[:, None]) ** p) @ weights) ** (1.0 / p)


class _Profile:
    """Chaos decomposition of ``f`` on a grid, ready for ``d^k/dt^k P_t``."""

    def __init__(self, f: HermiteExpansion, k: int, nodes: np.ndarray):
        orders, rows = chaos_values(f, nodes)
        # the constant term survives only the zeroth derivative
        keep = [i for i, n in enumerate(orders) if n > 0 or k == 0]
        self.k = k
        self.orders = np.asarray([orders[i] for i in keep], dtype=float)
        self.rows = rows[keep] if keep else np.zeros((0, nodes.shape[0]))
        self.root = np.sqrt(self.orders)

    @property
    def empty(self) -> bool:
        return self.orders.size == 0

    @property
    def gap_rate(self) -> float:
        return float(self.root[0])

    def values(self, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        mult = (-self.root[None, :]) ** self.k * np.exp(-ts[:, None] * self.root[None, :])
        return mult @ self.rows

    def amplitudes(self) -> np.ndarray:
        """``n**(k/2) |J_n f(x)|`` per order and node."""
        return (self.orders ** (self.k / 2.0))[:, None] * np.abs(self.rows)


def besov_time_rule(f: HermiteExpansion, params: SpaceParams) -> TimeQuadrature | None:
    """Default time rule for the Besov and Triebel integrals of ``f``.

    Sized for the envelope ``t**gamma exp(-q sqrt(m) t)`` where ``m`` is the
    spectral gap of ``f``. None when ``f`` is constant.
    """
    m = f.spectral_gap()
    if m is None or math.isinf(params.q):
        return None
    return TimeQuadrature.auto(params.gamma, params.q * math.sqrt(m))


def _root_with_error(v, e, q: float):
    """``v**(1/q)`` and a bound on its change when ``v`` moves by ``e``."""
    v = np.maximum(np.asarray(v, dtype=float), 0.0)
    e = np.asarray(e, dtype=float)
    root = v ** (1.0 / q)
    crude = e ** (1.0 / q)
    lo = np.maximum(v - e, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(lo > 0, e / (q * lo ** (1.0 - 1.0 / q)), np.inf)
    return root, np.minimum(crude, slope)


def derivative_norm_profile(f: HermiteExpansion, k: int, p, ts, grid: GaussHermiteGrid | None = None) -> np.ndarray:
    """``||d^k/dt^k P_t f||_p`` at each time in ``ts``."""
    p = as_exponent(p)
    grid = grid or besov_grid(f.dim, f.degree(), p)
    prof = _Profile(f, k, grid.nodes)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if prof.empty:
        return np.zeros(ts.size)
    return _lp_rows(prof.values(ts), p, grid.weights)


def besov_seminorm(
    f: HermiteExpansion,
    params: SpaceParams,
    t_quad: TimeQuadrature | None = None,
    grid: GaussHermiteGrid | None = None,
    *,
    full_output: bool = False,
):
    """Besov seminorm ``(int (t**(k-alpha) ||d^k_t P_t f||_p)**q dt/t)**(1/q)``.

    Parameters
    ----------
    f : HermiteExpansion
    params : SpaceParams
        ``q = INF`` is delegated to :func:`besov_infty_constant`.
    t_quad : TimeQuadrature, optional
        Defaults to :func:`besov_time_rule`.
    grid : GaussHermiteGrid, optional
        Defaults to :func:`besov_grid` (exact for even ``p``).
    full_output : bool
        Return a :class:`QuadResult` with the certified time-quadrature error.

    Examples
    --------
    >>> h2 = HermiteExpansion.basis((2,))
    >>> round(besov_seminorm(h2, SpaceParams(0.5, 2, 2)), 6)
    0.840896
    """
    if math.isinf(params.q):
        val = besov_infty_constant(f, params, grid=grid)
        return QuadResult(val, float("nan")) if full_output else val
    grid = grid or besov_grid(f.dim, f.degree(), params.p)
    prof = _Profile(f, params.k, grid.nodes)
    if prof.empty:
        return QuadResult(0.0, 0.0) if full_output else 0.0
    p, q = params.p, params.q
    env = float(np.sum(_lp_rows(prof.amplitudes(), p, grid.weights)))

    def phi(t):
        return _lp_rows(prof.values(t), p, grid.weights) ** q

    quad = t_quad or TimeQuadrature.auto(params.gamma, q * prof.gap_rate)
    res = time_integral(phi, params.gamma, q * prof.gap_rate, env**q, quad)
    root, err = _root_with_error(res.value, res.error, q)
    out = QuadResult(float(root), float(err))
    return out if full_output else out.value


def besov_norm(f, params, t_quad=None, grid=None, *, full_output: bool = False):
    """``||f||_p`` plus :func:`besov_seminorm`."""
    grid = grid or besov_grid(f.dim, f.degree(), params.p)
    base = lp_norm(f, params.p, grid)
    semi = besov_seminorm(f, params, t_quad, grid, full_output=True)
    out = QuadResult(base + semi.value, semi.error)
    return out if full_output else out.value


def besov_infty_constant(
    f: HermiteExpansion,
    params: SpaceParams,
    t_grid=None,
    grid: GaussHermiteGrid | None = None,
) -> float:
    """Grid approximation of ``A_k(f) = sup_t t**(k-alpha) ||d^k_t P_t f||_p``.

    The supremum is taken over ``t_grid`` (by default 400 log-spaced times
    bracketing every chaos component's peak), then refined by a bounded
    scalar search between the neighbours of the best grid time.

    Examples
    --------
    >>> h1 = HermiteExpansion.basis((1,))
    >>> round(besov_infty_constant(h1, SpaceParams(0.5, 2, "inf", k=1)), 6)
    0.428882
    """
    grid = grid or besov_grid(f.dim, f.degree(), params.p)
    prof = _Profile(f, params.k, grid.nodes)
    if prof.empty:
        return 0.0
    a = params.k - params.alpha
    if t_grid is None:
        lo = 1e-3 * a / float(prof.root[-1])
        hi = 60.0 * max(a, 1.0) / prof.gap_rate
        t_grid = np.geomspace(lo, hi, 400)
    ts = np.asarray(t_grid, dtype=float).ravel()

    def h(t):
        t = np.atleast_1d(t)
        return t**a * _lp_rows(prof.values(t), params.p, grid.weights)

    vals = h(ts)
    i = int(np.argmax(vals))
    best = float(vals[i])
    if 0 < i < ts.size - 1:
        lo_u, hi_u = math.log(ts[i - 1]), math.log(ts[i + 1])
        r = optimize.minimize_scalar(lambda u: -h(math.exp(u))[0], bounds=(lo_u, hi_u), method="bounded",
                                     options={"xatol": 1e-12})
        best = max(best, float(-r.fun))
    return best


def triebel_seminorm(
    f: HermiteExpansion,
    params: SpaceParams,
    t_quad: TimeQuadrature | None = None,
    grid: GaussHermiteGrid | None = None,
    *,
    full_output: bool = False,
):
    """Triebel seminorm ``|| (int (t**(k-alpha) |d^k_t P_t f|)**q dt/t)**(1/q) ||_p``.

    For each grid node the inner time integral is done by
    :func:`time_integral`; the outer ``L^p`` norm uses ``grid``
    (default :func:`triebel_grid`). The reported error covers the time
    quadrature only.

    Raises
    ------
    ValueError
        If ``params.q`` is infinite.
    """
    if math.isinf(params.q):
        raise ValueError("the Triebel-Lizorkin seminorm needs a finite q")
    grid = grid or triebel_grid(f.dim, f.degree(), params.p, params.q)
    prof = _Profile(f, params.k, grid.nodes)
    if prof.empty:
        return QuadResult(0.0, 0.0) if full_output else 0.0
    q = params.q
    env = prof.amplitudes().sum(axis=0)

    def phi(t):
        return np.abs(prof.values(t)) ** q

    quad = t_quad or TimeQuadrature.auto(params.gamma, q * prof.gap_rate)
    res = time_integral(phi, params.gamma, q * prof.gap_rate, env**q, quad)
    G, dG = _root_with_error(res.value, res.error, q)
    value = lp_norm(G, params.p, grid)
    err = lp_norm(dG, params.p, grid)
    out = QuadResult(value, err)
    return out if full_output else out.value


def triebel_norm(f, params, t_quad=None, grid=None, *, full_output: bool = False):
    """``||f||_p`` plus :func:`triebel_seminorm`, on the same grid."""
    if math.isinf(params.q):
        raise ValueError("the Triebel-Lizorkin norm needs a finite q")
    grid = grid or triebel_grid(f.dim, f.degree(), params.p, params.q)
    base = lp_norm(f, params.p, grid)
    semi = triebel_seminorm(f, params, t_quad, grid, full_output=True)
    out = QuadResult(base + semi.value, semi.error)
    return out if full_output else out.value


def gk_function(f: HermiteExpansion, k: int, x, t_quad: TimeQuadrature | None = None, *, full_output: bool = False):
    """Littlewood-Paley function ``(int (t**k |d^k_t P_t f(x)|)**2 dt/t)**(1/2)``."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, f.dim)
    prof = _Profile(f, int(k), x)
    if prof.empty:
        return QuadResult(0.0, 0.0) if full_output else 0.0
    env = float(prof.amplitudes().sum())

    def phi(t):
        return prof.values(t)[:, 0] ** 2

    res = time_integral(phi, 2.0 * k, 2.0 * prof.gap_rate, env**2, t_quad)
    root, err = _root_with_error(res.value, res.error, 2.0)
    out = QuadResult(float(root), float(err))
    return out if full_output else out.value


def hermite_closed_form_seminorm(beta, params: SpaceParams, grid: GaussHermiteGrid | None = None) -> float:
    """``|beta|**(alpha/2) q**(-(k-alpha)) Gamma((k-alpha) q)**(1/q) ||h_beta||_p``.

    Both the Besov and the Triebel seminorm of ``h_beta`` equal this value.
    """
    beta = MultiIndex(beta)
    if beta.order == 0:
        raise ValueError("the closed form needs |beta| >= 1; h_0 has seminorm 0")
    if math.isinf(params.q):
        raise ValueError("the closed form needs a finite q")
    grid = grid or besov_grid(beta.dim, beta.order, params.p)
    hb = lp_norm(HermiteExpansion.basis(beta), params.p, grid)
    a, q = params.k - params.alpha, params.q
    return beta.order ** (params.alpha / 2.0) * q ** (-a) * math.exp(math.lgamma(a * q) / q) * hb


def hermite_closed_form_norm(beta, params: SpaceParams, grid: GaussHermiteGrid | None = None) -> float:
    """``(1 + |beta|**(alpha/2) q**(-(k-alpha)) Gamma((k-alpha) q)**(1/q)) ||h_beta||_p``."""
    beta = MultiIndex(beta)
    grid = grid or besov_grid(beta.dim, beta.order, params.p)
    hb = lp_norm(HermiteExpansion.basis(beta), params.p, grid)
    return hb + hermite_closed_form_seminorm(beta, params, grid)


def hardy_constant(alpha: float, k: int, l: int) -> float:
    """``1 / ((l - alpha)(l + 1 - alpha) ... (k - 1 - alpha))`` for ``k >= l > alpha``.

    Iterating Hardy's inequality gives ``S_l <= hardy_constant * S_k`` for
    the Besov seminorms with derivative orders ``l`` and ``k`` (and the same
    for ``A_l``, ``A_k`` and for the Triebel seminorms).
    """
    if not (k >= l > alpha):
        raise ValueError("need k >= l > alpha")
    return 1.0 / math.prod(j - alpha for j in range(l, k))


def k_shift_constant(alpha: float, k: int, l: int) -> float:
    """``C_{k-l} 2**(k - alpha)`` with ``C_{k-l}`` the total-variation chain constant.

    Splitting ``t = t/2 + t/2`` gives ``S_k <= k_shift_constant * S_l``.
    """
    if not (k >= l > alpha):
        raise ValueError("need k >= l > alpha")
    return stable_tv_constant(k - l) * 2.0 ** (k - alpha)


def infty_from_q_constant(alpha: float, k: int, q: float) -> float:
    """``C`` with ``A_k(f) <= C * S_q(f)``, from monotonicity on ``[t0/2, t0]``.

    ``C = (gamma / (1 - 2**(-gamma)))**(1/q)`` with ``gamma = (k - alpha) q``.
    """
    g = (k - alpha) * q
    return (g / -math.expm1(-g * math.log(2.0))) ** (1.0 / q)
