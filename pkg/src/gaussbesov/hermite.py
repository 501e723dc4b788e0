"""
Normalized Hermite polynomials, the Gaussian measure and L^p norms.

The Gaussian measure here is ``gamma_d(dx) = pi**(-d/2) exp(-|x|**2) dx``
(variance 1/2 per axis) and ``h_beta`` are the polynomials orthonormal with
respect to it,

    h_n(x) = H_n(x) / sqrt(2**n n!),      h_beta(x) = prod_i h_{beta_i}(x_i),

where ``H_n`` are the physicists' Hermite polynomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Union

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .exceptions import BudgetExceededError, DimensionError

__all__ = [
    "MultiIndex",
    "GaussHermiteGrid",
    "LpSpec",
    "INF",
    "DEFAULT_NODE_BUDGET",
    "multi_indices",
    "gauss_hermite_grid",
    "hermite_1d",
    "hermite_eval",
    "hermite_basis",
    "lp_norm",
    "as_exponent",
    "grid_for",
]

INF = math.inf
DEFAULT_NODE_BUDGET = 250_000


class MultiIndex(tuple):
    """A multi-index ``beta`` in ``N^d``.

    Behaves as an immutable tuple of nonnegative ints, so it can be used
    wherever a plain tuple key is expected.

    >>> b = MultiIndex((2, 1))
    >>> b.order, b.factorial
    (3, 2)
    """

    __slots__ = ()

    def __new__(cls, entries):
        if isinstance(entries, (int, np.integer)):
            entries = (entries,)
        vals = []
        for e in entries:
            if isinstance(e, (bool, np.bool_)) or not float(e).is_integer():
                raise ValueError(f"multi-index entries must be integers, got {e!r}")
            e = int(e)
            if e < 0:
                raise ValueError(f"multi-index entries must be >= 0, got {e}")
            vals.append(e)
        if not vals:
            raise ValueError("a multi-index needs at least one entry")
        return super().__new__(cls, vals)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        """``|beta| = sum of entries``."""
        return sum(self)

    @property
    def factorial(self) -> int:
        """``beta! = prod of entry factorials``."""
        return math.prod(math.factorial(e) for e in self)

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


def multi_indices(dim: int, max_order: int, min_order: int = 0, *, budget: int = 1_000_000) -> list[MultiIndex]:
    """All multi-indices of length ``dim`` with ``min_order <= |beta| <= max_order``.

    Ordered by total order, then lexicographically (descending first entry),
    so the result is deterministic.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if max_order < 0:
        return []
    count = math.comb(max_order + dim, dim)
    if count > budget:
        raise BudgetExceededError(f"{count} multi-indices exceed budget {budget}")
    out = []
    for n in range(max(min_order, 0), max_order + 1):
        out.extend(MultiIndex(b) for b in _compositions(n, dim))
    return out


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class LpSpec:
    """Exponent of an ``L^p(gamma_d)`` norm; ``p`` is finite and > 1, or ``INF``."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or (not math.isinf(p) and p <= 1):
            raise ValueError(f"p must be > 1 or INF, got {self.p!r}")
        if math.isinf(p) and p < 0:
            raise ValueError("p = -inf is not an exponent")
        object.__setattr__(self, "p", p)

    @classmethod
    def parse(cls, text) -> "LpSpec":
        if isinstance(text, LpSpec):
            return text
        if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo"):
            return cls(INF)
        return cls(float(text))

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)


def as_exponent(p) -> float:
    """Validate ``p`` (number, string or :class:`LpSpec`) and return it as a float."""
    return LpSpec.parse(p).p


@dataclass(frozen=True, eq=False)
class GaussHermiteGrid:
    """Tensor Gauss-Hermite rule normalized to ``gamma_d``.

    ``sum(weights * f(nodes))`` approximates ``int f dgamma_d`` and is exact
    when every per-axis degree of ``f`` is at most ``exact_degree``.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1, self.dim)
        weights = np.array(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError("nodes and weights differ in length")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def n_per_axis(self) -> int:
        return (self.exact_degree + 1) // 2

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


@lru_cache(maxsize=64)
def _gh_1d(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = hermgauss(n)
    w = w / math.sqrt(math.pi)
    # renormalize so the weights sum to 1 to rounding
    w = w / math.fsum(w)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_hermite_grid(n_per_axis: int, d: int, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> GaussHermiteGrid:
    """Tensor-product Gauss-Hermite grid for ``gamma_d``.

    Parameters
    ----------
    n_per_axis : int
        Points per axis; the rule is exact to per-axis degree ``2n - 1``.
    d : int
        Dimension.
    max_nodes : int, optional
        Node budget; :class:`BudgetExceededError` is raised beyond it.
    """
    if n_per_axis < 1 or d < 1:
        raise ValueError("n_per_axis and d must be >= 1")
    total = n_per_axis**d
    if total > max_nodes:
        raise BudgetExceededError(f"{n_per_axis}^{d} = {total} nodes exceed budget {max_nodes}")
    x, w = _gh_1d(n_per_axis)
    if d == 1:
        nodes = x[:, None]
        weights = w.copy()
    else:
        nodes = np.array(list(product(x, repeat=d)))
        weights = np.prod(np.array(list(product(w, repeat=d))), axis=1)
    return GaussHermiteGrid(d, nodes, weights, 2 * n_per_axis - 1)


def hermite_1d(n_max: int, x) -> np.ndarray:
    """Values ``h_0(x), ..., h_{n_max}(x)`` stacked on a leading axis.

    Uses the normalized three-term recurrence
    ``h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _as_point(x, dim: int) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (dim,):
        raise DimensionError(f"expected a {dim}-vector, got shape {x.shape}")
    return x


def hermite_eval(beta, x) -> float:
    """``h_beta(x)`` at a single point ``x``."""
    beta = MultiIndex(beta)
    x = _as_point(x, beta.dim)
    val = 1.0
    for b, xi in zip(beta, x):
        val *= hermite_1d(b, xi)[b]
    return float(val)


def hermite_basis(betas, points) -> np.ndarray:
    """Matrix ``B[i, j] = h_{betas[j]}(points[i])``.

    ``points`` has shape ``(N, d)``; every multi-index must have length ``d``.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n_pts, dim = points.shape
    betas = [MultiIndex(b) for b in betas]
    if not betas:
        return np.zeros((n_pts, 0))
    if any(b.dim != dim for b in betas):
        raise DimensionError(f"multi-index length does not match point dimension {dim}")
    n_max = max(max(b) for b in betas)
    tables = [hermite_1d(n_max, points[:, i]) for i in range(dim)]  # each (n_max+1, N)
    B = np.ones((n_pts, len(betas)))
    for j, b in enumerate(betas):
        for i, bi in enumerate(b):
            if bi:
                B[:, j] *= tables[i][bi]
    return B


Evaluable = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def _values_on(f: Evaluable, grid: GaussHermiteGrid) -> np.ndarray:
    if callable(f):
        vals = np.asarray(f(grid.nodes), dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
    vals = np.broadcast_to(vals, (grid.size,)) if vals.ndim == 0 else vals.reshape(-1)
    if vals.shape[0] != grid.size:
        raise DimensionError(f"got {vals.shape[0]} values for a grid of {grid.size} nodes")
    return vals


def lp_norm(f: Evaluable, p, grid: GaussHermiteGrid) -> float:
    """``||f||_{p, gamma_d}`` by Gauss-Hermite quadrature.

    Parameters
    ----------
    f : callable or ndarray
        Either a function mapping an ``(N, d)`` array of points to ``N``
        values (a :class:`~gaussbesov.expansion.HermiteExpansion` qualifies),
        or the values at ``grid.nodes`` directly.
    p : float, str or LpSpec
        Exponent; ``INF`` gives the maximum of ``|f|`` over the grid nodes,
        which is only a grid approximation of the supremum.
    grid : GaussHermiteGrid

    Notes
    -----
    For polynomial ``f`` and even integer ``p`` the result is exact when
    ``grid.exact_degree >= p * deg(f)``. Other exponents give a quadrature
    approximation at the grid's resolution.
    """
    p = as_exponent(p)
    if grid.size == 0:
        raise ValueError("empty grid")
    a = np.abs(_values_on(f, grid))
    if math.isinf(p):
        return float(a.max())
    scale = a.max()
    if scale == 0.0:
        return 0.0
    # factor out the max to avoid overflow for large p
    return float(scale * np.dot(grid.weights, (a / scale) ** p) ** (1.0 / p))


def grid_for(dim: int, degree: int, p=2.0, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> GaussHermiteGrid:
    """A grid adequate for ``L^p`` norms of degree-``degree`` polynomials.

    For even integer ``p`` the grid is exact for ``|f|**p``. For any other
    exponent the norm is a quadrature approximation, and a denser grid is
    used (40 points per axis in 1-D, 24 in 2-D, 12 beyond).
    """
    p = as_exponent(p)
    degree = max(int(degree), 0)
    if not math.isinf(p) and p.is_integer() and int(p) % 2 == 0:
        n = (int(p) * degree) // 2 + 1
    else:
        base = {1: 40, 2: 24}.get(dim, 12)
        pe = 2 * math.ceil(p / 2) if not math.isinf(p) else 8
        n = max(base, (pe * degree) // 2 + 1)
    return gauss_hermite_grid(max(n, 1), dim, max_nodes=max_nodes)
