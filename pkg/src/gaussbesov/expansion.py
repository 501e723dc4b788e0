"""
Finite Hermite expansions ``f = sum_beta c_beta h_beta``.

Operators that act diagonally on the Hermite basis (semigroups, potentials,
fractional derivatives) are all of the form ``c_beta -> m(|beta|) c_beta``
and are applied with :meth:`HermiteExpansion.map_order`.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .exceptions import DimensionError, ExpansionFormatError
from .hermite import (
    GaussHermiteGrid,
    MultiIndex,
    hermite_basis,
    lp_norm,
    multi_indices,
)

__all__ = [
    "HermiteExpansion",
    "PRUNE_TOL",
    "expansion_eval",
    "analyze",
    "pi0",
    "chaos_projection",
    "chaos_values",
    "sobolev_norm",
    "random_expansion",
    "parse_expansion",
    "load_expansion",
    "save_expansion",
]

PRUNE_TOL = 1e-12


class HermiteExpansion:
    """A polynomial stored by its Fourier-Hermite coefficients.

    Parameters
    ----------
    dim : int
        Number of variables.
    coeffs : mapping, optional
        ``{beta: c_beta}``; keys are anything :class:`MultiIndex` accepts.
        Exact zeros are dropped.

    Examples
    --------
    >>> f = HermiteExpansion(1, {(0,): 0.5, (2,): 2 ** -0.5})   # x**2
    >>> round(float(f([1.0])), 12)
    1.0
    """

    __slots__ = ("dim", "_coeffs")

    def __init__(self, dim: int, coeffs: Mapping | None = None):
        if int(dim) != dim or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        clean = {}
        for beta, c in (coeffs or {}).items():
            beta = MultiIndex(beta)
            if beta.dim != self.dim:
                raise DimensionError(f"multi-index {tuple(beta)} does not have length {self.dim}")
            c = float(c)
            if not math.isfinite(c):
                raise ValueError(f"coefficient for {tuple(beta)} is not finite")
            if c != 0.0:
                clean[beta] = clean.get(beta, 0.0) + c
        self._coeffs = {b: c for b, c in sorted(clean.items(), key=_key) if c != 0.0}

    # construction helpers

    @classmethod
    def basis(cls, beta, c: float = 1.0) -> "HermiteExpansion":
        """``c * h_beta``."""
        beta = MultiIndex(beta)
        return cls(beta.dim, {beta: c})

    @classmethod
    def constant(cls, dim: int, c: float = 1.0) -> "HermiteExpansion":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def zero(cls, dim: int) -> "HermiteExpansion":
        return cls(dim)

    # mapping-like access

    @property
    def coeffs(self) -> Mapping[MultiIndex, float]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, beta) -> float:
        return self._coeffs.get(MultiIndex(beta), 0.0)

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        """Largest ``|beta|`` carrying a coefficient (0 for the empty expansion)."""
        return max((b.order for b in self._coeffs), default=0)

    @property
    def mean(self) -> float:
        """The coefficient of ``h_0``, i.e. ``int f dgamma_d``."""
        return self._coeffs.get(MultiIndex((0,) * self.dim), 0.0)

    def orders(self) -> list[int]:
        """Sorted distinct ``|beta|`` values present."""
        return sorted({b.order for b in self._coeffs})

    def spectral_gap(self) -> int | None:
        """Smallest nonzero ``|beta|`` carrying a coefficient, or None."""
        nz = [n for n in self.orders() if n > 0]
        return nz[0] if nz else None

    def is_constant(self) -> bool:
        return self.spectral_gap() is None

    def abs_sum(self) -> float:
        return math.fsum(abs(c) for c in self._coeffs.values())

    # evaluation

    def __call__(self, x):
        """Evaluate at one point (returns float) or at an ``(N, d)`` array."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            return self._eval_points(x)
        if x.ndim <= 1 and x.size == self.dim:
            return float(self._eval_points(x.reshape(1, self.dim))[0])
        if x.ndim == 1 and self.dim == 1:
            return self._eval_points(x[:, None])
        raise DimensionError(f"cannot evaluate a {self.dim}-d expansion at shape {x.shape}")

    def _eval_points(self, points: np.ndarray) -> np.ndarray:
        if points.shape[1] != self.dim:
            raise DimensionError(f"points have dimension {points.shape[1]}, expansion has {self.dim}")
        if not self._coeffs:
            return np.zeros(points.shape[0])
        betas = list(self._coeffs)
        c = np.fromiter(self._coeffs.values(), float, len(betas))
        return hermite_basis(betas, points) @ c

    # algebra

    def map_order(self, multiplier: Callable[[int], float]) -> "HermiteExpansion":
        """Spectral multiplier ``c_beta -> multiplier(|beta|) * c_beta``."""
        return HermiteExpansion(self.dim, {b: multiplier(b.order) * c for b, c in self._coeffs.items()})

    def filter(self, keep: Callable[[MultiIndex], bool]) -> "HermiteExpansion":
        return HermiteExpansion(self.dim, {b: c for b, c in self._coeffs.items() if keep(b)})

    def _check_same(self, other):
        if not isinstance(other, HermiteExpansion):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("expansions have different dimensions")
        return other

    def __add__(self, other):
        other = self._check_same(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for b, c in other._coeffs.items():
            out[b] = out.get(b, 0.0) + c
        return HermiteExpansion(self.dim, out)

    def __sub__(self, other):
        other = self._check_same(other)
        if other is NotImplemented:
            return other
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, HermiteExpansion):
            return NotImplemented
        s = float(scalar)
        return HermiteExpansion(self.dim, {b: s * c for b, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def __neg__(self):
        return self * -1.0

    def __eq__(self, other):
        if not isinstance(other, HermiteExpansion):
            return NotImplemented
        return self.dim == other.dim and self._coeffs == other._coeffs

    __hash__ = None

    def max_abs_diff(self, other: "HermiteExpansion") -> float:
        """Largest coefficientwise deviation from ``other``."""
        self._check_same(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return max((abs(self[b] - other[b]) for b in keys), default=0.0)

    def to_document(self) -> dict:
        return {
            "dim": self.dim,
            "coeffs": [{"beta": list(b), "c": c} for b, c in self._coeffs.items()],
        }

    def __repr__(self):
        body = ", ".join(f"{tuple(b)}: {c:.6g}" for b, c in self._coeffs.items())
        return f"HermiteExpansion({self.dim}, {{{body}}})"


def _key(item):
    b = item[0]
    return (b.order, tuple(-e for e in b))


def expansion_eval(f: HermiteExpansion, x) -> float:
    """``f(x) = sum_beta c_beta h_beta(x)`` at a single ``d``-vector."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (f.dim,):
        raise DimensionError(f"expected a {f.dim}-vector, got shape {x.shape}")
    return f(x)


def analyze(f, max_degree: int, grid: GaussHermiteGrid) -> HermiteExpansion:
    """Fourier-Hermite coefficients ``<f, h_beta>`` for ``|beta| <= max_degree``.

    ``f`` maps ``(N, d)`` point arrays to values. For a polynomial ``f`` the
    result is exact once ``grid.exact_degree >= deg(f) + max_degree``.
    Coefficients below ``PRUNE_TOL`` in magnitude are dropped.
    """
    betas = multi_indices(grid.dim, max_degree)
    vals = np.asarray(f(grid.nodes), dtype=float).reshape(-1)
    if vals.shape[0] != grid.size:
        raise DimensionError("f returned the wrong number of values")
    B = hermite_basis(betas, grid.nodes)
    c = (grid.weights * vals) @ B
    return HermiteExpansion(grid.dim, {b: ci for b, ci in zip(betas, c) if abs(ci) >= PRUNE_TOL})


def pi0(f: HermiteExpansion) -> HermiteExpansion:
    """Remove the mean: ``f - int f dgamma_d``."""
    return f.filter(lambda b: b.order > 0)


def chaos_projection(f: HermiteExpansion, n: int) -> HermiteExpansion:
    """Projection onto the ``n``-th Wiener chaos (terms with ``|beta| = n``)."""
    return f.filter(lambda b: b.order == n)


def chaos_values(f: HermiteExpansion, points) -> tuple[list[int], np.ndarray]:
    """Values of every chaos component ``J_n f`` at ``points``.

    Returns the sorted orders ``n`` present in ``f`` and an array of shape
    ``(len(orders), N)`` whose rows are ``J_n f`` on the ``(N, d)`` points.
    Any diagonal operator ``m(|beta|)`` then acts as ``m(orders) @ rows``.
    """
    points = np.asarray(points, dtype=float).reshape(-1, f.dim)
    orders = f.orders()
    if not orders:
        return [], np.zeros((0, points.shape[0]))
    betas = list(f.coeffs)
    B = hermite_basis(betas, points)
    rows = np.zeros((len(orders), points.shape[0]))
    pos = {n: i for i, n in enumerate(orders)}
    for j, b in enumerate(betas):
        rows[pos[b.order]] += f.coeffs[b] * B[:, j]
    return orders, rows


def sobolev_norm(f: HermiteExpansion, alpha: float, p, grid: GaussHermiteGrid) -> float:
    """``||(I - L)^{alpha/2} f||_p``: the multiplier ``(1+|beta|)^{alpha/2}`` then ``lp_norm``."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    g = f.map_order(lambda n: (1.0 + n) ** (alpha / 2.0))
    return lp_norm(g, p, grid)


def random_expansion(dim: int, max_degree: int, rng: np.random.Generator) -> HermiteExpansion:
    """Coefficients uniform on ``[-1, 1]`` for every ``|beta| <= max_degree``."""
    betas = multi_indices(dim, max_degree)
    c = rng.uniform(-1.0, 1.0, size=len(betas))
    return HermiteExpansion(dim, {b: ci for b, ci in zip(betas, c) if abs(ci) >= PRUNE_TOL})


def parse_expansion(doc) -> HermiteExpansion:
    """Build an expansion from ``{"dim": d, "coeffs": [{"beta": [...], "c": x}, ...]}``.

    Malformed documents, wrong-length or negative multi-indices and repeated
    multi-indices raise :class:`ExpansionFormatError`.
    """
    if not isinstance(doc, Mapping):
        raise ExpansionFormatError("expansion document must be an object")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ExpansionFormatError(f"'dim' must be a positive integer, got {dim!r}")
    entries = doc.get("coeffs")
    if not isinstance(entries, list):
        raise ExpansionFormatError("'coeffs' must be a list")
    coeffs = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "beta" not in entry or "c" not in entry:
            raise ExpansionFormatError(f"coeffs[{i}] needs 'beta' and 'c'")
        beta, c = entry["beta"], entry["c"]
        if not isinstance(beta, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in beta):
            raise ExpansionFormatError(f"coeffs[{i}].beta must be a list of integers")
        if len(beta) != dim or any(e < 0 for e in beta):
            raise ExpansionFormatError(f"coeffs[{i}].beta = {beta} is not a multi-index of length {dim}")
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise ExpansionFormatError(f"coeffs[{i}].c must be a finite real")
        key = tuple(beta)
        if key in coeffs:
            raise ExpansionFormatError(f"multi-index {beta} appears twice")
        coeffs[key] = float(c)
    return HermiteExpansion(dim, coeffs)


def load_expansion(path) -> HermiteExpansion:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ExpansionFormatError(f"{path}: not valid JSON ({exc})") from exc
    return parse_expansion(doc)


def save_expansion(f: HermiteExpansion, path) -> None:
    Path(path).write_text(json.dumps(f.to_document(), indent=2) + "\n")
