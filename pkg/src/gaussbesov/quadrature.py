"""
Quadrature rules on half lines.

Two families are provided:

* :class:`TimeQuadrature` discretizes integrals ``int_0^inf F(t) dt/t`` with
  Gauss-Legendre panels that are uniform in ``log t``. Integrands of the form
  ``t**power * exp(-rate*t)`` are resolved to machine precision, whatever the
  size of ``power``.
* :class:`SubordinationQuadrature` integrates against the one-sided stable
  law of order 1/2. With ``s = t**2 / (4 v**2)`` the law becomes
  ``(2/sqrt(pi)) exp(-v**2) dv`` on ``(0, inf)``; panels are geometric near
  ``v = 0`` and uniform further out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

__all__ = [
    "QuadResult",
    "TimeQuadrature",
    "time_integral",
    "SubordinationQuadrature",
    "gauss_legendre_panels",
    "lower_power_tail",
    "upper_gamma_tail",
]


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(edges, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule with ``n`` points on each panel.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries.
    n : int
        Points per panel.

    Returns
    -------
    nodes, weights : ndarray
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two panel edges")
    if np.any(np.diff(edges) <= 0):
        raise ValueError("panel edges must be strictly increasing")
    x, w = _leggauss(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def lower_power_tail(power: float, t_min: float) -> float:
    """``int_0^t_min t**power dt/t``."""
    return t_min**power / power


def upper_gamma_tail(power: float, rate: float, t_max: float) -> float:
    """``int_t_max^inf t**power exp(-rate t) dt/t`` (upper incomplete gamma)."""
    if rate <= 0:
        return math.inf
    x = rate * t_max
    return float(special.gammaincc(power, x) * special.gamma(power) / rate**power)


@dataclass(frozen=True)
class QuadResult:
    """A quadrature value with its estimated absolute error."""

    value: float
    error: float

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class TimeQuadrature:
    """Log-spaced panel rule for ``int_0^inf F(t) dt/t``.

    The rule covers ``[t_min, t_max]``; callers account for the two tails,
    either with an analytic bound (``tail_policy="analytic-bound"``) or by
    dropping them (``"truncate"``).
    """

    t_min: float = 1e-6
    t_max: float = 50.0
    panels: int = 40
    points_per_panel: int = 8
    tail_policy: str = "analytic-bound"

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max):
            raise ValueError(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.panels < 1 or self.points_per_panel < 1:
            raise ValueError("panels and points_per_panel must be >= 1")
        if self.tail_policy not in ("analytic-bound", "truncate"):
            raise ValueError(f"unknown tail_policy {self.tail_policy!r}")

    @classmethod
    def auto(
        cls,
        power: float,
        rate: float,
        *,
        eps: float = 1e-15,
        panel_width: float = 0.4,
        points_per_panel: int = 8,
        tail_policy: str = "analytic-bound",
    ) -> "TimeQuadrature":
        """Rule sized for integrands that behave like ``t**power exp(-rate t)``.

        ``t_min`` is chosen so that the power-law head holds at most ``eps``
        of the integral and ``t_max`` so that the exponential tail is below
        ``exp(-40)`` relative to the peak.
        """
        if power <= 0:
            raise ValueError("power must be positive")
        if rate <= 0:
            raise ValueError("rate must be positive")
        t_min = (eps * power) ** (1.0 / power)
        t_min = min(max(t_min, 1e-300), 1e-6)
        peak = power / rate
        t_max = max(peak, 1.0 / rate)
        # relative log-size of the integrand at t against its peak value
        while power * math.log(t_max / peak) - rate * (t_max - peak) > -40.0:
            t_max *= 1.25
        t_max = max(t_max, 2.0 * t_min)
        span = math.log(t_max) - math.log(t_min)
        panels = max(1, math.ceil(span / panel_width))
        return cls(t_min, t_max, panels, points_per_panel, tail_policy)

    @classmethod
    def covering(cls, envelopes, **kwargs) -> "TimeQuadrature":
        """One rule adequate for several ``(power, rate)`` envelopes at once.

        Integrals that must be compared through Hoelder or Minkowski
        inequalities should share nodes; this takes the widest range of the
        individual :meth:`auto` rules at the same panel width.
        """
        rules = [cls.auto(p, r, **kwargs) for p, r in envelopes]
        if not rules:
            raise ValueError("need at least one envelope")
        t_min = min(r.t_min for r in rules)
        t_max = max(r.t_max for r in rules)
        width = kwargs.get("panel_width", 0.4)
        panels = max(1, math.ceil((math.log(t_max) - math.log(t_min)) / width))
        return cls(t_min, t_max, panels, rules[0].points_per_panel, rules[0].tail_policy)

    def rule(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``t_i`` and weights ``w_i`` with ``sum w_i F(t_i) ~ int F dt/t``."""
        edges = np.linspace(math.log(self.t_min), math.log(self.t_max), self.panels + 1)
        v, w = gauss_legendre_panels(edges, self.points_per_panel)
        return np.exp(v), w

    def refined(self) -> "TimeQuadrature":
        """Same interval with twice as many panels (for error estimates)."""
        return replace(self, panels=2 * self.panels)


@dataclass(frozen=True)
class SubordinationQuadrature:
    """Rule for ``int F(s) mu_t(ds)`` in the variable ``v = t / (2 sqrt(s))``.

    Geometric panels with ratio ``log_panel_ratio`` cover ``[v_min, v_split]``
    and uniform panels of width ``linear_panel_width`` cover
    ``[v_split, v_max]``. The stable weight ``(2/sqrt(pi)) exp(-v**2)`` is
    folded into the returned weights.
    """

    v_min: float = 1e-12
    v_split: float = 0.5
    v_max: float = 10.0
    log_panel_ratio: float = 2.0
    linear_panel_width: float = 0.25
    points_per_panel: int = 10

    def __post_init__(self):
        if not (0 < self.v_min < self.v_split < self.v_max):
            raise ValueError("need 0 < v_min < v_split < v_max")
        if self.log_panel_ratio <= 1 or self.linear_panel_width <= 0:
            raise ValueError("panel sizes must be positive")

    def edges(self, breakpoints=()) -> np.ndarray:
        n_log = max(1, math.ceil(math.log(self.v_split / self.v_min) / math.log(self.log_panel_ratio)))
        head = np.geomspace(self.v_min, self.v_split, n_log + 1)
        n_lin = max(1, math.ceil((self.v_max - self.v_split) / self.linear_panel_width))
        body = np.linspace(self.v_split, self.v_max, n_lin + 1)
        e = np.concatenate([head, body[1:]])
        extra = [b for b in breakpoints if self.v_min < b < self.v_max]
        if extra:
            e = np.unique(np.concatenate([e, extra]))
        return e

    def rule(self, breakpoints=()) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``v_i`` and weights including the stable density."""
        v, w = gauss_legendre_panels(self.edges(breakpoints), self.points_per_panel)
        return v, w * (2.0 / math.sqrt(math.pi)) * np.exp(-v * v)

    def head_mass(self) -> float:
        """Stable-law mass carried by ``v < v_min`` (that is, ``s`` beyond range)."""
        return math.erf(self.v_min)

    def tail_mass(self) -> float:
        """Stable-law mass carried by ``v > v_max``."""
        return math.erfc(self.v_max)

    def refined(self) -> "SubordinationQuadrature":
        return replace(
            self,
            log_panel_ratio=math.sqrt(self.log_panel_ratio),
            linear_panel_width=0.5 * self.linear_panel_width,
        )


def time_integral(
    phi,
    power: float,
    rate: float,
    bound,
    t_quad: TimeQuadrature | None = None,
) -> QuadResult:
    """``int_0^inf t**power phi(t) dt/t`` with certified tails.

    Parameters
    ----------
    phi : callable
        Maps an array of ``T`` times to an array of shape ``(T,)`` or
        ``(T, M)``; the caller guarantees ``|phi(t)| <= bound * exp(-rate t)``.
    power, rate : float
        Positive exponents of the envelope.
    bound : float or ndarray
        Envelope constant (one per column when ``phi`` is 2-D).
    t_quad : TimeQuadrature, optional
        Defaults to ``TimeQuadrature.auto(power, rate)``.

    Returns
    -------
    QuadResult
        Scalar fields for 1-D ``phi``, arrays of length ``M`` otherwise.

    Notes
    -----
    The head ``[0, t_min]`` is filled with ``phi(t_min) t_min**power/power``.
    The reported error adds the change under a rule with twice the panels,
    the whole head envelope ``bound t_min**power / power`` and, for
    ``tail_policy="analytic-bound"``, the upper incomplete gamma bound of
    the part beyond ``t_max``.
    """
    quad = t_quad or TimeQuadrature.auto(power, rate)
    t, w = quad.rule()
    coarse = np.dot(w * t**power, phi(t))
    t2, w2 = quad.refined().rule()
    fine = np.dot(w2 * t2**power, phi(t2))
    head_env = lower_power_tail(power, quad.t_min)
    head = np.asarray(phi(np.array([quad.t_min])))[0] * head_env
    err = np.abs(fine - coarse)
    if quad.tail_policy == "analytic-bound":
        err = err + np.asarray(bound) * (head_env + upper_gamma_tail(power, rate, quad.t_max))
    value = fine + head
    if np.ndim(value) == 0:
        return QuadResult(float(value), float(err))
    return QuadResult(np.asarray(value), np.asarray(err))
