"""
gaussbesov: Gaussian harmonic analysis on finite Hermite expansions.

The package evaluates the Ornstein-Uhlenbeck and Poisson-Hermite semigroups,
Riesz and Bessel potentials, and the Gaussian Besov-Lipschitz and
Triebel-Lizorkin norms of polynomials in ``d`` variables, and checks the
inequalities relating them numerically (:mod:`gaussbesov.verify`).
"""
from __future__ import annotations

__version__ = "0.1.0"

from .exceptions import BudgetExceededError, DimensionError, ExpansionFormatError, QuadratureError
from .hermite import (
    INF,
    GaussHermiteGrid,
    LpSpec,
    MultiIndex,
    gauss_hermite_grid,
    grid_for,
    hermite_basis,
    hermite_eval,
    lp_norm,
    multi_indices,
)
from .expansion import (
    HermiteExpansion,
    analyze,
    chaos_projection,
    expansion_eval,
    load_expansion,
    parse_expansion,
    pi0,
    random_expansion,
    save_expansion,
    sobolev_norm,
)
from .quadrature import QuadResult, SubordinationQuadrature, TimeQuadrature, time_integral
from .stable import (
    StableDerivativeForm,
    stable_abs_deriv_constant,
    stable_abs_deriv_mass,
    stable_density,
    stable_derivative_form,
    stable_expectation,
    stable_laplace,
    stable_moment_constant,
    stable_neg_moment,
    stable_tv_constant,
)
from .semigroup import (
    KernelQuadrature,
    ou_apply_mehler,
    ou_apply_spectral,
    ou_kernel,
    ou_maximal,
    poisson_apply_kernel,
    poisson_apply_spectral,
    poisson_apply_subordination,
    poisson_infinity,
    poisson_kernel,
    poisson_time_derivative,
)
from .fractional import (
    bessel_inverse,
    bessel_poisson_integral,
    bessel_potential,
    bessel_via_integral,
    fractional_derivative,
    riesz_derivative_identity_check,
    riesz_potential,
    riesz_via_derivative_integral,
    riesz_via_integral,
)
from .spaces import (
    SpaceParams,
    besov_infty_constant,
    besov_norm,
    besov_seminorm,
    choose_k,
    gk_function,
    hermite_closed_form_norm,
    hermite_closed_form_seminorm,
    triebel_norm,
    triebel_seminorm,
)
from .verify import CheckReport, SuiteConfig, check_contraction, check_interpolation, check_smoothing, run_suite

__all__ = [name for name in dir() if not name.startswith("_") and name not in ("annotations",)]
