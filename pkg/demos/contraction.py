"""P_s, T_s and J_beta shrink the Besov and Triebel norms of a polynomial.

Run: python demos/contraction.py
"""
import numpy as np

from gaussbesov import (
    SpaceParams,
    besov_norm,
    bessel_potential,
    ou_apply_spectral,
    poisson_apply_spectral,
    random_expansion,
    triebel_norm,
)

f = random_expansion(2, 4, np.random.default_rng(1))
params = SpaceParams(0.5, 4, 2)
print(f"||f||_B = {besov_norm(f, params):.6f}   ||f||_F = {triebel_norm(f, params):.6f}")
for s in (0.1, 1.0):
    for name, g in (("P_s", poisson_apply_spectral(f, s)), ("T_s", ou_apply_spectral(f, s)), ("J_s", bessel_potential(f, s))):
        print(f"s={s:<4} {name}: B {besov_norm(g, params):.6f}   F {triebel_norm(g, params):.6f}")
