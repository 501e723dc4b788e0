"""Three ways to evaluate the Poisson-Hermite semigroup on a random polynomial.

The spectral multiplier, subordination of the Ornstein-Uhlenbeck semigroup,
and integration against the kernel p(t, x, y) should agree.

Run: python demos/semigroups.py
"""
import numpy as np

from gaussbesov import (
    poisson_apply_kernel,
    poisson_apply_spectral,
    poisson_apply_subordination,
    poisson_kernel,
    random_expansion,
)

f = random_expansion(1, 6, np.random.default_rng(0))
print("p(1, 0, 0) =", poisson_kernel(1.0, [0.0], [0.0]))
print(f"{'t':>5} {'x':>6} {'spectral':>14} {'subordination':>14} {'kernel':>14}")
for t in (0.1, 1.0, 5.0):
    for x in (-1.5, 0.3):
        spectral = poisson_apply_spectral(f, t)([x])
        sub = poisson_apply_subordination(f, t, [x])
        ker = poisson_apply_kernel(f, t, [x])
        print(f"{t:5} {x:6} {spectral:14.10f} {sub:14.10f} {ker:14.10f}")
