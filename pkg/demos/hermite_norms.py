"""Besov seminorms of single Hermite polynomials: quadrature against the closed form.

Run: python demos/hermite_norms.py
"""
from gaussbesov import HermiteExpansion, SpaceParams, besov_seminorm, hermite_closed_form_seminorm, triebel_seminorm

print(f"{'beta':>4} {'alpha':>5} {'p':>3} {'q':>3}  {'Besov':>12} {'Triebel':>12} {'closed form':>12}")
for beta in range(1, 6):
    for alpha, p, q in ((0.5, 2, 2), (1.3, 4, 2), (0.0, 2, 4)):
        params = SpaceParams(alpha, p, q)
        f = HermiteExpansion.basis((beta,))
        b = besov_seminorm(f, params)
        t = triebel_seminorm(f, params)
        c = hermite_closed_form_seminorm((beta,), params)
        print(f"{beta:>4} {alpha:>5} {p:>3} {q:>3}  {b:12.9f} {t:12.9f} {c:12.9f}")
