"""
Extremal idempotents of random algebras
=======================================

The global maximizer x of f gives c = x / <x^2, x>.  On the complement
of c, L_c never exceeds 1/2, and 1 is a simple eigenvalue.
"""
import numpy as np

from cubicalg import SearchConfig, eval_f, make_random_algebra, maximize_on_sphere, stationary_to_idempotent

cfg = SearchConfig(restarts=100)
for seed in range(1, 7):
    n = 3 + (seed - 1) % 4
    A = make_random_algebra(n, seed)
    top = maximize_on_sphere(A, cfg).global_max
    rec = stationary_to_idempotent(A, top, cfg)
    print(f"seed {seed} n={n}: f_max={top.f_value:.4f}  residual={rec.residual:.1e}"
          f"  max L_c on c-perp={max(rec.spectrum_on_perp):.4f}  simple 1: {rec.eigenvalue_one_simple}")

# at the sphere point, the Hessian of f on c-perp is 3(2 L_c - I)/|c|
c = rec.c
r = np.linalg.norm(c)
H = eval_f(A, c / r).hessian
print("Hessian eigenvalues:", np.round(np.linalg.eigvalsh(H), 4))
