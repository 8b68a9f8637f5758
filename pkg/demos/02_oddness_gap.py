"""
Maximum and minimum of f on the sphere
======================================

f(x) = <x^2, x> / |x|^3 is odd, so the minimizer of f is minus the
maximizer.  Both then give the same idempotent direction, and a
max/min argument yields only one idempotent.
"""
from cubicalg import SearchConfig, demonstrate_oddness_gap, make_counterexample, make_hadamard

cfg = SearchConfig()
for name, A in [("counterexample n=3", make_counterexample(3)), ("hadamard n=3", make_hadamard(3))]:
    g = demonstrate_oddness_gap(A, cfg)
    print(name)
    print(f"   x+ = {g.x_plus.round(8) + 0.0}  f+ = {g.f_plus:.6f}")
    print(f"   x- = {g.x_minus.round(8) + 0.0}  f- = {g.f_minus:.6f}")
    print(f"   anti-collinear: {g.anti_collinear}  local maxima: {len(g.local_maxima)}"
          f"  independent: {g.independent_maximizers}")
