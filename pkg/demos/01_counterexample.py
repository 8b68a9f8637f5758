"""
An algebra with exactly one idempotent
======================================

Build the counterexample family, search for idempotents from 200 random
starts, and compare with the exact case analysis.
"""
import numpy as np

from cubicalg import (CounterexampleParams, SearchConfig, counterexample_oracle,
                      find_idempotents, make_counterexample, multiply)

for n in (2, 3, 4, 5):
    p = CounterexampleParams.default(n)
    A = make_counterexample(p)
    out = find_idempotents(A, SearchConfig(restarts=200))
    print(f"n={n}  a={np.round(p.a, 4)}")
    for r in out.idempotents:
        print(f"   c = {np.round(r.c, 10) + 0.0}  |c^2 - c| = {r.residual:.1e}  extremal = {r.extremal}")
    print(f"   oracle: {[np.round(c, 10).tolist() for c in counterexample_oracle(p)]}")

# e2 squares into the span of e1, so the e1 axis swallows every idempotent
A = make_counterexample(CounterexampleParams(2, (0.25,)))
e1, e2 = np.eye(2)
print("e1^2 =", multiply(A, e1, e1), " e2^2 =", multiply(A, e2, e2), " e1 e2 =", multiply(A, e1, e2))
