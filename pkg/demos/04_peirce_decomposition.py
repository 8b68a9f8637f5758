"""
Splitting idempotents through the eigenvalue-1 space
=====================================================

An idempotent c splits into two orthogonal idempotents exactly when
the eigenvalue-1 space of L_c has dimension at least two.  This
requires that space to be a subalgebra.  The last algebra shows that
this can fail.
"""
from cubicalg import (SearchConfig, corollary_unit_split, decide_decomposable, hadamard_idempotents,
                      make_counterexample, make_hadamard, make_open_peirce_algebra, peirce_spectrum)

cfg = SearchConfig(restarts=60)
A = make_hadamard(3)
for c in hadamard_idempotents(3):
    rep = decide_decomposable(A, c, cfg)
    pair = "" if rep.decomposition is None else f"= {rep.decomposition[0].round(6)} + {rep.decomposition[1].round(6)}"
    print(f"c={c}  dim V(1)={rep.dim_v1}  {rep.verdict} {pair}")

sp = corollary_unit_split(A, cfg)
print("unit", sp.unit, "splits as", sp.idempotent.round(8), "+", sp.complement.round(8))

ce = make_counterexample(2)
print("counterexample:", [(round(s.value, 6), s.multiplicity) for s in peirce_spectrum(ce, [0.5, 0])],
      decide_decomposable(ce, [0.5, 0], cfg).verdict)

op = make_open_peirce_algebra()
rep = decide_decomposable(op, [1.0, 0, 0], cfg)
print(f"open algebra: dim V(1)={rep.dim_v1}, subalgebra={rep.v1_is_subalgebra},"
      f" residual={rep.subalgebra_residual:.3f}, verdict {rep.verdict}")
