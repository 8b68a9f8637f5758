"""Reference algebras: the one-idempotent family, Hadamard algebras, random algebras."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product

import numpy as np

from .core import BilinearForm, CubicForm, algebra_from_cubic

__all__ = [
    "CounterexampleParams",
    "make_counterexample",
    "counterexample_oracle",
    "make_hadamard",
    "hadamard_idempotents",
    "make_random_algebra",
    "make_open_peirce_algebra",
]


@dataclass(frozen=True)
class CounterexampleParams:
    """Coefficients of u(x) = x_1 (x_1^2 + 3 a_2 x_2^2 + ... + 3 a_n x_n^2) / 3.

    ``a`` holds ``a_2 .. a_n``; they must be pairwise distinct and lie in (0, 1/2).
    """

    n: int
    a: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if len(a) != self.n - 1:
            raise ValueError(f"need {self.n - 1} coefficients a_2..a_n, got {len(a)}")
        if not all(0.0 < v < 0.5 for v in a):
            raise ValueError("coefficients must lie in the open interval (0, 1/2)")
        if len(set(a)) != len(a):
            raise ValueError("coefficients must be pairwise distinct")

    @classmethod
    def default(cls, n):
        """a_k = (2k - 1) / (4n) for k = 2..n."""
        return cls(n, tuple((2 * k - 1) / (4 * n) for k in range(2, n + 1)))


def make_counterexample(p):
    if isinstance(p, int):
        p = CounterexampleParams.default(p)
    entries = {(0, 0, 0): 2.0}
    for k, ak in enumerate(p.a, start=1):
        entries[(0, k, k)] = 2.0 * ak
    return algebra_from_cubic(CubicForm.from_entries(p.n, entries))


def counterexample_oracle(p):
    """All nonzero idempotents of the counterexample algebra, by exact case analysis.

    Work with the normalization Du(x) = x, i.e. x_1^2 + sum a_k x_k^2 = x_1 and
    2 a_k x_k x_1 = x_k.  Since x^2 = 2 Du(x), every such x gives the
    idempotent x / 2.
    """
    if isinstance(p, int):
        p = CounterexampleParams.default(p)
    n, a = p.n, p.a
    sols = []
    # all x_k = 0 (k >= 2): x_1^2 = x_1
    for x1 in (0.0, 1.0):
        sols.append(np.r_[x1, np.zeros(n - 1)])
    # exactly one x_k != 0: x_1 = 1/(2 a_k), x_k^2 = (2 a_k - 1) / (4 a_k^3)
    for k, ak in enumerate(a, start=1):
        sq = (2 * ak - 1) / (4 * ak**3)
        if sq > 0:
            for s in (1.0, -1.0):
                x = np.zeros(n)
                x[0], x[k] = 1 / (2 * ak), s * np.sqrt(sq)
                sols.append(x)
    # two or more x_k != 0 would force a_i = a_j; excluded by the parameters
    return [x / 2 for x in sols if np.any(x)]


def make_hadamard(n):
    """Componentwise product on R^n: u = (x_1^3 + ... + x_n^3) / 6."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return algebra_from_cubic(CubicForm.from_entries(n, {(i, i, i): 1.0 for i in range(n)}))


def hadamard_idempotents(n):
    """Exhaustive oracle: x_i^2 = x_i componentwise, so the nonzero 0/1 vectors."""
    return [np.array(v, dtype=float) for v in product((0, 1), repeat=n) if any(v)]


def make_random_algebra(n, seed, scale=1.0):
    if n < 1:
        raise ValueError("n must be at least 1")
    if scale < 0:
        raise ValueError("scale must be non-negative")
    rng = np.random.default_rng(seed)
    idx = list(combinations_with_replacement(range(n), 3))
    vals = rng.uniform(-scale, scale, size=len(idx))
    return algebra_from_cubic(CubicForm.from_entries(n, dict(zip(idx, vals))), BilinearForm.identity(n))


def make_open_peirce_algebra():
    """3-dim algebra where c = e_1 has dim V_c(1) = 2 but V_c(1) is not closed.

    e_1 e_1 = e_1, e_1 e_2 = e_2, e_1 e_3 = 0 and e_2 e_2 = e_1 + e_3.
    """
    return algebra_from_cubic(CubicForm.from_entries(3, {(0, 0, 0): 1.0, (0, 1, 1): 1.0, (1, 1, 2): 1.0}))
