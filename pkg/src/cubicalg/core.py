"""Cubic forms, bilinear forms and the commutative metrised algebras they induce.

A cubic form ``u`` on R^n is stored through its full linearization
``T[i, j, k] = u(e_i, e_j, e_k)``, a fully symmetric order-3 tensor, so that
``u(x) = T(x, x, x) / 6``.  Given a positive definite Gram matrix ``G`` the
product of the associated algebra is the unique ``xy`` with
``<xy, z> = T(x, y, z)`` for every ``z``.

Vectors are plain 1-d numpy arrays in the fixed coordinate basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, permutations

import numpy as np

__all__ = [
    "FormError",
    "BilinearForm",
    "CubicForm",
    "MetrisedAlgebra",
    "StructureReport",
    "TOL_STRUCT",
    "polarize",
    "algebra_from_cubic",
    "cubic_from_algebra",
    "multiply",
    "left_mult_matrix",
    "check_structure",
]

TOL_STRUCT = 1e-9


class FormError(ValueError):
    """Raised for a Gram matrix that is not symmetric positive definite."""


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _vec(x, n, name="x"):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"{name} has shape {x.shape}, expected ({n},)")
    return x


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Symmetric positive definite form <x, y> = x^T G y."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise FormError(f"gram must be a non-empty square matrix, got shape {g.shape}")
        if not np.allclose(g, g.T, rtol=0, atol=1e-12 * max(1.0, np.abs(g).max())):
            raise FormError("form not symmetric")
        g = 0.5 * (g + g.T)
        if not np.all(np.isfinite(g)) or np.linalg.eigvalsh(g).min() <= 0:
            raise FormError("form not positive definite")
        object.__setattr__(self, "gram", _frozen(g))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @property
    def dim(self):
        return self.gram.shape[0]

    @cached_property
    def is_identity(self):
        return bool(np.array_equal(self.gram, np.eye(self.dim)))

    @cached_property
    def sqrt(self):
        """Symmetric square root S with S @ S = G; x -> S x maps to orthonormal coordinates."""
        w, v = np.linalg.eigh(self.gram)
        return _frozen((v * np.sqrt(w)) @ v.T)

    @cached_property
    def inv_sqrt(self):
        w, v = np.linalg.eigh(self.gram)
        return _frozen((v / np.sqrt(w)) @ v.T)

    def inner(self, x, y):
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def norm(self, x):
        return float(np.sqrt(max(self.inner(x, x), 0.0)))


@dataclass(frozen=True, eq=False)
class CubicForm:
    """Cubic form held as its symmetric trilinear tensor.

    Build one with :meth:`from_entries` (canonical ``i <= j <= k`` entries,
    0-based) or :meth:`from_tensor`; only the canonical entries of a full
    tensor are read, the rest is filled in by symmetry.
    """

    tensor: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        n = t.shape[0] if t.ndim == 3 else -1
        if t.ndim != 3 or t.shape != (n, n, n) or n < 1:
            raise ValueError(f"cubic tensor must have shape (n, n, n), got {t.shape}")
        object.__setattr__(self, "tensor", _frozen(_symmetrize_from_canonical(t)))

    @classmethod
    def from_entries(cls, dim, entries):
        """``entries`` maps 0-based ``(i, j, k)`` with ``i <= j <= k`` to T[i, j, k]."""
        t = np.zeros((dim, dim, dim))
        for (i, j, k), v in dict(entries).items():
            if not 0 <= i <= j <= k < dim:
                raise ValueError(f"entry index {(i, j, k)} is not canonical for dim {dim}")
            t[i, j, k] = v
        return cls(t)

    @classmethod
    def from_tensor(cls, t):
        return cls(t)

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, dim, dim)))

    @property
    def dim(self):
        return self.tensor.shape[0]

    def entries(self, nonzero=False):
        """Canonical entries as a dict ``{(i, j, k): value}`` with ``i <= j <= k``."""
        out = {}
        for idx in combinations_with_replacement(range(self.dim), 3):
            v = float(self.tensor[idx])
            if not nonzero or v != 0.0:
                out[idx] = v
        return out

    def trilinear(self, x, y, z):
        n = self.dim
        return float(np.einsum("ijk,i,j,k->", self.tensor, _vec(x, n), _vec(y, n, "y"), _vec(z, n, "z")))

    def __call__(self, x):
        x = _vec(x, self.dim)
        return float(np.einsum("ijk,i,j,k->", self.tensor, x, x, x)) / 6.0

    def scaled(self, t):
        return CubicForm(t * self.tensor)

    def is_zero(self, tol=1e-12):
        return bool(np.abs(self.tensor).max() <= tol)


def _symmetrize_from_canonical(t):
    n = t.shape[0]
    out = np.empty_like(t)
    for idx in combinations_with_replacement(range(n), 3):
        v = t[idx]
        for p in set(permutations(idx)):
            out[p] = v
    return out


@dataclass(frozen=True, eq=False)
class MetrisedAlgebra:
    """Commutative algebra with structure tensor ``P[k, i, j]`` and a bilinear form.

    ``(xy)_k = sum_ij P[k, i, j] x_i y_j``.  Construction does not enforce
    commutativity or associativity of the form; use :func:`check_structure`.
    """

    product: np.ndarray
    form: BilinearForm = None
    cubic: CubicForm = field(default=None, repr=False)  # source form, when known

    def __post_init__(self):
        p = np.asarray(self.product, dtype=float)
        n = p.shape[0] if p.ndim == 3 else -1
        if p.ndim != 3 or p.shape != (n, n, n) or n < 1:
            raise ValueError(f"product tensor must have shape (n, n, n), got {p.shape}")
        form = self.form if self.form is not None else BilinearForm.identity(n)
        if not isinstance(form, BilinearForm):
            form = BilinearForm(form)
        if form.dim != n:
            raise ValueError(f"form has dim {form.dim}, algebra has dim {n}")
        object.__setattr__(self, "product", _frozen(p))
        object.__setattr__(self, "form", form)

    @property
    def dim(self):
        return self.product.shape[0]

    def mul(self, x, y):
        return np.einsum("kij,i,j->k", self.product, x, y)

    def lmat(self, x):
        return np.einsum("kij,i->kj", self.product, x)

    @cached_property
    def orthonormal(self):
        """The same algebra written in coordinates where the form is the identity."""
        if self.form.is_identity:
            return self
        s, si = self.form.sqrt, self.form.inv_sqrt
        p = np.einsum("kl,lab,ai,bj->kij", s, self.product, si, si)
        return MetrisedAlgebra(p, BilinearForm.identity(self.dim))

    def to_orthonormal(self, x):
        return self.form.sqrt @ x

    def from_orthonormal(self, y):
        return self.form.inv_sqrt @ y

    def is_zero(self, tol=1e-12):
        return bool(np.abs(self.product).max() <= tol)


def polarize(u, x, y, z):
    """Full linearization u(x, y, z) of the cubic form ``u``."""
    return u.trilinear(x, y, z)


def algebra_from_cubic(u, form=None):
    """Algebra V(u): solve G (xy) = (T(x, y, e_k))_k for every basis pair."""
    if form is None:
        form = BilinearForm.identity(u.dim)
    elif not isinstance(form, BilinearForm):
        form = BilinearForm(form)
    if form.dim != u.dim:
        raise ValueError(f"form has dim {form.dim}, cubic form has dim {u.dim}")
    n = u.dim
    rhs = u.tensor.transpose(2, 0, 1).reshape(n, n * n)
    try:
        p = np.linalg.solve(form.gram, rhs).reshape(n, n, n)
    except np.linalg.LinAlgError as exc:
        raise FormError(f"singular form: {exc}") from None
    # exact commutativity despite solve rounding
    p = 0.5 * (p + p.transpose(0, 2, 1))
    return MetrisedAlgebra(p, form, u)


def _form_products(A):
    """M[i, j, k] = <e_i e_j, e_k>."""
    return np.einsum("lij,lk->ijk", A.product, A.form.gram)


def cubic_from_algebra(A, tol=TOL_STRUCT):
    """Recover T[i, j, k] = <e_i e_j, e_k>, i.e. u_A(x) = <xx, x>/6."""
    rep = check_structure(A, tol=tol)
    if not rep.passed:
        raise ValueError(f"algebra fails structural checks: {rep.summary()}")
    return CubicForm(_form_products(A))


def multiply(A, x, y):
    n = A.dim
    return A.mul(_vec(x, n), _vec(y, n, "y"))


def left_mult_matrix(A, x):
    """Matrix of L_x : y -> xy; column j is x e_j."""
    return A.lmat(_vec(x, A.dim))


@dataclass(frozen=True)
class StructureReport:
    commutativity: float
    associativity: float
    self_adjointness: float
    tol: float
    scale: float = 1.0
    samples: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return max(self.commutativity, self.associativity, self.self_adjointness) <= self.tol

    def summary(self):
        return (
            f"commutativity={self.commutativity:.3g}, associativity={self.associativity:.3g}, "
            f"self_adjointness={self.self_adjointness:.3g} (tol {self.tol:g})"
        )


def check_structure(A, tol=TOL_STRUCT, samples=16, seed=0):
    """Max violations of commutativity, <xy,z> = <x,yz> and G-self-adjointness of L_x.

    Residuals are absolute after dividing by ``max(1, max|<e_i e_j, e_k>|)``.
    """
    m = _form_products(A)
    scale = max(1.0, float(np.abs(m).max()))
    comm = float(np.abs(A.product - A.product.transpose(0, 2, 1)).max())
    # <e_i e_j, e_k> against <e_i, e_j e_k> = <e_j e_k, e_i>
    assoc = float(np.abs(m - m.transpose(2, 0, 1)).max())
    rng = np.random.default_rng(seed)
    g = A.form.gram
    # L_x is linear in x, so the basis vectors settle it; random unit x add a cross-check
    xs = list(np.eye(A.dim))
    for _ in range(samples):
        x = rng.standard_normal(A.dim)
        xs.append(x / np.linalg.norm(x))
    sa = 0.0
    for x in xs:
        gl = g @ A.lmat(x)
        sa = max(sa, float(np.abs(gl - gl.T).max()))
    return StructureReport(comm / scale, assoc / scale, sa / scale, tol, scale, samples)
