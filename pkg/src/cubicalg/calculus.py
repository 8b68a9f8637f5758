"""Derivatives of the cubic form and of f(x) = <x^2, x> / |x|^3.

Gradients of ``u`` are Riesz gradients for the algebra's form, so that
``Du(x) = x^2 / 2`` and ``D^2u(x) = L_x`` in any coordinates.  Everything
involving ``f`` is expressed in orthonormal coordinates
(``MetrisedAlgebra.orthonormal``), where the form is the Euclidean one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import _vec

__all__ = ["RayleighEval", "FDReport", "grad_u", "hess_u", "eval_f", "fd_check", "FD_STEP"]

FD_STEP = 1e-5


@dataclass(frozen=True)
class RayleighEval:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


def grad_u(A, x):
    x = _vec(x, A.dim)
    return 0.5 * A.mul(x, x)


def hess_u(A, x):
    return A.lmat(_vec(x, A.dim))


def _f_parts(P, x):
    # P is an orthonormal-coordinate product tensor, x an orthonormal-coordinate vector
    x2 = np.einsum("kij,i,j->k", P, x, x)
    r2 = float(x @ x)
    N = float(x2 @ x)
    return x2, r2, N


def eval_f(A, x, orthonormal=False):
    """Value, gradient and Hessian of f at ``x``.

    ``x`` is given in the algebra's coordinates unless ``orthonormal`` is
    set; gradient and Hessian are always returned in orthonormal coordinates.
    """
    x = _vec(x, A.dim)
    B = A.orthonormal
    if not orthonormal:
        x = A.to_orthonormal(x)
    r2 = float(x @ x)
    if r2 == 0.0:
        raise ValueError("f is undefined at the zero vector")
    P = B.product
    x2, r2, N = _f_parts(P, x)
    r = np.sqrt(r2)
    value = N / r**3
    grad = 3.0 * (x2 * r2 - N * x) / r**5
    L = B.lmat(x)
    n = A.dim
    hess = 3.0 * (
        2.0 * r2 * r2 * L
        - N * r2 * np.eye(n)
        - 3.0 * r2 * (np.outer(x2, x) + np.outer(x, x2))
        + 5.0 * N * np.outer(x, x)
    ) / r**7
    return RayleighEval(float(value), grad, 0.5 * (hess + hess.T))


def _rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.abs(a - b).max() / max(1.0, np.abs(b).max(), np.abs(a).max()))


def _central(fn, x, h):
    """Central differences of ``fn`` along each coordinate; column j is d fn / d x_j."""
    cols = []
    for j in range(len(x)):
        e = np.zeros_like(x)
        e[j] = h
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class FDReport:
    """Relative errors max|analytic - fd| / max(1, max|analytic|, max|fd|)."""

    grad_u: float
    hess_u: float
    f_gradient: float
    f_hessian: float
    h: float
    tol: float = 1e-6

    @property
    def max_error(self):
        return max(self.grad_u, self.hess_u, self.f_gradient, self.f_hessian)

    @property
    def passed(self):
        return self.max_error <= self.tol


def fd_check(A, x, h=FD_STEP, tol=1e-6):
    """Compare closed-form derivatives with central differences of step ``h``."""
    x = _vec(x, A.dim)
    if not 0 < h < 1:
        raise ValueError("step must lie in (0, 1)")
    if not np.any(x):
        raise ValueError("fd_check needs a nonzero point")
    u = lambda y: np.einsum("kij,i,j,k->", A.product, y, y, A.form.gram @ y) / 6.0
    # Euclidean partials of u are G times the Riesz gradient
    e_gu = _rel_err(A.form.gram @ grad_u(A, x), _central(u, x, h))
    e_hu = _rel_err(hess_u(A, x), _central(lambda y: grad_u(A, y), x, h))

    xo = A.to_orthonormal(x)
    ev = eval_f(A, xo, orthonormal=True)
    e_fg = _rel_err(ev.gradient, _central(lambda y: eval_f(A, y, orthonormal=True).value, xo, h))
    fd_h = _central(lambda y: eval_f(A, y, orthonormal=True).gradient, xo, h)
    e_fh = _rel_err(ev.hessian, fd_h)
    return FDReport(e_gu, e_hu, e_fg, e_fh, h, tol)
