"""Peirce data of an idempotent and the decomposability test.

For an idempotent ``c`` the eigenvalue-1 space ``V_c(1)`` of ``L_c`` decides
decomposability when it is a subalgebra: ``c`` is indecomposable iff
``dim V_c(1) = 1``.  When the dimension is at least two, ``c`` is a unit of
``V_c(1)`` and an extremal idempotent ``c1`` of that subalgebra splits
``c = c1 + (c - c1)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import BilinearForm, MetrisedAlgebra, _vec
from .search import (
    NotIdempotentError,
    SearchConfig,
    maximize_on_sphere,
    stationary_to_idempotent,
)

__all__ = [
    "TOL_SUB",
    "PeirceSpace",
    "PeirceReport",
    "UnitSplit",
    "peirce_spectrum",
    "check_subalgebra",
    "build_restricted_algebra",
    "decide_decomposable",
    "find_unit",
    "corollary_unit_split",
]

log = logging.getLogger(__name__)

TOL_SUB = 1e-8

INDECOMPOSABLE = "indecomposable"
DECOMPOSABLE = "decomposable"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PeirceSpace:
    value: float
    basis: np.ndarray  # rows, G-orthonormal, algebra coordinates

    @property
    def multiplicity(self):
        return len(self.basis)


def _require_idempotent(A, c, tol):
    c = _vec(c, A.dim, "c")
    r = float(A.form.norm(A.mul(c, c) - c))
    if not np.any(c) or r > tol:
        raise NotIdempotentError(r, tol)
    return c


def peirce_spectrum(A, c, tol_idem=1e-8, tol_eig=1e-6):
    """Eigenvalue clusters of L_c, largest first, with G-orthonormal eigenbases."""
    c = _require_idempotent(A, c, tol_idem)
    B = A.orthonormal
    L = B.lmat(A.to_orthonormal(c))
    w, v = np.linalg.eigh(0.5 * (L + L.T))
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    groups = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] <= tol_eig:
            groups[-1].append(i)
        else:
            groups.append([i])
    out = []
    for g in groups:
        basis = np.array([A.from_orthonormal(v[:, i]) for i in g])
        out.append(PeirceSpace(float(np.mean(w[g])), basis))
    return out


def _one_space(spaces, tol_eig):
    for s in spaces:
        if abs(s.value - 1.0) <= tol_eig:
            return s.basis
    return np.zeros((0, spaces[0].basis.shape[1]))


def check_subalgebra(A, basis, tol=TOL_SUB):
    """Closure of span(basis) under the product.

    Returns ``(closed, residual)`` where the residual is the largest G-norm of
    the part of ``b_i b_j`` orthogonal to the span.
    """
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if basis.size == 0:
        return True, 0.0
    g = A.form.gram
    worst = 0.0
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            p = A.mul(basis[i], basis[j])
            proj = basis.T @ (basis @ g @ p)
            worst = max(worst, A.form.norm(p - proj))
    return worst <= tol, worst


def build_restricted_algebra(A, basis, tol=TOL_SUB):
    """The subalgebra span(basis) written in the coordinates of ``basis``."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    closed, res = check_subalgebra(A, basis, tol)
    if not closed:
        raise ValueError(f"span is not closed under multiplication (residual {res:.3e})")
    g = A.form.gram
    gram_w = basis @ g @ basis.T
    # <b_i b_j, b_l> for all i, j, l
    m = np.einsum("kab,ia,jb,kq,lq->ijl", A.product, basis, basis, g, basis)
    k = len(basis)
    p = np.linalg.solve(gram_w, m.reshape(k * k, k).T).reshape(k, k, k)
    p = 0.5 * (p + p.transpose(0, 2, 1))
    return MetrisedAlgebra(p, BilinearForm(0.5 * (gram_w + gram_w.T)))


@dataclass(frozen=True)
class PeirceReport:
    c: np.ndarray
    eigenvalues: list  # (value, multiplicity)
    v1_basis: np.ndarray
    dim_v1: int
    v1_is_subalgebra: bool
    subalgebra_residual: float
    verdict: str
    decomposition: tuple = None
    checks: dict = None
    message: str = ""


def _extremal_split(W, unit_w, cfg):
    """Extremal idempotent of W distinct from ``unit_w``, or None."""
    res = maximize_on_sphere(W, cfg)
    for s in res:
        if s.lam <= 0:
            continue
        rec = stationary_to_idempotent(W, s, cfg)
        if rec is None or rec.residual > cfg.tol_idem:
            continue
        if W.form.norm(rec.c - unit_w) > cfg.dedup_radius * max(1.0, W.form.norm(unit_w)):
            return rec
    return None


def _verify_pair(A, c, c1, c2):
    n = A.form.norm
    return {
        "sum": float(n(c1 + c2 - c)),
        "c1_residual": float(n(A.mul(c1, c1) - c1)),
        "c2_residual": float(n(A.mul(c2, c2) - c2)),
        "c1c2": float(n(A.mul(c1, c2))),
        "c_c1": float(n(A.mul(c, c1) - c1)),
        "c_c2": float(n(A.mul(c, c2) - c2)),
        "rank": int(np.linalg.matrix_rank(np.array([c1, c2]), tol=1e-8)),
    }


def decide_decomposable(A, c, cfg=None, tol_sub=TOL_SUB):
    cfg = cfg or SearchConfig()
    c = _require_idempotent(A, c, cfg.tol_idem)
    spaces = peirce_spectrum(A, c, cfg.tol_idem, cfg.tol_eig)
    eig = [(s.value, s.multiplicity) for s in spaces]
    v1 = _one_space(spaces, cfg.tol_eig)
    closed, sub_res = check_subalgebra(A, v1, tol_sub)
    base = dict(c=c, eigenvalues=eig, v1_basis=v1, dim_v1=len(v1),
                v1_is_subalgebra=closed, subalgebra_residual=sub_res)
    if len(v1) <= 1:
        return PeirceReport(**base, verdict=INDECOMPOSABLE)
    if not closed:
        return PeirceReport(**base, verdict=INCONCLUSIVE,
                            message=f"V_c(1) is not a subalgebra (residual {sub_res:.3e})")
    W = build_restricted_algebra(A, v1, tol_sub)
    unit_w = np.linalg.solve(W.form.gram, v1 @ A.form.gram @ c)
    rec = _extremal_split(W, unit_w, cfg)
    if rec is None:
        return PeirceReport(**base, verdict=INCONCLUSIVE,
                            message=f"no extremal idempotent found in V_c(1) after {cfg.restarts} restarts")
    c1 = v1.T @ rec.c
    c2 = c - c1
    chk = _verify_pair(A, c, c1, c2)
    tol = cfg.tol_idem
    ok = (chk["rank"] == 2 and chk["sum"] <= 1e-12 * max(1.0, A.form.norm(c))
          and max(chk["c1_residual"], chk["c2_residual"], chk["c1c2"],
                  chk["c_c1"], chk["c_c2"]) <= tol)
    if not ok:
        return PeirceReport(**base, verdict=INCONCLUSIVE, decomposition=(c1, c2), checks=chk,
                            message="candidate split failed verification")
    return PeirceReport(**base, verdict=DECOMPOSABLE, decomposition=(c1, c2), checks=chk)


def find_unit(A, tol=1e-6):
    """Least-squares solve of L_e = Id; returns ``(e, residual)`` with e None if absent."""
    n = A.dim
    # L_e = sum_i e_i P[:, i, :]
    M = A.product.transpose(0, 2, 1).reshape(n * n, n)
    e, *_ = np.linalg.lstsq(M, np.eye(n).reshape(-1), rcond=None)
    res = float(np.abs(A.lmat(e) - np.eye(n)).max())
    return (e if res <= tol else None), res


@dataclass(frozen=True)
class UnitSplit:
    unit: np.ndarray
    idempotent: np.ndarray
    complement: np.ndarray
    residuals: dict


def corollary_unit_split(A, cfg=None):
    """Split the unit as ``e = c' + (e - c')`` with ``c'`` extremal; None without a unit."""
    cfg = cfg or SearchConfig()
    if A.dim < 2:
        return None
    e, res = find_unit(A, cfg.tol_eig)
    if e is None:
        log.info("no unit: least-squares residual %.3e", res)
        return None
    rec = _extremal_split(A, e, cfg)
    if rec is None:
        log.warning("no extremal idempotent distinct from the unit found")
        return None
    c1 = rec.c
    c2 = e - c1
    n = A.form.norm
    r = {
        "unit": res,
        "idempotent": float(n(A.mul(c1, c1) - c1)),
        "complement": float(n(A.mul(c2, c2) - c2)),
    }
    return UnitSplit(e, c1, c2, r)

