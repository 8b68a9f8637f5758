"""Idempotents from the constrained problem <x, x^2> -> max on the unit sphere.

Stationary points of ``<x, x^2>`` on ``|x| = 1`` are exactly the unit
vectors with ``x^2 = lam x``; when ``lam != 0``, ``x / lam`` is an
idempotent.  Local maxima give *extremal* idempotents, for which ``L_c``
is bounded by 1/2 on the orthogonal complement of ``c``.

The enumeration is multi-start and heuristic.  Every restart draws a unit
vector from a counter-based generator keyed on ``(seed, restart)`` and runs
two phases from it:

1. projected gradient ascent with the retraction ``x <- (x + eta g)/|x + eta g|``
   and a backtracking step, followed by a Newton polish of the Lagrange
   system ``{x^2 - lam x = 0, |x|^2 = 1}``;
2. (``newton_sweep``) a damped Newton solve of the same system straight from
   the start, which also reaches saddle points and minima.

Restarts are processed as one vectorized batch; the merged result does not
depend on evaluation order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .calculus import eval_f
from .core import _vec

__all__ = [
    "SearchConfig",
    "StationaryPoint",
    "SearchResult",
    "IdempotentRecord",
    "IdempotentSearch",
    "GapReport",
    "NotIdempotentError",
    "maximize_on_sphere",
    "stationary_to_idempotent",
    "certify_extremal",
    "find_idempotents",
    "demonstrate_oddness_gap",
    "complement_basis",
]

log = logging.getLogger(__name__)

NIL_SQUARE = "nil-square"
IDEMPOTENT = "idempotent-generating"
ZERO_STATUS = "u ≡ 0"


class NotIdempotentError(ValueError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"not an idempotent: |c^2 - c| = {residual:.3e} exceeds tol {tol:g}")


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 200
    seed: int = 0
    max_iters: int = 500
    tol_stat: float = 1e-10
    tol_idem: float = 1e-8
    tol_eig: float = 1e-6
    dedup_radius: float = 1e-5
    newton_sweep: bool = True

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if min(self.tol_stat, self.tol_idem, self.tol_eig, self.dedup_radius) <= 0:
            raise ValueError("tolerances must be positive")
        if self.dedup_radius <= self.tol_idem:
            raise ValueError("dedup_radius must exceed tol_idem")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class StationaryPoint:
    """Unit vector ``x`` (algebra coordinates) with ``x^2 = lam x``."""

    x: np.ndarray
    lam: float
    kind: str
    f_value: float
    residual: float
    local_max: bool = False
    global_max: bool = False


@dataclass(frozen=True)
class SearchResult:
    points: list
    status: str = "ok"
    restarts: int = 0
    failures: int = 0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def global_max(self):
        return self.points[0] if self.points else None


@dataclass(frozen=True)
class IdempotentRecord:
    c: np.ndarray
    residual: float
    f_at_c: float
    extremal: bool
    spectrum_on_perp: tuple
    eigenvalue_one_simple: bool
    hessian_max_on_perp: float
    polished: bool = True
    tol_idem: float = 1e-8
    tol_eig: float = 1e-6


# -- batched kernels, orthonormal coordinates ---------------------------------

def _sq(P, X):
    return np.einsum("kij,ri,rj->rk", P, X, X)


def _rowdot(a, b):
    return np.einsum("ri,ri->r", a, b)


def _start_points(n, cfg):
    X = np.empty((cfg.restarts, n))
    for r in range(cfg.restarts):
        v = np.random.default_rng([cfg.seed, r]).standard_normal(n)
        X[r] = v / np.linalg.norm(v)
    return X


def _ascend(P, X, max_iters, gtol):
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    eta = np.ones(len(X))
    for _ in range(max_iters):
        X2 = _sq(P, X)
        N = _rowdot(X2, X)
        G = 3.0 * (X2 - N[:, None] * X)
        gn2 = _rowdot(G, G)
        active = (gn2 > gtol * gtol) & (eta > 1e-14)
        if not active.any():
            break
        Y = X + eta[:, None] * G
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        NY = _rowdot(_sq(P, Y), Y)
        ok = NY >= N + 1e-4 * eta * gn2
        up = active & ok
        X[up] = Y[up]
        eta[up] = np.minimum(2.0 * eta[up], 1e6)
        eta[active & ~ok] *= 0.5
    return X


def _lagrange_residual(P, X, lam):
    F1 = _sq(P, X) - lam[:, None] * X
    F2 = 0.5 * (_rowdot(X, X) - 1.0)
    return np.concatenate([F1, F2[:, None]], axis=1)


def _newton(P, X, lam, iters=60, ftol=1e-15):
    """Damped Newton on {x^2 - lam x = 0, (|x|^2 - 1)/2 = 0}, batched over rows."""
    X = X.copy()
    lam = lam.copy()
    R, n = X.shape
    eye = np.eye(n)
    F = _lagrange_residual(P, X, lam)
    fn = np.linalg.norm(F, axis=1)
    for _ in range(iters):
        active = fn > ftol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Xa, la = X[idx], lam[idx]
        J = np.zeros((len(idx), n + 1, n + 1))
        J[:, :n, :n] = 2.0 * np.einsum("kij,ri->rkj", P, Xa) - la[:, None, None] * eye
        J[:, :n, n] = -Xa
        J[:, n, :n] = Xa
        try:
            D = np.linalg.solve(J, -F[idx][..., None])[..., 0]
        except np.linalg.LinAlgError:
            D = np.einsum("rij,rj->ri", np.linalg.pinv(J), -F[idx])
        t = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        newX, newl, newf = Xa.copy(), la.copy(), fn[idx].copy()
        for _ in range(30):
            if not pending.any():
                break
            p = np.flatnonzero(pending)
            tx = Xa[p] + t[p, None] * D[p, :n]
            tl = la[p] + t[p] * D[p, n]
            tf = np.linalg.norm(_lagrange_residual(P, tx, tl), axis=1)
            good = tf < fn[idx][p]
            g = p[good]
            newX[g], newl[g], newf[g] = tx[good], tl[good], tf[good]
            pending[g] = False
            t[p[~good]] *= 0.5
        if pending.all():
            break
        X[idx], lam[idx], fn[idx] = newX, newl, newf
        F = _lagrange_residual(P, X, lam)
    return X, lam


def complement_basis(y):
    """Orthonormal basis (columns) of the Euclidean complement of ``y``."""
    n = len(y)
    if n == 1:
        return np.zeros((1, 0))
    q, _ = np.linalg.qr(np.column_stack([y, np.eye(n)]))
    return q[:, 1:n]


def _is_local_max(P, x, N, tol):
    Q = complement_basis(x)
    if Q.shape[1] == 0:
        return N > 0
    L = np.einsum("kij,i->kj", P, x)
    top = np.linalg.eigvalsh(Q.T @ (2.0 * L - N * np.eye(len(x))) @ Q).max()
    return bool(top <= tol)


def _sort_key(sign, f, x):
    return (-round(sign * f, 9),) + tuple(np.round(x, 9) + 0.0)


def maximize_on_sphere(A, cfg=None, maximize=True):
    """Enumerate stationary unit vectors of <x, x^2> by multi-start ascent.

    Returns a :class:`SearchResult` whose points are sorted by decreasing
    ``f`` (increasing when ``maximize`` is false) and then lexicographically;
    the first point is flagged as the global candidate.  ``+x`` and ``-x`` are
    distinct points.
    """
    cfg = cfg or SearchConfig()
    B = A.orthonormal
    n = A.dim
    if B.is_zero():
        return SearchResult([], ZERO_STATUS, cfg.restarts, 0)
    P = B.product
    sign = 1.0 if maximize else -1.0
    scale = float(np.abs(P).max())

    X0 = _start_points(n, cfg)
    Xa = _ascend(sign * P, X0, cfg.max_iters, 1e-6 * scale)
    starts = [Xa]
    if cfg.newton_sweep:
        starts.append(X0)
    # candidate order: restart-major, ascent before sweep
    C = np.stack(starts, axis=1).reshape(-1, n)
    lam0 = _rowdot(_sq(P, C), C)
    Xs, _ = _newton(P, C, lam0)

    kept, failures = [], 0
    for x in Xs:
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or nx == 0:
            failures += 1
            continue
        x = x / nx
        x2 = np.einsum("kij,i,j->k", P, x, x)
        lam = float(x2 @ x)
        res = float(np.linalg.norm(x2 - lam * x))
        if res > cfg.tol_stat * max(1.0, scale):
            failures += 1
            continue
        if any(np.linalg.norm(x - y) <= cfg.dedup_radius for y, _, _ in kept):
            continue
        kept.append((x, lam, res))
    if failures:
        log.debug("%d of %d candidates did not converge", failures, len(Xs))

    pts = []
    for x, lam, res in kept:
        kind = NIL_SQUARE if abs(lam) <= cfg.tol_stat * max(1.0, scale) else IDEMPOTENT
        pts.append(StationaryPoint(
            x=A.from_orthonormal(x), lam=lam, kind=kind, f_value=lam, residual=res,
            local_max=_is_local_max(P, x, lam, cfg.tol_eig * max(1.0, scale)),
        ))
    pts.sort(key=lambda s: _sort_key(sign, s.f_value, s.x))
    if pts:
        pts[0] = replace(pts[0], global_max=True)
    return SearchResult(pts, "ok", cfg.restarts, failures)


def _polish(B, y, steps=5):
    """Newton on F(y) = y^2 - y in orthonormal coordinates; keeps the best iterate."""
    def res(v):
        return float(np.linalg.norm(B.mul(v, v) - v))

    best, best_r = y, res(y)
    for _ in range(steps):
        if best_r == 0.0:
            break
        J = 2.0 * B.lmat(best) - np.eye(B.dim)
        d = np.linalg.lstsq(J, -(B.mul(best, best) - best), rcond=None)[0]
        cand = best + d
        r = res(cand)
        if not r < best_r:
            break
        best, best_r = cand, r
    return best, best_r


def _idem_residual(A, c):
    return float(A.form.norm(A.mul(c, c) - c))


def _certify(A, c, residual, polished, cfg):
    B = A.orthonormal
    y = A.to_orthonormal(c)
    L = B.lmat(y)
    L = 0.5 * (L + L.T)
    Q = complement_basis(y)
    perp = np.sort(np.linalg.eigvalsh(Q.T @ L @ Q))[::-1] if Q.shape[1] else np.zeros(0)
    full = np.linalg.eigvalsh(L)
    ones = int(np.sum(np.abs(full - 1.0) <= cfg.tol_eig))
    extremal = bool(perp.size == 0 or perp[0] <= 0.5 + cfg.tol_eig)
    H = eval_f(A, y, orthonormal=True).hessian
    hmax = float(np.linalg.eigvalsh(Q.T @ H @ Q).max()) if Q.shape[1] else -np.inf
    return IdempotentRecord(
        c=np.array(c), residual=residual, f_at_c=eval_f(A, y, orthonormal=True).value,
        extremal=extremal, spectrum_on_perp=tuple(float(v) for v in perp),
        eigenvalue_one_simple=ones == 1, hessian_max_on_perp=hmax,
        polished=polished, tol_idem=cfg.tol_idem, tol_eig=cfg.tol_eig,
    )


def certify_extremal(A, c, cfg=None):
    """Spectrum of L_c on the complement of ``c`` and the extremality test L_c <= 1/2 there."""
    cfg = cfg or SearchConfig()
    c = _vec(c, A.dim, "c")
    r = _idem_residual(A, c)
    if not np.any(c) or r > cfg.tol_idem:
        raise NotIdempotentError(r, cfg.tol_idem)
    return _certify(A, c, r, True, cfg)


def stationary_to_idempotent(A, s, cfg=None):
    """Scale a stationary point to ``c = x / lam``; ``None`` for a nil-square point."""
    cfg = cfg or SearchConfig()
    if s.kind == NIL_SQUARE:
        return None
    c = np.asarray(s.x, dtype=float) / s.lam
    B = A.orthonormal
    y, _ = _polish(B, A.to_orthonormal(c))
    polished_c = A.from_orthonormal(y)
    r0, r1 = _idem_residual(A, c), _idem_residual(A, polished_c)
    if r1 < r0:
        c, r = polished_c, r1
    else:
        r = r0
    ok = r <= cfg.tol_idem
    if not ok:
        log.warning("idempotent polish left residual %.3e > %g", r, cfg.tol_idem)
    return _certify(A, c, r, ok, cfg)


@dataclass(frozen=True)
class IdempotentSearch:
    idempotents: list
    nil_squares: list
    search: SearchResult = field(repr=False)

    @property
    def status(self):
        return self.search.status


def find_idempotents(A, cfg=None):
    """Full pipeline: stationary points, scaled to idempotents, deduplicated, certified."""
    cfg = cfg or SearchConfig()
    res = maximize_on_sphere(A, cfg)
    recs, nils = [], []
    for s in res:
        rec = stationary_to_idempotent(A, s, cfg)
        if rec is None:
            nils.append(s)
            continue
        for i, other in enumerate(recs):
            d = A.form.norm(rec.c - other.c)
            if d <= cfg.dedup_radius * max(1.0, A.form.norm(rec.c)):
                if rec.residual < other.residual:
                    recs[i] = rec
                break
        else:
            recs.append(rec)
    recs.sort(key=lambda r: _sort_key(1.0, r.f_at_c, r.c))
    return IdempotentSearch(recs, nils, res)


@dataclass(frozen=True)
class GapReport:
    x_plus: np.ndarray
    x_minus: np.ndarray
    f_plus: float
    f_minus: float
    distance: float
    anti_collinear: bool
    odd_defect: float
    local_maxima: list
    independent_maximizers: int
    tol: float = 1e-10


def demonstrate_oddness_gap(A, cfg=None):
    """Compare the sphere maximizer and minimizer of f.

    ``anti_collinear`` reports whether ``x_minus = -x_plus`` within the dedup
    radius (ties for the minimum are broken toward ``-x_plus``).  In that
    case the max/min pair yields only one idempotent direction.  ``independent_maximizers`` is the rank of the set
    of local maxima found.
    """
    cfg = cfg or SearchConfig()
    if A.orthonormal.is_zero():
        raise ValueError("zero algebra: f vanishes identically")
    hi = maximize_on_sphere(A, cfg, maximize=True)
    lo = maximize_on_sphere(A, cfg, maximize=False)
    if not hi.points or not lo.points:
        raise RuntimeError("search found no stationary points")
    xp = hi.points[0].x
    # among minimizers tied with the global candidate, take the one nearest -x_plus
    fmin = lo.points[0].f_value
    tied = [s.x for s in lo if abs(s.f_value - fmin) <= 1e-9 * max(1.0, abs(fmin))]
    xm = min(tied, key=lambda x: A.form.norm(x + xp))
    fp = eval_f(A, xp).value
    fm = eval_f(A, xm).value
    dist = A.form.norm(xm + xp)
    maxima = [s for s in hi if s.local_max]
    rank = int(np.linalg.matrix_rank(np.array([s.x for s in maxima]), tol=1e-6)) if maxima else 0
    return GapReport(
        x_plus=xp, x_minus=xm, f_plus=fp, f_minus=fm, distance=dist,
        anti_collinear=dist <= cfg.dedup_radius, odd_defect=abs(fm + fp),
        local_maxima=maxima, independent_maximizers=rank,
    )
