"""Command-line front end.

Every verb except ``generate`` prints one JSON run report on standard output.
Exit codes: 0 ok, 1 inconclusive, 2 input error, 3 internal failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .calculus import FD_STEP, fd_check
from .core import TOL_STRUCT, FormError, check_structure
from .fileio import AlgebraFileError, dumps_algebra, loads_algebra
from .peirce import TOL_SUB, check_subalgebra, decide_decomposable, peirce_spectrum
from .search import NotIdempotentError, SearchConfig, demonstrate_oddness_gap, find_idempotents
from .zoo import CounterexampleParams, make_counterexample, make_hadamard, make_random_algebra

__all__ = [
    "RunReport",
    "cmd_check",
    "cmd_idempotents",
    "cmd_peirce",
    "cmd_decompose",
    "cmd_fd_check",
    "cmd_gap_demo",
    "cmd_generate",
    "main",
]

EXIT = {"ok": 0, "inconclusive": 1, "error": 2, "internal": 3}


class InputError(ValueError):
    pass


def _plain(v):
    """JSON-ready copy: numpy to Python, non-finite floats to strings."""
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return str(v)
        return v + 0.0  # no negative zero
    return v


def _checked(value, tol):
    return {"value": value, "tol": tol, "pass": bool(value <= tol)}


@dataclass
class RunReport:
    command: str
    input_digest: str = ""
    config: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    status: str = "ok"
    message: str = ""
    internal: bool = field(default=False, repr=False)

    def to_json(self):
        doc = {
            "command": self.command,
            "input_digest": self.input_digest,
            "config": self.config,
            "results": self.results,
            "status": self.status,
            "message": self.message,
        }
        return json.dumps(_plain(doc), indent=2, ensure_ascii=False) + "\n"

    @property
    def exit_code(self):
        return EXIT["internal"] if self.internal else EXIT[self.status]


def _read(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    try:
        A = loads_algebra(raw.decode("utf-8"))
    except UnicodeDecodeError:
        raise InputError("input is not UTF-8 text") from None
    except (AlgebraFileError, FormError) as exc:
        raise InputError(str(exc)) from None
    return A, digest


def parse_vector(text, n=None):
    try:
        v = np.array([float(t) for t in str(text).split(",")])
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}") from None
    if n is not None and len(v) != n:
        raise InputError(f"vector has {len(v)} entries, algebra has dim {n}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector entries must be finite")
    return v


def _idem_json(rec):
    return {
        "c": rec.c,
        "residual": _checked(rec.residual, rec.tol_idem),
        "f_at_c": rec.f_at_c,
        "extremal": rec.extremal,
        "spectrum_on_perp": list(rec.spectrum_on_perp),
        "max_on_perp": {"value": max(rec.spectrum_on_perp, default=-math.inf),
                        "bound": 0.5, "tol": rec.tol_eig},
        "eigenvalue_one_simple": rec.eigenvalue_one_simple,
    }


def _point_json(s, tol):
    return {"x": s.x, "lambda": s.lam, "f_value": s.f_value,
            "residual": _checked(s.residual, tol), "local_max": s.local_max}


def _structure_json(rep):
    return {
        "commutativity": _checked(rep.commutativity, rep.tol),
        "associativity": _checked(rep.associativity, rep.tol),
        "self_adjointness": _checked(rep.self_adjointness, rep.tol),
    }


def _fd_json(rep):
    return {
        "h": rep.h,
        "grad_u": _checked(rep.grad_u, rep.tol),
        "hess_u": _checked(rep.hess_u, rep.tol),
        "f_gradient": _checked(rep.f_gradient, rep.tol),
        "f_hessian": _checked(rep.f_hessian, rep.tol),
    }


def _sample_point(n, seed):
    v = np.random.default_rng([seed, 0xFD]).standard_normal(n)
    return v / np.linalg.norm(v)


def cmd_check(path, seed=0, h=FD_STEP, tol_struct=TOL_STRUCT):
    A, digest = _read(path)
    rep = RunReport("check", digest, {"seed": seed, "h": h, "tol_struct": tol_struct})
    st = check_structure(A, tol=tol_struct, seed=seed)
    x = _sample_point(A.dim, seed)
    fd = fd_check(A, x, h)
    rep.results = {"structure": _structure_json(st), "fd": _fd_json(fd), "point": x}
    if not (st.passed and fd.passed):
        rep.status, rep.message = "error", "structural or derivative check failed"
    return rep


def cmd_fd_check(path, point=None, h=FD_STEP, seed=0):
    A, digest = _read(path)
    x = _sample_point(A.dim, seed) if point is None else parse_vector(point, A.dim)
    if not np.any(x):
        raise InputError("fd-check needs a nonzero point")
    rep = RunReport("fd-check", digest, {"h": h, "seed": seed})
    fd = fd_check(A, x, h)
    rep.results = {"point": x, "fd": _fd_json(fd)}
    if not fd.passed:
        rep.status, rep.message = "error", "derivative check failed"
    return rep


def cmd_idempotents(path, cfg=None):
    cfg = cfg or SearchConfig()
    A, digest = _read(path)
    rep = RunReport("idempotents", digest, cfg.as_dict())
    out = find_idempotents(A, cfg)
    rep.results = {
        "idempotents": [_idem_json(r) for r in out.idempotents],
        "nil_squares": [_point_json(s, cfg.tol_stat) for s in out.nil_squares],
        "stationary_points": len(out.search),
        "unconverged_candidates": out.search.failures,
    }
    if out.status != "ok":
        rep.message = out.status
    return rep


def _spaces_json(spaces):
    return [{"value": s.value, "multiplicity": s.multiplicity} for s in spaces]


def cmd_peirce(path, c, tol_idem=1e-8, tol_eig=1e-6, tol_sub=TOL_SUB):
    A, digest = _read(path)
    cv = parse_vector(c, A.dim)
    rep = RunReport("peirce", digest, {"c": cv, "tol_idem": tol_idem, "tol_eig": tol_eig, "tol_sub": tol_sub})
    try:
        spaces = peirce_spectrum(A, cv, tol_idem, tol_eig)
    except NotIdempotentError as exc:
        rep.status, rep.message = "error", str(exc)
        rep.results = {"residual": _checked(exc.residual, exc.tol)}
        return rep
    v1 = next((s.basis for s in spaces if abs(s.value - 1.0) <= tol_eig), np.zeros((0, A.dim)))
    closed, res = check_subalgebra(A, v1, tol_sub)
    rep.results = {
        "eigenvalues": _spaces_json(spaces),
        "dim_v1": len(v1),
        "v1_basis": v1,
        "v1_is_subalgebra": closed,
        "subalgebra_residual": _checked(res, tol_sub),
    }
    return rep


def cmd_decompose(path, c, cfg=None, tol_sub=TOL_SUB):
    cfg = cfg or SearchConfig()
    A, digest = _read(path)
    cv = parse_vector(c, A.dim)
    rep = RunReport("decompose", digest, {"c": cv, **cfg.as_dict(), "tol_sub": tol_sub})
    try:
        pr = decide_decomposable(A, cv, cfg, tol_sub)
    except NotIdempotentError as exc:
        rep.status, rep.message = "error", str(exc)
        rep.results = {"residual": _checked(exc.residual, exc.tol)}
        return rep
    res = {
        "verdict": pr.verdict,
        "eigenvalues": [{"value": v, "multiplicity": m} for v, m in pr.eigenvalues],
        "dim_v1": pr.dim_v1,
        "v1_is_subalgebra": pr.v1_is_subalgebra,
        "subalgebra_residual": _checked(pr.subalgebra_residual, tol_sub),
    }
    if pr.decomposition is not None:
        c1, c2 = pr.decomposition
        chk = pr.checks
        res["decomposition"] = {
            "c1": c1,
            "c2": c2,
            "sum_defect": _checked(chk["sum"], 1e-12 * max(1.0, A.form.norm(cv))),
            "c1_residual": _checked(chk["c1_residual"], cfg.tol_idem),
            "c2_residual": _checked(chk["c2_residual"], cfg.tol_idem),
            "c1c2": _checked(chk["c1c2"], cfg.tol_idem),
            "c_c1_minus_c1": _checked(chk["c_c1"], cfg.tol_idem),
            "c_c2_minus_c2": _checked(chk["c_c2"], cfg.tol_idem),
            "rank": chk["rank"],
        }
    rep.results = res
    if pr.verdict == "inconclusive":
        rep.status, rep.message = "inconclusive", pr.message
    return rep


def cmd_gap_demo(path, cfg=None):
    cfg = cfg or SearchConfig()
    A, digest = _read(path)
    rep = RunReport("gap-demo", digest, cfg.as_dict())
    if A.orthonormal.is_zero():
        rep.status, rep.message = "error", "zero algebra: u ≡ 0"
        return rep
    g = demonstrate_oddness_gap(A, cfg)
    rep.results = {
        "x_plus": g.x_plus,
        "x_minus": g.x_minus,
        "f_plus": g.f_plus,
        "f_minus": g.f_minus,
        "anti_collinear": g.anti_collinear,
        "distance": _checked(g.distance, cfg.dedup_radius),
        "odd_defect": _checked(g.odd_defect, g.tol),
        "local_maxima": [s.x for s in g.local_maxima],
        "independent_maximizers": g.independent_maximizers,
    }
    return rep


def cmd_generate(family, n=None, a=None, seed=0, scale=1.0):
    """Text of a generated algebra file."""
    try:
        if family == "counterexample":
            if n is None and a is None:
                raise InputError("counterexample needs --n and/or --a")
            if a is None:
                p = CounterexampleParams.default(n)
            else:
                av = parse_vector(a)
                p = CounterexampleParams(len(av) + 1 if n is None else n, tuple(av))
            A = make_counterexample(p)
        elif family == "hadamard":
            A = make_hadamard(3 if n is None else n)
        elif family == "random":
            A = make_random_algebra(3 if n is None else n, seed, scale)
        else:
            raise InputError(f"unknown family {family!r}")
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return dumps_algebra(A)


def _add_search(p):
    d = SearchConfig()
    p.add_argument("--restarts", type=int, default=d.restarts)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--max-iters", type=int, default=d.max_iters)
    p.add_argument("--tol-stat", type=float, default=d.tol_stat)
    p.add_argument("--tol-idem", type=float, default=d.tol_idem)
    p.add_argument("--tol-eig", type=float, default=d.tol_eig)
    p.add_argument("--dedup-radius", type=float, default=d.dedup_radius)


def _cfg(args):
    try:
        return SearchConfig(
            restarts=args.restarts, seed=args.seed, max_iters=args.max_iters,
            tol_stat=args.tol_stat, tol_idem=args.tol_idem, tol_eig=args.tol_eig,
            dedup_radius=args.dedup_radius,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_parser():
    ap = argparse.ArgumentParser(prog="cubicalg", description="Idempotents and Peirce data of algebras of cubic forms.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="structural and derivative checks")
    p.add_argument("path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=FD_STEP)

    p = sub.add_parser("fd-check", help="closed-form derivatives against finite differences")
    p.add_argument("path")
    p.add_argument("--point", help="comma-separated coordinates; random unit vector by default")
    p.add_argument("--h", type=float, default=FD_STEP)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("idempotents", help="idempotents from the sphere problem")
    p.add_argument("path")
    _add_search(p)

    p = sub.add_parser("peirce", help="Peirce spectrum of an idempotent")
    p.add_argument("path")
    p.add_argument("--c", required=True, help="comma-separated coordinates of the idempotent")
    p.add_argument("--tol-idem", type=float, default=1e-8)
    p.add_argument("--tol-eig", type=float, default=1e-6)

    p = sub.add_parser("decompose", help="decide decomposability of an idempotent")
    p.add_argument("path")
    p.add_argument("--c", required=True)
    _add_search(p)

    p = sub.add_parser("gap-demo", help="compare the maximizer and minimizer of f")
    p.add_argument("path")
    _add_search(p)

    p = sub.add_parser("generate", help="emit an algebra file")
    p.add_argument("family", choices=["counterexample", "hadamard", "random"])
    p.add_argument("--n", type=int)
    p.add_argument("--a", help="comma-separated a_2..a_n (counterexample)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0)
    return ap


def run(args):
    v = args.verb
    if v == "check":
        return cmd_check(args.path, args.seed, args.h)
    if v == "fd-check":
        return cmd_fd_check(args.path, args.point, args.h, args.seed)
    if v == "idempotents":
        return cmd_idempotents(args.path, _cfg(args))
    if v == "peirce":
        return cmd_peirce(args.path, args.c, args.tol_idem, args.tol_eig)
    if v == "decompose":
        return cmd_decompose(args.path, args.c, _cfg(args))
    if v == "gap-demo":
        return cmd_gap_demo(args.path, _cfg(args))
    raise AssertionError(v)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verb == "generate":
        try:
            sys.stdout.write(cmd_generate(args.family, args.n, args.a, args.seed, args.scale))
        except InputError as exc:
            print(f"cubicalg: {exc}", file=sys.stderr)
            return EXIT["error"]
        return 0
    try:
        rep = run(args)
    except InputError as exc:
        rep = RunReport(args.verb, status="error", message=str(exc))
    except Exception as exc:  # report, never traceback, for the exit-code contract
        rep = RunReport(args.verb, status="error", message=f"internal failure: {type(exc).__name__}: {exc}",
                        internal=True)
    sys.stdout.write(rep.to_json())
    if rep.status != "ok":
        print(f"cubicalg: {rep.status}: {rep.message}", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
