"""Algebra file format.

A JSON document with keys

* ``dim`` -- integer n >= 1;
* ``cubic`` -- records ``{"i", "j", "k", "value"}`` with 1-based
  ``i <= j <= k`` giving ``T[i][j][k] = u(e_i, e_j, e_k)``, or
* ``product`` -- records ``{"k", "i", "j", "value"}`` giving ``(e_i e_j)_k``;
  exactly one of ``cubic`` / ``product`` must be present;
* ``gram`` -- optional row-major list of n^2 reals, identity by default.

:func:`dumps_algebra` writes the canonical form: fixed key order, nonzero
cubic entries in lexicographic order, 17 significant digits, so that
parsing and re-emitting reproduces the same bytes.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .core import BilinearForm, CubicForm, MetrisedAlgebra, algebra_from_cubic, cubic_from_algebra

__all__ = ["AlgebraFileError", "loads_algebra", "load_algebra", "dumps_algebra", "format_number"]


class AlgebraFileError(ValueError):
    pass


def format_number(v):
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite value {v}")
    return format(v, ".17g")


def _real(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise AlgebraFileError(f"{what}: expected a real number, got {v!r}")
    if not math.isfinite(v):
        raise AlgebraFileError(f"{what}: non-finite value")
    return float(v)


def _index(rec, key, n, where):
    v = rec.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise AlgebraFileError(f"{where}: field {key!r} must be an integer")
    if not 1 <= v <= n:
        raise AlgebraFileError(f"{where}: index {key}={v} outside 1..{n}")
    return v - 1


def _records(doc, name, keys, n):
    recs = doc[name]
    if not isinstance(recs, list):
        raise AlgebraFileError(f"{name!r} must be a list of records")
    seen = {}
    for pos, rec in enumerate(recs):
        where = f"{name}[{pos}]"
        if not isinstance(rec, dict) or set(rec) != set(keys) | {"value"}:
            raise AlgebraFileError(f"{where}: expected fields {', '.join(keys)}, value")
        idx = tuple(_index(rec, k, n, where) for k in keys)
        if idx in seen:
            raise AlgebraFileError(f"{where}: duplicate entry {tuple(i + 1 for i in idx)}")
        seen[idx] = _real(rec["value"], where)
    return seen


def loads_algebra(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise AlgebraFileError("document must be an object")
    extra = set(doc) - {"dim", "cubic", "product", "gram"}
    if extra:
        raise AlgebraFileError(f"unknown fields: {', '.join(sorted(extra))}")
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise AlgebraFileError("'dim' must be a positive integer")
    has_c, has_p = "cubic" in doc, "product" in doc
    if has_c == has_p:
        raise AlgebraFileError("exactly one of 'cubic' and 'product' is required")

    if "gram" in doc:
        g = doc["gram"]
        if not isinstance(g, list) or len(g) != n * n:
            raise AlgebraFileError(f"'gram' must be a list of {n * n} reals")
        gram = np.array([_real(v, "gram") for v in g]).reshape(n, n)
    else:
        gram = np.eye(n)
    form = BilinearForm(gram)  # FormError propagates

    if has_c:
        entries = _records(doc, "cubic", ("i", "j", "k"), n)
        for i, j, k in entries:
            if not i <= j <= k:
                raise AlgebraFileError(f"cubic entry {(i + 1, j + 1, k + 1)} must satisfy i <= j <= k")
        return algebra_from_cubic(CubicForm.from_entries(n, entries), form)
    entries = _records(doc, "product", ("k", "i", "j"), n)
    p = np.zeros((n, n, n))
    for idx, v in entries.items():
        p[idx] = v
    return MetrisedAlgebra(p, form)


def load_algebra(path):
    with open(path, encoding="utf-8") as fh:
        return loads_algebra(fh.read())


def dumps_algebra(A):
    """Canonical text of ``A`` in cubic-form layout."""
    if isinstance(A, CubicForm):
        u = A
    else:
        u = A.cubic if A.cubic is not None else cubic_from_algebra(A)
    gram = np.eye(u.dim) if isinstance(A, CubicForm) else A.form.gram
    recs = [
        f'    {{"i": {i + 1}, "j": {j + 1}, "k": {k + 1}, "value": {format_number(v)}}}'
        for (i, j, k), v in u.entries(nonzero=True).items()
    ]
    body = ",\n".join(recs)
    cubic = "[\n" + body + "\n  ]" if recs else "[]"
    grams = ", ".join(format_number(v) for v in gram.reshape(-1))
    return f'{{\n  "dim": {u.dim},\n  "cubic": {cubic},\n  "gram": [{grams}]\n}}\n'

