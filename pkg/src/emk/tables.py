"""Tabulated closed forms; every cell is an exact integer or a flag."""

from __future__ import annotations

import csv
import io
import json
from math import isqrt

from .core import Params
from .errors import DomainError
from .formulas import (IDENTITIES, appendix_identity, d_terminal, lambda_minus_a3,
                       n_h_closed, p_size, pprime_size, t_threshold)

KINDS = ("lambda-vs-a3", "appendix", "dh-nh", "thresholds")


def lambda_vs_a3(lo: int, hi: int):
    cols = ["s", "l", "lambda_minus_a3", "sign", "p_size", "pprime_size"]
    rows = []
    for s in range(lo, hi + 1):
        for l in range(1, s + 1):  # noqa: E741
            v = lambda_minus_a3(s, l)
            rows.append([s, l, v, (v > 0) - (v < 0), p_size(Params(3, s, l)), pprime_size(s, l)])
    return cols, rows


def _identity_points(name: str, s: int):
    ident = IDENTITIES[name]
    for y in range(0, 4 * s + 1):
        if ident.valid(s, y):
            yield y


def appendix(lo: int, hi: int):
    cols = ["identity", "s", "second", "lhs", "rhs", "equal"]
    rows = []
    for name in sorted(IDENTITIES):
        for s in range(lo, hi + 1):
            for y in _identity_points(name, s):
                lhs, rhs = appendix_identity(name, s, y)
                rows.append([name, s, y, lhs, rhs, lhs == rhs])
    return cols, rows


def dh_nh(lo: int, hi: int):
    cols = ["a", "r"] + [f"{k}{i}" for k in ("D", "N", "gap") for i in range(1, 5)]
    rows = []
    for a in range(lo, hi + 1):
        r = 2 * a + 7
        D = [d_terminal(r, i) for i in range(1, 5)]
        N = [n_h_closed(a, r, i) for i in range(1, 5)]
        rows.append([a, r] + D + N + [x - y for x, y in zip(D, N)])
    return cols, rows


def thresholds(lo: int, hi: int):
    cols = ["s", "discriminant", "isqrt", "floor_t", "integral"]
    rows = []
    for s in range(max(lo, 1), hi + 1):
        t = t_threshold(s)
        rows.append([s, t.disc, isqrt(t.disc), t.floor(), t.is_integer])
    return cols, rows


_BUILDERS = {
    "lambda-vs-a3": lambda_vs_a3,
    "appendix": appendix,
    "dh-nh": dh_nh,
    "thresholds": thresholds,
}


def build_table(kind: str, lo: int, hi: int):
    if kind not in _BUILDERS:
        raise DomainError(f"unknown table kind {kind!r}; choose from {', '.join(KINDS)}")
    if lo > hi:
        raise DomainError(f"empty range {lo}..{hi}")
    return _BUILDERS[kind](lo, hi)


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def render(kind: str, cols, rows, fmt: str) -> str:
    cells = [[_cell(x) for x in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(cells)
        return buf.getvalue()
    if fmt == "json":
        doc = {"kind": kind, "columns": list(cols), "rows": [dict(zip(cols, r)) for r in cells]}
        return json.dumps(doc, indent=1) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")
