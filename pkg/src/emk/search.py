"""Exact e(n, s) on tiny ground sets.

A largest family with no s-matching either avoids the empty set, and may
then be taken up-closed (replacing a member by a missing superset never
creates a matching), or is ``{emptyset} + G`` with ``nu(G) < s - 1``.  So

    e(n, s) = max(U(n, s), 1 + U(n, s - 1)),

where ``U`` is the largest up-set without the empty set; ``U`` comes from the
branch and bound in :mod:`emk.kernels`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import kernels
from .core import Params, SetFamily
from .errors import CapacityError, DomainError
from .exactsolve import has_s_matching
from .formulas import p_size, pprime_size

MAX_SEARCH_N = 7


@dataclass
class SearchResult:
    n: int
    s: int
    value: int
    witnesses: list[SetFamily]
    nodes: int
    seconds: float = field(default=0.0, compare=False)


def _check(n: int, s: int) -> None:
    if n < 1 or s < 1:
        raise DomainError(f"need n, s >= 1, got n={n}, s={s}")
    if n > MAX_SEARCH_N:
        raise CapacityError(f"exact search supports n <= {MAX_SEARCH_N}, got {n}")


def _unpack(n: int, words) -> SetFamily:
    lo = int(words[0]) & ((1 << 64) - 1)
    hi = int(words[1]) & ((1 << 64) - 1)
    bits = lo | hi << 64
    return SetFamily(n, [x for x in range(1 << n) if bits >> x & 1])


def _with_empty(F: SetFamily) -> SetFamily:
    return SetFamily(F.n, np.concatenate([[np.uint64(0)], F.masks]))


def _upsets(n: int, s: int, ties: bool) -> tuple[int, list[SetFamily], int]:
    """(U(n, s), maximisers, nodes); U(n, 0) is undefined and reported as -1."""
    if s < 1:
        return -1, [], 0
    best, nodes, sol, count, overflow = kernels.upset_search(n, s, 0, ties)
    if overflow:
        raise CapacityError(f"more than {len(sol)} raw maximisers for n={n}, s={s}")
    return int(best), [_unpack(n, sol[i]) for i in range(count)], int(nodes)


def _perm_table(n: int) -> np.ndarray:
    """``table[p, mask]``: image of ``mask`` under the p-th permutation of [n]."""
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    table = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for i in range(n):
        bit = (masks >> i) & 1
        table |= bit[None, :] << perms[:, i:i + 1]
    return table


def canonical_form(F: SetFamily, table: np.ndarray | None = None) -> SetFamily:
    """Least image of ``F`` under permutations of [n] (compared as 2^n-bit integers)."""
    if len(F) == 0:
        return F
    table = _perm_table(F.n) if table is None else table
    images = -np.sort(-table[:, F.masks.astype(np.int64)], axis=1)  # descending rows
    best = np.lexsort(images.T[::-1])[0]
    return SetFamily(F.n, images[best].astype(np.uint64))


def _key(F: SetFamily) -> tuple[int, ...]:
    return tuple(sorted((int(x) for x in F), reverse=True))


def _solve(n: int, s: int, ties: bool) -> SearchResult:
    _check(n, s)
    start = time.perf_counter()
    u, fams, nodes = _upsets(n, s, ties)
    u2, fams2, nodes2 = _upsets(n, s - 1, ties)
    value = max(u, u2 + 1)
    cands = []
    if u == value:
        cands += fams
    if u2 + 1 == value:
        cands += [_with_empty(G) for G in fams2]
    table = _perm_table(n)
    reps = {}
    for F in cands:
        c = canonical_form(F, table)
        reps.setdefault(_key(c), c)
    witnesses = [reps[k] for k in sorted(reps)]
    if not ties:
        witnesses = witnesses[:1]
    return SearchResult(n, s, value, witnesses, nodes + nodes2, time.perf_counter() - start)


def e_exact(n: int, s: int) -> SearchResult:
    """``e(n, s)`` with one canonical witness."""
    return _solve(n, s, ties=False)


def enumerate_extremal(n: int, s: int) -> list[SetFamily]:
    """All largest families with no s-matching, one per isomorphism class."""
    return _solve(n, s, ties=True).witnesses


def compatible_params(n: int, s: int) -> list[Params]:
    """Every (m, s, l) with ``n = (m+1)s - l``."""
    out = []
    for l in range(1, s + 1):  # noqa: E741
        if (n + l) % s == 0 and (n + l) // s >= 2:
            out.append(Params((n + l) // s - 1, s, l))
    return out


def best_known_lower_bound(n: int, s: int) -> int:
    bounds = [0]
    for p in compatible_params(n, s):
        bounds.append(p_size(p))
        if p.m == 3 and 3 * p.l - 1 <= n:
            bounds.append(pprime_size(s, p.l))
    return max(bounds)


@dataclass(frozen=True)
class Verdict:
    status: str  # optimal | suboptimal | infeasible | meets-lower-bound | below-lower-bound
    size: int
    reference: int
    exact: bool


def verify_extremal(F: SetFamily, n: int, s: int) -> Verdict:
    """Feasibility plus a size comparison with e(n, s) or, beyond search range, the constructions."""
    if F.n != n:
        raise DomainError(f"family lives on [{F.n}], not [{n}]")
    if has_s_matching(F, s) is not None:
        return Verdict("infeasible", len(F), -1, False)
    if n <= 6:
        value = e_exact(n, s).value
        return Verdict("optimal" if len(F) == value else "suboptimal", len(F), value, True)
    bound = best_known_lower_bound(n, s)
    status = "meets-lower-bound" if len(F) >= bound else "below-lower-bound"
    return Verdict(status, len(F), bound, False)
