"""Exact matching number, vertex cover number and minimum blockers.

Matchings are computed by the recursion

    nu(W) = max(nu(W - v), max_{x in F, v in x, x <= W} 1 + nu(W - x)),

with ``v`` the lowest vertex of ``W``.  Up to 20 active vertices it runs as a
dense table over every submask; above that the same recursion is memoized on
the residual masks it actually reaches, so both routes return the same
witness.  Ties go to "leave v uncovered" first, then to the least member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .baranyai import decompose
from .core import MAX_N, SetFamily, elements_of, format_mask, minimal_members
from .errors import CapacityError, DomainError

DENSE_LIMIT = 20
BLOCKER_CAPACITY = 10_000
BLOCKER_MAX_QT = {2: 24}  # per uniformity; anything else is capped at 18
BLOCKER_NODE_BUDGET = 20_000_000


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint, distinct members (stored as masks)."""

    members: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise DomainError("matching members must be distinct")
        seen = 0
        for x in self.members:
            if x & seen:
                raise DomainError("matching members must be pairwise disjoint")
            seen |= x

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def sets(self) -> list[tuple[int, ...]]:
        return [elements_of(x) for x in self.members]

    def __str__(self) -> str:
        return "[" + ", ".join(format_mask(x) for x in self.members) + "]"


def _compress(masks: list[int]) -> tuple[list[int], list[int]]:
    """Relabel the active vertices to 0..k-1, keeping their order."""
    union = 0
    for x in masks:
        union |= x
    verts = [i for i in range(union.bit_length()) if union >> i & 1]
    pos = {v: j for j, v in enumerate(verts)}
    out = []
    for x in masks:
        y = 0
        while x:
            low = x & -x
            y |= 1 << pos[low.bit_length() - 1]
            x ^= low
        out.append(y)
    return out, verts


def _expand(mask: int, verts: list[int]) -> int:
    out = 0
    for j, v in enumerate(verts):
        if mask >> j & 1:
            out |= 1 << v
    return out


def _pack_dense(members: list[int], k: int) -> list[int]:
    arr = np.array(members, dtype=np.uint64)
    value, choice, order = kernels.packing_dp(arr, np.ones(len(members), np.int64), k)
    picked = []
    mask = (1 << k) - 1
    while mask:
        c = int(choice[mask])
        if c < 0:
            mask &= mask - 1
        else:
            x = int(order[c]) & ((1 << 64) - 1)
            picked.append(x)
            mask ^= x
    return picked


def _pack_sparse(members: list[int], k: int) -> list[int]:
    by_low: list[list[int]] = [[] for _ in range(k)]
    for x in sorted(members, key=lambda x: ((x & -x).bit_length(), x)):
        by_low[(x & -x).bit_length() - 1].append(x)

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, int]:
        if mask == 0:
            return 0, -1
        low = (mask & -mask).bit_length() - 1
        val, pick = best(mask & (mask - 1))[0], -1
        for x in by_low[low]:
            if x & ~mask == 0:
                cand = 1 + best(mask ^ x)[0]
                if cand > val:
                    val, pick = cand, x
        return val, pick

    picked = []
    mask = (1 << k) - 1
    while mask:
        x = best(mask)[1]
        if x < 0:
            mask &= mask - 1
        else:
            picked.append(x)
            mask ^= x
    best.cache_clear()
    return picked


def _max_packing(masks: list[int]) -> list[int]:
    """A maximum matching among nonempty masks (deterministic)."""
    if not masks:
        return []
    comp, verts = _compress(masks)
    k = len(verts)
    picked = _pack_dense(comp, k) if k <= DENSE_LIMIT else _pack_sparse(comp, k)
    return sorted(_expand(x, verts) for x in picked)


def _drop_empty(F: SetFamily) -> SetFamily:
    return F.select(slice(1, None)) if F.has_empty() else F


def matching_number(F: SetFamily) -> tuple[int, Matching]:
    """``nu(F)`` and one maximum matching.  The empty set counts as a member."""
    nonempty = [x for x in minimal_members(_drop_empty(F))]
    picked = _max_packing(nonempty)
    if F.has_empty():
        picked = [0] + picked
    return len(picked), Matching(tuple(picked))


def has_s_matching(F: SetFamily, s: int) -> Matching | None:
    """An s-matching in ``F`` if one exists.

    Depth-first search on the lowest uncovered vertex that stops at the first
    s-matching; failed (residual, target) pairs are remembered.
    """
    if s < 0:
        raise DomainError(f"s must be nonnegative, got {s}")
    if s == 0:
        return Matching(())
    picked = [0] if F.has_empty() else []
    need = s - len(picked)
    if need == 0:
        return Matching(tuple(picked))
    nonempty = list(minimal_members(_drop_empty(F)))
    if not nonempty:
        return None
    comp, verts = _compress(nonempty)
    k = len(verts)
    min_size = min(x.bit_count() for x in comp)
    by_low: list[list[int]] = [[] for _ in range(k)]
    for x in sorted(comp, key=lambda x: ((x & -x).bit_length(), x)):
        by_low[(x & -x).bit_length() - 1].append(x)
    failed: set[tuple[int, int]] = set()

    def go(mask: int, left: int) -> list[int] | None:
        if left == 0:
            return []
        if mask.bit_count() < left * min_size or (mask, left) in failed:
            return None
        low = (mask & -mask).bit_length() - 1
        for x in by_low[low]:
            if x & ~mask == 0:
                rest = go(mask ^ x, left - 1)
                if rest is not None:
                    return [x] + rest
        rest = go(mask & (mask - 1), left)
        if rest is None:
            failed.add((mask, left))
        return rest

    found = go((1 << k) - 1, need)
    if found is None:
        return None
    return Matching(tuple(picked + sorted(_expand(x, verts) for x in found)))


def find_disjoint(G: SetFamily, p: int) -> Matching | None:
    """``p`` pairwise disjoint members of ``G``, or None if ``nu(G) < p``."""
    return has_s_matching(G, p)


# ---------------------------------------------------------------------------
# vertex cover number
# ---------------------------------------------------------------------------


def cover_number(G: SetFamily) -> tuple[int, int]:
    """``tau(G)`` and the numerically least minimum cover (as a mask).

    ``tau`` of the empty family is 0; a family containing the empty set has
    no cover at all.
    """
    if G.has_empty():
        raise DomainError("a family containing the empty set has no vertex cover")
    if len(G) == 0:
        return 0, 0
    core = [int(x) for x in minimal_members(G)]
    comp, verts = _compress(core)
    k = len(verts)
    if k <= DENSE_LIMIT + 2:
        size = 1 << k
        ind = np.zeros(size, dtype=bool)
        ind[np.array(comp, dtype=np.int64)] = True
        below = kernels.subset_closure(ind, k)
        allm = np.arange(size, dtype=np.int64)
        is_cover = ~below[(size - 1) ^ allm]
        cand = allm[is_cover]
        pc = kernels.popcount(cand.astype(np.uint64))
        tau = int(pc.min())
        cover = int(cand[pc == tau].min())
    else:
        tau, cover = _cover_branching(comp)
    return tau, _expand(cover, verts)


def _cover_branching(members: list[int]) -> tuple[int, int]:
    """Smallest cover by iterative deepening; least mask among those of that size."""
    members = sorted(members, key=lambda x: (x.bit_count(), x))
    for k in range(len(members) + 1):
        found: list[int] = []

        def go(cover: int, left: int) -> None:
            for x in members:
                if x & cover == 0:
                    if left == 0:
                        return
                    y = x
                    while y:
                        low = y & -y
                        go(cover | low, left - 1)
                        y ^= low
                    return
            found.append(cover)

        go(0, k)
        if found:
            best = min(found)
            # pad with nothing: minimum covers never hold idle vertices
            return best.bit_count(), best
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# maximum total deficit of a matching of low sets
# ---------------------------------------------------------------------------


def max_deficit_matching(F: SetFamily, m: int) -> tuple[int, Matching]:
    """Matching of members with at most m elements maximising the deficit sum."""
    low = [x for x in F if x.bit_count() <= m]
    picked = [0] if 0 in low else []
    nonempty = [x for x in low if x]
    if nonempty:
        comp, verts = _compress(nonempty)
        k = len(verts)
        if k > DENSE_LIMIT:
            raise CapacityError(f"{k} active vertices exceed the dense limit {DENSE_LIMIT}")
        w = np.array([m + 1 - x.bit_count() for x in comp], dtype=np.int64)
        value, choice, order = kernels.packing_dp(np.array(comp, dtype=np.uint64), w, k)
        mask = (1 << k) - 1
        chosen = []
        while mask:
            c = int(choice[mask])
            if c < 0:
                mask &= mask - 1
            else:
                x = int(order[c])
                chosen.append(_expand(x, verts))
                mask ^= x
        picked += sorted(chosen)
    total = sum(m + 1 - x.bit_count() for x in picked)
    return total, Matching(tuple(picked))


# ---------------------------------------------------------------------------
# minimum blocker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockerInstance:
    """q-uniform families on qt + d vertices without a t-matching."""

    q: int
    t: int
    d: int

    def __post_init__(self):
        if self.q < 1 or self.t < 1 or self.d < 0:
            raise DomainError(f"need q, t >= 1 and d >= 0, got {self}")

    @property
    def ground(self) -> int:
        return self.q * self.t + self.d

    @property
    def total(self) -> int:
        return comb(self.ground, self.q)


@dataclass(frozen=True)
class BlockerResult:
    instance: BlockerInstance
    max_family: int
    min_blocker: int
    nodes: int
    witness: SetFamily  # a largest q-uniform family with nu < t


def _check_capacity(inst: BlockerInstance) -> None:
    if inst.total > BLOCKER_CAPACITY:
        raise CapacityError(f"C({inst.ground},{inst.q}) = {inst.total} exceeds {BLOCKER_CAPACITY}")
    if inst.ground > MAX_N:
        raise CapacityError(f"ground set of {inst.ground} exceeds {MAX_N} vertices")
    cap = BLOCKER_MAX_QT.get(inst.q, 18)
    if inst.q > 1 and inst.t > 1 and inst.q * inst.t > cap:
        raise CapacityError(f"qt = {inst.q * inst.t} exceeds {cap} for q = {inst.q}")


def _shifted_layout(q: int, t: int):
    """q-subsets of [qt] in (sum, lex) order with their Gale lower covers."""
    qt = q * t
    tuples = sorted(combinations(range(1, qt + 1), q), key=lambda c: (sum(c), c))
    index = {c: i for i, c in enumerate(tuples)}
    covers = np.full((len(tuples), max(q, 1)), -1, dtype=np.int64)
    for i, c in enumerate(tuples):
        k = 0
        for j in range(q):
            lower = c[j] - 1
            if lower >= 1 and (j == 0 or c[j - 1] != lower):
                covers[i, k] = index[c[:j] + (lower,) + c[j + 1:]]
                k += 1
    elems = np.array([sum(1 << (x - 1) for x in c) for c in tuples], dtype=np.int64)
    return tuples, index, elems, covers


def _projection(c: tuple[int, ...], q: int, qt: int) -> tuple[int, ...]:
    return tuple(min(x, qt - q + i + 1) for i, x in enumerate(c))


def solve_blocker(inst: BlockerInstance) -> BlockerResult:
    """Exact largest q-uniform family on [qt+d] with no t pairwise disjoint members.

    Shifting keeps sizes and never raises nu, so shifted families suffice.  A
    shifted family has a t-matching iff its trace on [qt] has a perfect
    matching, and it is determined by that trace (a Gale down-set) together
    with the projection ``x_i -> min(x_i, qt - q + i)``.  The search runs over
    down-sets of q-subsets of [qt], each weighted by the size of its fibre.
    """
    _check_capacity(inst)
    q, t, N = inst.q, inst.t, inst.ground
    qt = q * t
    if t == 1:
        return BlockerResult(inst, 0, inst.total, 0, SetFamily.empty(N))
    if q == 1:
        best = t - 1
        witness = SetFamily.from_sets(N, [[i] for i in range(1, t)])
        return BlockerResult(inst, best, inst.total - best, 0, witness)
    tuples, index, elems, covers = _shifted_layout(q, t)
    weights = np.zeros(len(tuples), dtype=np.int64)
    fibres: list[list[tuple[int, ...]]] = [[] for _ in tuples]
    for c in combinations(range(1, N + 1), q):
        i = index[_projection(c, q, qt)]
        weights[i] += 1
        fibres[i].append(c)
    position = {int(x): i for i, x in enumerate(elems)}
    packs = np.array([[position[e] for e in M] for M in decompose(q, t).matchings],
                     dtype=np.int64)
    # Frankl's families {Y : |Y & [it - 1]| >= i} are shifted with nu < t
    seed = max(sum(int(weights[j]) for j, c in enumerate(tuples)
                   if sum(x <= i * t - 1 for x in c) >= i) for i in range(1, q + 1))
    best, nodes, status = kernels.shifted_search(elems, covers, weights, packs, qt, t,
                                                 seed - 1, BLOCKER_NODE_BUDGET)
    if best < seed:
        raise CapacityError(f"blocker search exceeded {BLOCKER_NODE_BUDGET} nodes")
    chosen = [c for i in np.flatnonzero(status == 1) for c in fibres[i]]
    witness = SetFamily.from_sets(N, chosen)
    assert len(witness) == best
    return BlockerResult(inst, int(best), inst.total - int(best), int(nodes), witness)


def min_blocker(inst: BlockerInstance) -> int:
    """``C(qt+d, q)`` minus the largest q-uniform family with ``nu < t``."""
    return solve_blocker(inst).min_blocker
