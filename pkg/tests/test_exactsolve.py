from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_nu, random_family
from emk.constructions import lift, p_build, p_spec
from emk.core import SetFamily, layer, mask_of
from emk.errors import CapacityError, DomainError
from emk.exactsolve import (BlockerInstance, cover_number, find_disjoint, has_s_matching,
                            matching_number, max_deficit_matching, min_blocker, solve_blocker)
from emk.formulas import binom, blocker_bound


def brute_tau(F):
    members = list(F)
    if not members:
        return 0
    for k in range(F.n + 1):
        for c in combinations(range(F.n), k):
            m = sum(1 << i for i in c)
            if all(x & m for x in members):
                return k
    raise AssertionError


def brute_max_no_matching(N, q, t):
    """Largest family of q-subsets of [N] with no t pairwise disjoint members."""
    edges = [sum(1 << i for i in c) for c in combinations(range(N), q)]
    best = 0
    for bits in range(1 << len(edges)):
        G = SetFamily(N, [e for i, e in enumerate(edges) if bits >> i & 1])
        if len(G) > best and brute_nu(G) < t:
            best = len(G)
    return best


def test_matching_number_examples():
    assert matching_number(SetFamily.empty(4))[0] == 0
    nu, M = matching_number(SetFamily.power_set(3))
    assert nu == 4 and sorted(M.sets()) == [(), (1,), (2,), (3,)]
    P = p_build(p_spec(2, 2, 2))
    assert matching_number(P)[0] == 1


def test_has_s_matching_examples():
    assert has_s_matching(SetFamily.power_set(3), 5) is None
    assert len(has_s_matching(SetFamily.power_set(3), 0)) == 0
    assert has_s_matching(lift(SetFamily.empty(13), 3, 13), 4) is None
    W = has_s_matching(SetFamily.power_set(3), 4)
    assert W is not None and len(W) == 4


def test_cover_number_examples():
    assert cover_number(SetFamily.empty(5)) == (0, 0)
    assert cover_number(SetFamily.uniform(5, 2))[0] == 4
    star = SetFamily(5, [x for x in SetFamily.uniform(5, 2) if x & 1])
    assert cover_number(star) == (1, 1)
    with pytest.raises(DomainError):
        cover_number(SetFamily(3, [0, 1]))


def test_find_disjoint_examples():
    W = find_disjoint(layer(SetFamily.power_set(6), 3), 2)
    assert W is not None and W.members[0] | W.members[1] == 63
    star = SetFamily(6, [x for x in SetFamily.uniform(6, 3) if x & 1])
    assert find_disjoint(star, 2) is None
    W = find_disjoint(layer(SetFamily.power_set(9), 3), 3)
    assert len(W) == 3


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(0, 63), max_size=18))
def test_nu_against_brute_force(n, xs):
    F = SetFamily(n, [x & ((1 << n) - 1) for x in xs])
    nu, M = matching_number(F)
    assert nu == brute_nu(F)
    assert all(x in F for x in M)
    acc = 0
    for x in M:
        assert x & acc == 0
        acc |= x
    for s in range(nu + 2):
        assert (has_s_matching(F, s) is None) == (s > nu)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(1, 63), max_size=15))
def test_tau_against_brute_force(n, xs):
    F = SetFamily(n, [x & ((1 << n) - 1) for x in xs if x & ((1 << n) - 1)])
    tau, cover = cover_number(F)
    assert tau == brute_tau(F) == cover.bit_count()
    assert all(x & cover for x in F)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(2, 7), st.data())
def test_nu_tau_sandwich_uniform(q, n, data):
    edges = list(SetFamily.uniform(n, q)) if n >= q else []
    chosen = data.draw(st.lists(st.sampled_from(edges), max_size=12)) if edges else []
    G = SetFamily(n, chosen)
    nu, tau = matching_number(G)[0], cover_number(G)[0]
    assert nu <= tau <= q * nu


def test_sparse_and_dense_paths_agree(rng):
    # 24 vertices forces the memoised path; the same family compressed to few vertices uses the table
    for _ in range(20):
        masks = [rng.getrandbits(24) & rng.getrandbits(24) for _ in range(25)]
        F = SetFamily(24, masks)
        assert matching_number(F)[0] == brute_nu(F)


def test_large_cover_instance():
    G = SetFamily.uniform(9, 2)
    assert cover_number(G)[0] == 8
    G = SetFamily(26, [(1 << i) | (1 << (i + 1)) for i in range(25)])  # path on 26 vertices
    assert cover_number(G)[0] == 13


def test_max_deficit_matching():
    F = SetFamily.from_sets(4, [[1], [2, 3], [1, 2, 3], [4]])
    val, M = max_deficit_matching(F, 2)
    assert val == 2 + 1 + 2
    assert sum(3 - x.bit_count() for x in M) == val


def test_blocker_examples():
    assert min_blocker(BlockerInstance(2, 2, 0)) == 3
    assert min_blocker(BlockerInstance(2, 2, 1)) == 6
    for t in range(1, 6):
        assert min_blocker(BlockerInstance(1, t, 0)) == 1
    with pytest.raises(DomainError):
        BlockerInstance(0, 2, 0)


@pytest.mark.parametrize("q,t,d", [(2, 2, 0), (2, 2, 1), (2, 2, 2), (2, 3, 0), (1, 3, 2)])
def test_blocker_against_brute_force(q, t, d):
    N = q * t + d
    best = brute_max_no_matching(N, q, t)
    res = solve_blocker(BlockerInstance(q, t, d))
    assert res.max_family == best
    assert res.min_blocker == binom(N, q) - best >= blocker_bound(q, t, d)


def test_blocker_intersecting_triples():
    # no two disjoint triples on [6]: the star of C(5,2) triples is largest
    assert solve_blocker(BlockerInstance(3, 2, 0)).max_family == 10


def test_blocker_witness_is_valid():
    res = solve_blocker(BlockerInstance(3, 3, 1))
    W = res.witness
    assert len(W) == res.max_family and matching_number(W)[0] < 3
    assert all(x.bit_count() == 3 for x in W)


def test_blocker_capacity():
    with pytest.raises(CapacityError):
        min_blocker(BlockerInstance(3, 10, 0))


def test_mask_of_round_trip():
    assert mask_of([1, 3]) == 5
    assert np.uint64(mask_of([64])) == np.uint64(1 << 63)
