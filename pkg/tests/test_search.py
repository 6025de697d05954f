import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emk.constructions import p_build, p_spec
from emk.core import SetFamily, up_closure
from emk.errors import CapacityError, DomainError
from emk.exactsolve import has_s_matching, matching_number
from emk.formulas import p_size, pprime_size
from emk.search import (best_known_lower_bound, canonical_form, compatible_params, e_exact,
                        enumerate_extremal, verify_extremal)


def brute_e(n, s):
    """Largest family on [n] without an s-matching, over all 2^(2^n) families."""
    best = 0
    N = 1 << n
    for bits in range(1 << N):
        if bits.bit_count() <= best:
            continue
        F = SetFamily(n, [x for x in range(N) if bits >> x & 1])
        if has_s_matching(F, s) is None:
            best = bits.bit_count()
    return best


@pytest.mark.parametrize("n,s", [(n, s) for n in range(1, 4) for s in range(1, n + 3)])
def test_against_full_enumeration(n, s):
    assert e_exact(n, s).value == brute_e(n, s)


def test_known_values():
    assert e_exact(3, 2).value == 4
    assert e_exact(4, 2).value == 8
    assert e_exact(5, 2).value == 16
    for n in range(1, 7):
        r = e_exact(n, 1)
        assert r.value == 0 and r.witnesses == [SetFamily.empty(n)]
    for n in range(1, 6):
        assert e_exact(n, n + 2).value == 1 << n


def test_enumerate_examples():
    reps = enumerate_extremal(3, 2)
    assert len(reps) == 2
    point_star = canonical_form(SetFamily(3, [x for x in range(8) if x & 1]))
    assert point_star in reps
    assert canonical_form(p_build(p_spec(1, 2, 1))) in reps
    assert canonical_form(p_build(p_spec(2, 2, 2))) in enumerate_extremal(4, 2)
    assert len(enumerate_extremal(4, 1)) == 1


def test_witnesses_are_valid():
    for n, s in [(4, 3), (5, 3), (5, 4)]:
        r = e_exact(n, s)
        for W in enumerate_extremal(n, s):
            assert len(W) == r.value and has_s_matching(W, s) is None


def test_canonical_form_is_invariant(rng):
    F = SetFamily(4, [3, 5, 12, 15])
    c = canonical_form(F)
    for _ in range(10):
        perm = list(range(4))
        rng.shuffle(perm)
        G = SetFamily(4, [sum(1 << perm[i] for i in range(4) if x >> i & 1) for x in F])
        assert canonical_form(G) == c


def test_lower_bounds_respected():
    for n in range(2, 7):
        for s in range(1, n + 2):
            v = e_exact(n, s).value
            for p in compatible_params(n, s):
                assert v >= p_size(p)
                if p.m == 3 and 3 * p.l - 1 <= n:
                    assert v >= pprime_size(s, p.l)
            assert v >= best_known_lower_bound(n, s)


def test_verify_extremal_examples():
    assert verify_extremal(p_build(p_spec(1, 2, 1)), 3, 2).status == "optimal"
    star = SetFamily(3, [x for x in range(8) if x & 1])
    assert verify_extremal(star, 3, 2).status == "optimal"
    assert verify_extremal(SetFamily.power_set(3), 3, 2).status == "infeasible"
    assert verify_extremal(SetFamily(3, [7]), 3, 2).status == "suboptimal"
    P = p_build(p_spec(1, 4, 1))  # n = 7, beyond the exact range
    v = verify_extremal(P, 7, 4)
    assert v.status == "meets-lower-bound" and not v.exact


def test_capacity_and_domain():
    with pytest.raises(CapacityError):
        e_exact(8, 2)
    with pytest.raises(DomainError):
        e_exact(3, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.lists(st.integers(1, 31), max_size=10), st.randoms())
def test_exchange_to_superset_is_sound(n, s, xs, r):
    """Swapping a member for a missing superset never creates an s-matching."""
    F = SetFamily(n, [x & ((1 << n) - 1) for x in xs if x & ((1 << n) - 1)])
    if has_s_matching(F, s) is not None:
        return
    members = set(F)
    for _ in range(6):
        A = r.choice(sorted(members)) if members else None
        if A is None:
            break
        ups = [B for B in range(1 << n) if B & A == A and B not in members]
        if not ups:
            continue
        B = r.choice(ups)
        members = (members - {A}) | {B}
        assert has_s_matching(SetFamily(n, sorted(members)), s) is None
    U = up_closure(F)
    assert matching_number(U)[0] == matching_number(F)[0]
