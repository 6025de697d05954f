import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emk.constructions import p_build, p_spec, pprime_build, pprime_spec
from emk.core import Params, SetFamily, family_deficit, full_mask, layer, mask_of
from emk.errors import DomainError, InfeasibleError
from emk.formulas import binom, n_h_closed
from emk.lemmalab import (CaseTag, canonical_low_sets, case_partition, classify_bad_good,
                          deficit_completion_check, demo_deficit_instance,
                          minimal_deficit_subfamily, n_h_exact, n_h_general,
                          verify_counting_claim, verify_low_layer_comparison)


def canonical(m, s, l):
    spec = p_spec(m, s, l)
    return spec, p_build(spec)


def test_bad_good_canonical_equality_case():
    spec, P = canonical(3, 4, 3)
    p = spec.params
    rep = classify_bad_good(P, spec.kernel, p)
    for j in range(p.m):
        assert rep.B[j] == canonical_low_sets(p, spec.kernel, j)
        assert len(rep.bad[j]) + len(rep.good[j]) == len(layer(P, j))
    assert SetFamily.uniform(p.n, 2, spec.kernel).issubset(rep.B[2])


def test_bad_good_nothing_missing():
    p = Params(2, 3, 2)
    rep = classify_bad_good(SetFamily.power_set(p.n), 1, p)
    assert len(rep.missing) == 0
    assert all(len(rep.B[j]) == 0 for j in range(p.m))


def test_bad_good_cover_size_checked():
    spec, P = canonical(3, 4, 3)
    with pytest.raises(DomainError):
        classify_bad_good(P, 1, spec.params)


def test_counting_claim_equality_and_strict():
    spec, P = canonical(3, 4, 3)
    rep = verify_counting_claim(spec.kernel, P, spec.params)
    assert rep.holds and rep.lhs == rep.rhs and rep.witnesses["M_is_inside_R"]
    inside = [x for x in layer(P, 3) if x & spec.kernel]
    Q = P.difference(SetFamily(P.n, inside[:1]))
    rep = verify_counting_claim(spec.kernel, Q, spec.params)
    assert rep.holds and rep.lhs < rep.rhs and rep.witnesses["xi"] == 1


def test_counting_claim_terminal_form():
    spec, P = canonical(3, 4, 3)
    rep = verify_counting_claim(spec.kernel, P, spec.params, terminal=True)
    assert rep.holds and rep.lhs == rep.rhs == binom(2, 2)
    with pytest.raises(DomainError):
        verify_counting_claim(1, p_build(p_spec(2, 3, 2)), Params(2, 3, 2), terminal=True)


def test_counting_claim_needs_a_cover():
    spec, P = canonical(3, 4, 3)
    rep = verify_counting_claim(mask_of([12, 13]), P, spec.params)
    assert not rep.holds and not rep.witnesses["A_covers_F_m"]


def test_report_json_uses_strings():
    spec, P = canonical(3, 4, 3)
    doc = json.loads(verify_counting_claim(spec.kernel, P, spec.params).to_json())
    assert doc["lhs"] == "1" and doc["holds"] is True


def test_terminal_endpoint_gap():
    p = Params(3, 3, 2)  # a = 1, r = 9
    assert (p.a, p.r) == (1, 9)
    A = mask_of([1])
    assert [n_h_exact(A, p, h) for h in range(1, 5)] == [9, 45, 46, 55]
    assert n_h_exact(A, p, 2) == n_h_closed(1, 9, 2)
    assert [n_h_general(A, p, h) for h in range(1, 5)] == [9, 46, 55, 56]
    with pytest.raises(DomainError):
        n_h_exact(A, p, 0)


def test_n_h_below_every_shortage():
    p = Params(2, 3, 2)
    assert n_h_general(1, p, 1) == sum(1 for x in range(1 << p.n)
                                       if x.bit_count() < 2 and 3 - x.bit_count() - (x & 1) == 1)


@pytest.mark.parametrize("a", range(1, 4))
def test_n_h_exact_matches_closed_forms(a):
    # r = 2a + 7 with m = 3 means n = 3a + 7 = 4s - (a + 1)
    n = 3 * a + 7
    s, rem = divmod(n + a + 1, 4)
    if rem:
        pytest.skip("no compatible s")
    p = Params(3, s, a + 1)
    A = full_mask(a)
    assert [n_h_exact(A, p, h) for h in range(1, 5)] == [n_h_closed(a, p.r, h) for h in range(1, 5)]


def test_minimal_deficit_examples():
    assert minimal_deficit_subfamily([0], 3, 3) == [0]
    five = [0b111 << (3 * i) for i in range(5)]
    assert minimal_deficit_subfamily(five, 5, 3) == five
    Q = [0b11, 0b1100, 0b110000]
    out = minimal_deficit_subfamily(Q, 3, 3)
    assert len(out) == 2 and family_deficit(out, 3) == 4
    with pytest.raises(InfeasibleError):
        minimal_deficit_subfamily([0b111], 2, 3)
    with pytest.raises(DomainError):
        minimal_deficit_subfamily([0b11, 0b110], 1, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(1, 12), st.data())
def test_minimal_deficit_bounds(m, l, data):
    sizes = data.draw(st.lists(st.integers(0, m), min_size=1, max_size=10))
    Q, nxt = [], 0
    for k in sizes:
        Q.append(((1 << k) - 1) << nxt if k else 0)
        nxt += k
    if Q.count(0) > 1 or family_deficit(Q, m) < l:
        return
    out = minimal_deficit_subfamily(Q, l, m)
    delta = family_deficit(out, m)
    assert len(out) <= l and l <= delta <= l + m
    for x in out:
        rest = [y for y in out if y != x]
        assert family_deficit(rest, m) < l


@pytest.mark.parametrize("m,s,l", [(2, 3, 2), (2, 4, 3), (3, 3, 2), (3, 3, 3), (2, 3, 3), (3, 4, 3)])
def test_deficit_completion_demo(m, s, l):
    p = Params(m, s, l)
    F, Q = demo_deficit_instance(p)
    rep = deficit_completion_check(F, Q, p)
    w = rep.witnesses
    assert w["nu_F_below_s"] and w["inner_nu_below_t"] and rep.holds
    assert w["t"] == s - w["q"]
    assert w["W_size"] == (m + 1) * w["t"] + w["d"]


def test_deficit_completion_rejects_non_member():
    spec, P = canonical(3, 4, 3)
    with pytest.raises(DomainError):
        deficit_completion_check(P, [mask_of([13])], spec.params)


def test_deficit_completion_low_delta():
    p = Params(2, 3, 3)
    F, _ = demo_deficit_instance(p)
    with pytest.raises(DomainError):
        deficit_completion_check(F.union(SetFamily(p.n, [0b11])), [0b11], p)


def test_case_partition_examples():
    spec, P = canonical(3, 4, 3)
    assert case_partition(P, spec.params).case == "I"
    p = Params(3, 4, 3)  # a = 2; clique on 3l - 1 = 8 vertices
    Q = pprime_build(pprime_spec(4, 3))
    tag = case_partition(Q, p)
    assert (tag.case, tag.nu, tag.tau) == ("II", 2, 6)
    big = SetFamily.uniform(p.n, 3)
    assert case_partition(big, p).case == "III"
    with pytest.raises(DomainError):
        CaseTag("I", 3, 0, 2, 0)


def test_low_layer_examples():
    spec, P = canonical(2, 3, 2)
    p = spec.params
    rep = verify_low_layer_comparison(P, p)
    assert rep.holds and rep.lhs == rep.rhs and rep.witnesses["Y_high"] == 0
    top = [x for x in layer(P, 3)][0]
    extra = [x for x in layer(SetFamily.power_set(p.n), 1) if x not in P][0]
    G = P.difference(SetFamily(p.n, [top])).union(SetFamily(p.n, [extra]))
    rep2 = verify_low_layer_comparison(G, p)
    assert rep2.lhs == rep.lhs + 1 and rep2.rhs == rep.rhs + 1 and rep2.holds
    rep3 = verify_low_layer_comparison(SetFamily.power_set(p.n), p)
    assert rep3.holds and not rep3.witnesses["hypothesis"]


def test_case_tags_exhaustive(rng):
    p = Params(2, 3, 2)
    edges = list(SetFamily.uniform(p.n, 2))
    for _ in range(60):
        G = SetFamily(p.n, [e for e in edges if rng.random() < 0.3])
        tag = case_partition(G, p)
        assert tag.case in ("I", "II", "III")
