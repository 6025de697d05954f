import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emk.constructions import p_build, p_spec
from emk.core import (Params, SetFamily, SubsetMask, complement_family, deficit,
                      family_deficit, is_up_closed, layer, mask_of, minimal_members,
                      parse_family, format_family, restrict_disjoint, up_closure)
from emk.errors import DomainError

families = st.integers(1, 7).flatmap(
    lambda n: st.builds(lambda xs: SetFamily(n, xs), st.lists(st.integers(0, (1 << n) - 1), max_size=40))
)


def test_subset_mask_bounds():
    assert len(SubsetMask.of([1, 3], 3)) == 2
    assert str(SubsetMask(0b101, 3)) == "{1,3}"
    with pytest.raises(DomainError):
        SubsetMask(0b1000, 3)
    with pytest.raises(DomainError):
        SubsetMask(1, 65)


def test_family_is_normalised():
    F = SetFamily(4, [6, 1, 6, 3])
    assert list(F) == [1, 3, 6]
    assert F == SetFamily.from_sets(4, [[2, 3], [1], [1, 2]])
    assert 3 in F and 5 not in F
    with pytest.raises(DomainError):
        SetFamily(3, [8])


def test_layer_examples():
    P3 = SetFamily.power_set(3)
    assert layer(P3, 0).sets() == [()]
    assert sorted(layer(P3, 2).sets()) == [(1, 2), (1, 3), (2, 3)]
    P = p_build(p_spec(2, 2, 2))
    assert sorted(layer(P, 2).sets()) == [(1, 2), (1, 3), (1, 4)]
    with pytest.raises(DomainError):
        layer(P3, 4)


def test_complement_examples():
    assert len(complement_family(SetFamily.power_set(3))) == 0
    assert len(complement_family(SetFamily.empty(3))) == 8
    assert len(complement_family(layer(SetFamily.power_set(4), 2))) == 10


def test_deficit_examples():
    assert deficit(0, 3) == 4
    assert deficit(0b111, 3) == 1
    assert deficit(0b11, 3) == 2
    with pytest.raises(DomainError):
        deficit(0b1111, 3)


def test_restrict_disjoint_examples():
    K = layer(SetFamily.power_set(4), 2)
    assert restrict_disjoint(K, 0) == K
    assert sorted(restrict_disjoint(K, mask_of([1])).sets()) == [(2, 3), (2, 4), (3, 4)]
    assert len(restrict_disjoint(SetFamily(2, [3]), 3)) == 0


@settings(max_examples=60, deadline=None)
@given(families)
def test_layers_partition(F):
    assert sum(len(layer(F, i)) for i in range(F.n + 1)) == len(F)


@settings(max_examples=60, deadline=None)
@given(families)
def test_complement_involution(F):
    C = complement_family(F)
    assert len(C) + len(F) == 1 << F.n
    assert complement_family(C) == F


@settings(max_examples=60, deadline=None)
@given(families, st.integers(1, 7))
def test_deficit_sum_identity(F, m):
    low = [x for x in F if x.bit_count() <= m]
    assert family_deficit(low, m) == (m + 1) * len(low) - sum(x.bit_count() for x in low)


@settings(max_examples=60, deadline=None)
@given(families)
def test_minimal_members_against_definition(F):
    expect = [x for x in F if not any(y != x and y & x == y for y in F)]
    assert list(minimal_members(F)) == expect


@settings(max_examples=40, deadline=None)
@given(families)
def test_up_closure_is_up_closed(F):
    U = up_closure(F)
    assert is_up_closed(U)
    assert F.issubset(U)
    assert minimal_members(U) == minimal_members(F)


@settings(max_examples=40, deadline=None)
@given(families)
def test_family_file_round_trip(F):
    assert parse_family(format_family(F)) == F


@pytest.mark.parametrize("text", [
    "n=3\n1\n1\n",      # duplicate
    "n=3\n2\n1\n",      # unsorted
    "n=3\n8\n",         # out of range
    "n=4\nA\n",         # uppercase
    "n=4\n0xa\n",       # prefix
    "3\n1\n",           # no header
])
def test_family_file_rejects(text):
    with pytest.raises(DomainError):
        parse_family(text)


def test_params_derived():
    p = Params(3, 4, 3)
    assert (p.n, p.a, p.r) == (13, 2, 11)
    assert p.r == (p.m + 1) * p.s - 2 * p.l + 1
    with pytest.raises(DomainError):
        Params(3, 2, 3)


def test_masks_are_read_only():
    F = SetFamily(3, [1, 2])
    with pytest.raises(ValueError):
        F.masks[0] = np.uint64(4)
