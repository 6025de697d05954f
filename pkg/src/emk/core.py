"""Ground sets, subset masks and set families.

A subset of ``[n] = {1, ..., n}`` is stored as a machine word whose bit
``i - 1`` is set iff ``i`` belongs to the subset; ``n`` is at most 64.
Families keep their members as a sorted, duplicate-free ``uint64`` array, so
two families are equal iff their arrays are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError

MAX_N = 64
MAX_ENUM_N = 24  # 2**n enumeration limit


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise DomainError(f"ground-set size must be in 1..{MAX_N}, got {n}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(elements: Iterable[int]) -> int:
    """Mask of a collection of 1-based elements."""
    bits = 0
    for x in elements:
        if x < 1:
            raise DomainError(f"elements are 1-based, got {x}")
        bits |= 1 << (x - 1)
    return bits


def elements_of(bits: int) -> tuple[int, ...]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def format_mask(bits: int) -> str:
    return "{" + ",".join(map(str, elements_of(bits))) + "}"


@dataclass(frozen=True, order=True)
class SubsetMask:
    bits: int
    n: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise DomainError(f"mask {self.bits:#x} has bits outside [{self.n}]")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> SubsetMask:
        return cls(mask_of(elements), n)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __int__(self) -> int:
        return self.bits

    def __iter__(self) -> Iterator[int]:
        return iter(elements_of(self.bits))

    def __str__(self) -> str:
        return format_mask(self.bits)


def _bits(x) -> int:
    return x.bits if isinstance(x, SubsetMask) else int(x)


class SetFamily:
    """A family of subsets of [n] in canonical (numeric mask) order."""

    __slots__ = ("n", "masks")

    def __init__(self, n: int, masks=()):
        _check_n(n)
        if isinstance(masks, np.ndarray):
            arr = masks.astype(np.uint64, copy=True).ravel()
        else:
            arr = np.fromiter((_bits(x) for x in masks), dtype=np.uint64)
        arr = np.unique(arr)
        if n < 64 and arr.size and int(arr[-1]) >> n:
            raise DomainError(f"member {int(arr[-1]):#x} has bits outside [{n}]")
        arr.setflags(write=False)
        self.n = n
        self.masks = arr

    # construction helpers -------------------------------------------------

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, [mask_of(s) for s in sets])

    @classmethod
    def power_set(cls, n: int) -> SetFamily:
        _require_enumerable(n)
        return cls(n, np.arange(1 << n, dtype=np.uint64))

    @classmethod
    def uniform(cls, n: int, k: int, ground: int | None = None) -> SetFamily:
        """All k-subsets of ``ground`` (default [n])."""
        _check_n(n)
        g = full_mask(n) if ground is None else ground
        elems = [i for i in range(n) if g >> i & 1]
        return cls(n, [sum(1 << i for i in c) for c in combinations(elems, k)])

    @classmethod
    def empty(cls, n: int) -> SetFamily:
        return cls(n, ())

    # container protocol ---------------------------------------------------

    def __len__(self) -> int:
        return int(self.masks.size)

    def __iter__(self) -> Iterator[int]:
        return (int(x) for x in self.masks)

    def __contains__(self, item) -> bool:
        b = np.uint64(_bits(item))
        i = int(np.searchsorted(self.masks, b))
        return i < self.masks.size and self.masks[i] == b

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.masks, other.masks)

    def __hash__(self) -> int:
        return hash((self.n, self.masks.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(format_mask(b) for b in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"SetFamily(n={self.n}, [{shown}{more}], size={len(self)})"

    def members(self) -> list[SubsetMask]:
        return [SubsetMask(b, self.n) for b in self]

    def sets(self) -> list[tuple[int, ...]]:
        return [elements_of(b) for b in self]

    def sizes(self) -> np.ndarray:
        return kernels.popcount(self.masks)

    def union(self, other: SetFamily) -> SetFamily:
        _same_ground(self, other)
        return SetFamily(self.n, np.concatenate([self.masks, other.masks]))

    def difference(self, other: SetFamily) -> SetFamily:
        _same_ground(self, other)
        return SetFamily(self.n, np.setdiff1d(self.masks, other.masks, assume_unique=True))

    def issubset(self, other: SetFamily) -> bool:
        _same_ground(self, other)
        return bool(np.isin(self.masks, other.masks, assume_unique=True).all())

    def select(self, keep: np.ndarray) -> SetFamily:
        return SetFamily(self.n, self.masks[keep])

    def has_empty(self) -> bool:
        return self.masks.size > 0 and self.masks[0] == 0


def _same_ground(a: SetFamily, b: SetFamily) -> None:
    if a.n != b.n:
        raise DomainError(f"ground sets differ: {a.n} vs {b.n}")


def _require_enumerable(n: int) -> None:
    _check_n(n)
    if n > MAX_ENUM_N:
        raise CapacityError(f"2^{n} subsets exceed the enumeration limit 2^{MAX_ENUM_N}")


def all_masks(n: int) -> np.ndarray:
    _require_enumerable(n)
    return np.arange(1 << n, dtype=np.uint64)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def layer(F: SetFamily, i: int) -> SetFamily:
    """Members of ``F`` with exactly ``i`` elements."""
    if not 0 <= i <= F.n:
        raise DomainError(f"layer index {i} outside 0..{F.n}")
    return F.select(F.sizes() == i)


def layers_between(F: SetFamily, lo: int, hi: int) -> SetFamily:
    """Members with ``lo <= |A| <= hi``."""
    sz = F.sizes()
    return F.select((sz >= lo) & (sz <= hi))


def complement_family(F: SetFamily) -> SetFamily:
    """``2^[n]`` minus ``F``."""
    _require_enumerable(F.n)
    keep = np.ones(1 << F.n, dtype=bool)
    keep[F.masks.astype(np.int64)] = False
    return SetFamily(F.n, np.flatnonzero(keep).astype(np.uint64))


def deficit(E, m: int) -> int:
    """``m + 1 - |E|`` for a set with at most ``m`` elements."""
    size = _bits(E).bit_count()
    if size > m:
        raise DomainError(f"deficit needs |E| <= m, got |E|={size}, m={m}")
    return m + 1 - size


def family_deficit(Q: Iterable, m: int) -> int:
    return sum(deficit(E, m) for E in Q)


def restrict_disjoint(F: SetFamily, E) -> SetFamily:
    """Members of ``F`` disjoint from ``E``."""
    e = _bits(E)
    if F.n < 64 and e >> F.n:
        raise DomainError("E is not a subset of the ground set")
    return F.select((F.masks & np.uint64(e)) == 0)


def restrict_inside(F: SetFamily, W) -> SetFamily:
    """Members of ``F`` contained in ``W``."""
    w = np.uint64(_bits(W))
    return F.select((F.masks & ~w) == 0)


def minimal_members(F: SetFamily) -> SetFamily:
    """Inclusion-minimal members of ``F``."""
    if len(F) == 0:
        return F
    if F.has_empty():
        return SetFamily(F.n, [0])
    if F.n <= 22:
        ind = np.zeros(1 << F.n, dtype=bool)
        idx = F.masks.astype(np.int64)
        ind[idx] = True
        below = kernels.subset_closure(ind, F.n)
        keep = np.ones(len(F), dtype=bool)
        for i in range(F.n):
            b = np.int64(1 << i)
            has = (idx & b) != 0
            keep &= ~(has & below[idx ^ np.where(has, b, 0)])
        return F.select(keep)
    kept: list[int] = []
    for x in sorted(F, key=lambda b: (b.bit_count(), b)):
        if not any(y & x == y for y in kept):
            kept.append(x)
    return SetFamily(F.n, kept)


def up_closure(F: SetFamily) -> SetFamily:
    """All supersets of members of ``F``."""
    _require_enumerable(F.n)
    ind = np.zeros(1 << F.n, dtype=bool)
    ind[F.masks.astype(np.int64)] = True
    return SetFamily(F.n, np.flatnonzero(kernels.subset_closure(ind, F.n)).astype(np.uint64))


def is_up_closed(F: SetFamily) -> bool:
    return up_closure(F) == F


def is_uniform(F: SetFamily, k: int) -> bool:
    return bool((F.sizes() == k).all())


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    """(m, s, l) with n = (m+1)s - l, a = l - 1, r = n - a."""

    m: int
    s: int
    l: int  # noqa: E741

    def __post_init__(self):
        if self.m < 1 or self.s < 1:
            raise DomainError(f"need m >= 1 and s >= 1, got m={self.m}, s={self.s}")
        if not 1 <= self.l <= self.s:
            raise DomainError(f"need 1 <= l <= s, got l={self.l}, s={self.s}")

    @property
    def n(self) -> int:
        return (self.m + 1) * self.s - self.l

    @property
    def a(self) -> int:
        return self.l - 1

    @property
    def r(self) -> int:
        return self.n - self.a

    def as_dict(self) -> dict:
        return {"m": self.m, "s": self.s, "l": self.l, "n": self.n, "a": self.a, "r": self.r}


# ---------------------------------------------------------------------------
# family files
# ---------------------------------------------------------------------------


def format_family(F: SetFamily) -> str:
    lines = [f"n={F.n}"]
    lines.extend(format(b, "x") for b in F)
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SetFamily:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise DomainError("family file must start with 'n=<int>'")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise DomainError(f"bad header {lines[0]!r}")
    _check_n(n)
    masks = []
    for ln in lines[1:]:
        if ln != ln.lower() or ln.startswith("0x"):
            raise DomainError(f"masks must be lowercase hex without prefix: {ln!r}")
        try:
            b = int(ln, 16)
        except ValueError:
            raise DomainError(f"not a hexadecimal mask: {ln!r}")
        if b >> n:
            raise DomainError(f"mask {ln} has bits outside [{n}]")
        masks.append(b)
    if len(set(masks)) != len(masks):
        raise DomainError("duplicate mask in family file")
    if masks != sorted(masks):
        raise DomainError("family file masks must be sorted ascending")
    return SetFamily(n, masks)


def write_family(F: SetFamily, path) -> None:
    Path(path).write_text(format_family(F))


def read_family(path) -> SetFamily:
    return parse_family(Path(path).read_text())
