"""The candidate extremal families and the two transformations used on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import MAX_ENUM_N, Params, SetFamily, all_masks, mask_of
from .errors import CapacityError, DomainError, InfeasibleError

BUILD_LIMIT = MAX_ENUM_N


@dataclass(frozen=True)
class CanonicalFamilySpec:
    """Parameters plus a kernel: |L| = l - 1 for P, |L'| = 3l - 1 for P'."""

    params: Params
    kernel: int
    clique: bool = False  # True for P'

    def __post_init__(self):
        p = self.params
        if self.clique and p.m != 3:
            raise DomainError("the clique-type family is defined for m = 3")
        need = 3 * p.l - 1 if self.clique else p.l - 1
        if self.kernel.bit_count() != need:
            raise DomainError(f"kernel must have {need} elements, got {self.kernel.bit_count()}")
        if self.kernel >> p.n:
            raise DomainError(f"kernel is not inside [{p.n}]")

    @property
    def n(self) -> int:
        return self.params.n


def p_spec(m: int, s: int, l: int, kernel=None) -> CanonicalFamilySpec:  # noqa: E741
    p = Params(m, s, l)
    k = mask_of(range(1, l)) if kernel is None else _as_mask(kernel)
    return CanonicalFamilySpec(p, k)


def pprime_spec(s: int, l: int, kernel=None) -> CanonicalFamilySpec:  # noqa: E741
    p = Params(3, s, l)
    if 3 * l - 1 > p.n:
        raise DomainError(f"a (3l-1)-set does not fit in [{p.n}]")
    k = mask_of(range(1, 3 * l)) if kernel is None else _as_mask(kernel)
    return CanonicalFamilySpec(p, k, clique=True)


def _as_mask(kernel) -> int:
    return kernel if isinstance(kernel, int) else mask_of(kernel)


def p_member(spec: CanonicalFamilySpec, A: int) -> bool:
    """``|A| + |A & L| >= m + 1``."""
    return A.bit_count() + (A & spec.kernel).bit_count() >= spec.params.m + 1


def pprime_member(spec: CanonicalFamilySpec, A: int) -> bool:
    size = A.bit_count()
    return size >= 4 or (size == 3 and A & ~spec.kernel == 0)


def _require_buildable(n: int) -> None:
    if n > BUILD_LIMIT:
        raise CapacityError(f"building needs n <= {BUILD_LIMIT}, got {n}")


def p_build(spec: CanonicalFamilySpec) -> SetFamily:
    if spec.clique:
        raise DomainError("use pprime_build for the clique-type family")
    _require_buildable(spec.n)
    allm = all_masks(spec.n)
    score = kernels.popcount(allm) + kernels.popcount(allm & np.uint64(spec.kernel))
    return SetFamily(spec.n, allm[score >= spec.params.m + 1])


def pprime_build(spec: CanonicalFamilySpec) -> SetFamily:
    if not spec.clique:
        raise DomainError("use p_build for the canonical family")
    _require_buildable(spec.n)
    allm = all_masks(spec.n)
    size = kernels.popcount(allm)
    inside = (allm & ~np.uint64(spec.kernel)) == 0
    return SetFamily(spec.n, allm[(size >= 4) | ((size == 3) & inside)])


def lift(G: SetFamily, m: int, n: int | None = None) -> SetFamily:
    """``G`` together with every subset of [n] of size at least m + 1."""
    n = G.n if n is None else n
    if n != G.n:
        raise DomainError(f"G lives on [{G.n}], not [{n}]")
    if len(G) and not bool((G.sizes() == m).all()):
        raise DomainError(f"G must be {m}-uniform")
    _require_buildable(n)
    allm = all_masks(n)
    big = allm[kernels.popcount(allm) >= m + 1]
    return SetFamily(n, np.concatenate([G.masks, big]))


def replace_empty(F: SetFamily) -> SetFamily:
    """Swap the empty set for the least singleton not already in ``F``."""
    if not F.has_empty():
        return F
    for i in range(F.n):
        if (1 << i) not in F:
            return SetFamily(F.n, np.concatenate([F.masks[1:], [np.uint64(1 << i)]]))
    raise InfeasibleError("every singleton is present: the empty set and the n "
                          "singletons already form an (n+1)-matching")
