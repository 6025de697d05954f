"""Instance checks for the counting, deficit and case machinery.

Every verifier evaluates both sides of its inequality on the given instance
and reports the outcome; none of them assumes the parameters are large.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .core import Params, SetFamily, family_deficit, format_mask, full_mask, layer
from .errors import DomainError, InfeasibleError
from .exactsolve import cover_number, has_s_matching, matching_number
from .formulas import binom, binom_tail, blocker_bound, lambda_layer, lambda_total, p_size


@dataclass
class VerificationReport:
    claim: str
    instance: dict
    lhs: int
    rhs: int
    holds: bool
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "instance": _stringify(self.instance),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "witnesses": _stringify(self.witnesses),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def _stringify(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _hex(masks: Iterable[int]) -> list[str]:
    return [format(int(x), "x") for x in masks]


def _uniform_masks(n: int, j: int) -> np.ndarray:
    return SetFamily.uniform(n, j).masks


# ---------------------------------------------------------------------------
# bad and good low sets
# ---------------------------------------------------------------------------


@dataclass
class BadGoodReport:
    params: Params
    cover: int
    missing: SetFamily  # M: the m-sets absent from F
    thresholds: dict[int, int]
    B: dict[int, SetFamily]
    bad: dict[int, SetFamily]
    good: dict[int, SetFamily]


def _check_cover_size(A: int, p: Params) -> None:
    if A.bit_count() != p.a:
        raise DomainError(f"|A| must equal a = {p.a}, got {A.bit_count()}")
    if A >> p.n:
        raise DomainError(f"A is not inside [{p.n}]")


def bj_threshold(p: Params, j: int) -> int:
    return binom(p.r + p.m + 1 - 2 * j, p.m)


def b_sets(missing: SetFamily, p: Params, j: int) -> SetFamily:
    """``{E : |E| = j, #missing m-sets disjoint from E >= C(r+m+1-2j, m)}``."""
    cand = _uniform_masks(p.n, j)
    counts = kernels.count_disjoint(cand, missing.masks)
    return SetFamily(p.n, cand[counts >= bj_threshold(p, j)])


def missing_layer(F: SetFamily, m: int) -> SetFamily:
    return SetFamily.uniform(F.n, m).difference(layer(F, m))


def classify_bad_good(F: SetFamily, A: int, p: Params) -> BadGoodReport:
    if F.n != p.n:
        raise DomainError(f"family lives on [{F.n}], parameters need [{p.n}]")
    _check_cover_size(A, p)
    M = missing_layer(F, p.m)
    B, bad, good, thr = {}, {}, {}, {}
    for j in range(p.m):
        thr[j] = bj_threshold(p, j)
        B[j] = b_sets(M, p, j)
        Fj = layer(F, j)
        bad[j] = SetFamily(p.n, np.intersect1d(Fj.masks, B[j].masks))
        good[j] = Fj.difference(bad[j])
    return BadGoodReport(p, A, M, thr, B, bad, good)


def canonical_low_sets(p: Params, A: int, j: int) -> SetFamily:
    """j-sets E with ``|E & A| >= m + 1 - j``."""
    cand = _uniform_masks(p.n, j)
    hits = kernels.popcount(cand & np.uint64(A))
    return SetFamily(p.n, cand[hits >= p.m + 1 - j])


def _rigid_b_sets(p: Params, A: int, j: int) -> SetFamily:
    """B_j when M is exactly the m-sets inside R, by exact binomial comparison."""
    cand = _uniform_masks(p.n, j)
    v = kernels.popcount(cand & np.uint64(full_mask(p.n) ^ A))
    keep = np.array([binom(p.r - int(x), p.m) >= bj_threshold(p, j) for x in v], dtype=bool)
    return SetFamily(p.n, cand[keep])


# ---------------------------------------------------------------------------
# counting claims
# ---------------------------------------------------------------------------


def verify_counting_claim(A: int, F: SetFamily, p: Params, terminal: bool = False) -> VerificationReport:
    """``sum |B_j(M)| <= sum Lambda_j + |M| - C(r, m)``; with ``terminal`` the m = 3 form
    ``|B_1| + |B_2| <= C(a, 2) + |M| - C(r, 3)``.

    Needs A to cover F_m.  On equality the rigidity statements are checked too:
    ``M`` must be all m-sets inside R, and each B_j must equal the sets passing the
    exact binomial test (and, for the terminal form, B_1 empty, B_2 the pairs of A).
    """
    if terminal and p.m != 3:
        raise DomainError("the terminal form needs m = 3")
    rep = classify_bad_good(F, A, p)
    R = full_mask(p.n) ^ A
    M = rep.missing
    inside_R = SetFamily.uniform(p.n, p.m, R)
    covers = inside_R.issubset(M)
    xi = len(M) - binom(p.r, p.m)
    if terminal:
        layers = (1, 2)
        lhs = len(rep.B[1]) + len(rep.B[2])
        rhs = binom(p.a, 2) + xi
    else:
        layers = tuple(range(p.m))
        lhs = sum(len(rep.B[j]) for j in layers)
        rhs = sum(lambda_layer(p, j) for j in layers) + xi
    wit = {
        "A": format(A, "x"),
        "xi": xi,
        "A_covers_F_m": covers,
        "B_sizes": {j: len(rep.B[j]) for j in layers},
    }
    holds = covers and lhs <= rhs
    if covers and lhs == rhs:
        rigid = M == inside_R
        wit["equality"] = True
        wit["M_is_inside_R"] = rigid
        if terminal:
            shape = len(rep.B[1]) == 0 and rep.B[2] == SetFamily.uniform(p.n, 2, A)
        else:
            shape = all(rep.B[j] == _rigid_b_sets(p, A, j) for j in layers)
            wit["B_canonical"] = all(rep.B[j] == canonical_low_sets(p, A, j) for j in layers)
        wit["B_rigid"] = shape
        holds = holds and rigid and shape
    name = "m3-terminal-core" if terminal else "counting-from-missing"
    return VerificationReport(name, p.as_dict(), lhs, rhs, holds, wit)


def n_h_general(A: int, p: Params, h: int) -> int:
    """Low sets (size <= m-1) with shortage ``m + 1 - |E| - |E & A|`` in 1..h."""
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    _check_cover_size(A, p)
    total = 0
    for j in range(p.m):
        cand = _uniform_masks(p.n, j)
        short = p.m + 1 - j - kernels.popcount(cand & np.uint64(A))
        total += int(np.count_nonzero((short >= 1) & (short <= h)))
    return total


def n_h_exact(A: int, p: Params, h: int) -> int:
    """Candidate count N_h by enumeration.

    For m = 3 these are the four ordered classes of non-canonical pairs and
    singletons (pairs meeting A once, pairs in R, points of A, points of R)
    and ``h`` counts classes; otherwise see :func:`n_h_general`.
    """
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    if p.m != 3:
        return n_h_general(A, p, h)
    _check_cover_size(A, p)
    if h > 4:
        raise DomainError(f"m = 3 has four classes, got h = {h}")
    pairs = _uniform_masks(p.n, 2)
    singles = _uniform_masks(p.n, 1)
    hit2 = kernels.popcount(pairs & np.uint64(A))
    hit1 = kernels.popcount(singles & np.uint64(A))
    classes = [
        np.count_nonzero(hit2 == 1),
        np.count_nonzero(hit2 == 0),
        np.count_nonzero(hit1 == 1),
        np.count_nonzero(hit1 == 0),
    ]
    return int(sum(classes[:h]))


# ---------------------------------------------------------------------------
# deficits
# ---------------------------------------------------------------------------


def _check_low_matching(Q: list[int], m: int) -> None:
    seen = 0
    for x in Q:
        if x.bit_count() > m:
            raise DomainError(f"member {format_mask(x)} has more than m = {m} elements")
        if x & seen:
            raise DomainError("members must be pairwise disjoint")
        seen |= x
    if len(set(Q)) != len(Q):
        raise DomainError("members must be distinct")


def minimal_deficit_subfamily(Q: Iterable[int], l: int, m: int) -> list[int]:  # noqa: E741
    """Inclusion-minimal sublist with total deficit at least ``l``.

    One pass in order of decreasing deficit (then mask value) removes every
    member whose loss keeps the total at least ``l``.  A member kept once
    stays essential because the total only shrinks afterwards.
    """
    Q = [int(x) for x in Q]
    _check_low_matching(Q, m)
    total = family_deficit(Q, m)
    if total < l:
        raise InfeasibleError(f"total deficit {total} is below l = {l}")
    removed = set()
    for x in sorted(Q, key=lambda x: (x.bit_count(), x)):
        dx = m + 1 - x.bit_count()
        if total - dx >= l:
            total -= dx
            removed.add(x)
    return [x for x in Q if x not in removed]


def deficit_completion_check(F: SetFamily, Q: Iterable[int], p: Params) -> VerificationReport:
    """The completion step behind the deficit lemma, on one instance.

    ``Q`` is first made inclusion-minimal; W is the complement of its union,
    ``t = s - |Q|`` and ``d = Delta(Q) - l``.  When ``nu(F) < s`` the check
    confirms ``nu(F_{m+1}[W]) < t`` and compares the actual number of missing
    (m+1)-sets with the blocker bound for (m+1, t, d).
    """
    if F.n != p.n:
        raise DomainError(f"family lives on [{F.n}], parameters need [{p.n}]")
    Q = [int(x) for x in Q]
    _check_low_matching(Q, p.m)
    missing = [x for x in Q if x not in F]
    if missing:
        raise DomainError(f"{format_mask(missing[0])} is not a member of F")
    if family_deficit(Q, p.m) < p.l:
        raise DomainError(f"Delta(Q) = {family_deficit(Q, p.m)} is below l = {p.l}")
    Qmin = minimal_deficit_subfamily(Q, p.l, p.m)
    q = len(Qmin)
    delta = family_deficit(Qmin, p.m)
    d = delta - p.l
    t = p.s - q
    used = 0
    for x in Qmin:
        used |= x
    W = full_mask(p.n) ^ used
    assert W.bit_count() == (p.m + 1) * t + d
    nu_below_s = has_s_matching(F, p.s) is None
    top = layer(F, p.m + 1)
    inner = top.select((top.masks & np.uint64(used)) == 0)
    inner_nu = matching_number(inner)[0] if t >= 1 else 0
    y_top = binom(p.n, p.m + 1) - len(top)
    bound = blocker_bound(p.m + 1, t, d) if t >= 1 else 0
    wit = {
        "Q": _hex(Qmin),
        "q": q,
        "delta": delta,
        "d": d,
        "t": t,
        "W": format(W, "x"),
        "W_size": W.bit_count(),
        "nu_F_below_s": nu_below_s,
        "inner_nu": inner_nu,
        "inner_nu_below_t": inner_nu < t,
        "q_at_most_l": q <= p.l,
        "delta_in_range": p.l <= delta <= p.l + p.m,
    }
    holds = q <= p.l and p.l <= delta <= p.l + p.m
    if nu_below_s:
        holds = holds and inner_nu < t and y_top >= bound
    return VerificationReport("deficit-completion", p.as_dict(), y_top, bound, holds, wit)


# ---------------------------------------------------------------------------
# case split and low-layer comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseTag:
    case: str  # "I", "II" or "III"
    nu: int
    tau: int
    a: int
    cover: int  # least minimum cover of F_m

    def __post_init__(self):
        expect = "III" if self.nu >= self.a + 1 else ("I" if self.tau <= self.a else "II")
        if self.case != expect:
            raise DomainError(f"tag {self.case} inconsistent with nu={self.nu}, tau={self.tau}, a={self.a}")


def case_partition(F: SetFamily, p: Params) -> CaseTag:
    Fm = layer(F, p.m)
    nu = matching_number(Fm)[0]
    tau, cover = cover_number(Fm)
    if nu >= p.a + 1:
        case = "III"
    elif tau <= p.a:
        case = "I"
    else:
        case = "II"
    return CaseTag(case, nu, tau, p.a, cover)


def verify_low_layer_comparison(F: SetFamily, p: Params) -> VerificationReport:
    """If ``|F_{<=m}| <= Lambda + |Y_{>=m+1}|`` then ``|F| <= |P(m,s,l)|``."""
    if F.n != p.n:
        raise DomainError(f"family lives on [{F.n}], parameters need [{p.n}]")
    sizes = F.sizes()
    low = int(np.count_nonzero(sizes <= p.m))
    high = len(F) - low
    y_high = binom_tail(p.n, p.m + 1) - high
    lam = lambda_total(p)
    hypothesis = low <= lam + y_high
    conclusion = len(F) <= p_size(p)
    wit = {
        "F_low": low,
        "Lambda": lam,
        "Y_high": y_high,
        "hypothesis": hypothesis,
        "F_size": len(F),
        "P_size": p_size(p),
        "conclusion": conclusion,
    }
    return VerificationReport("low-layer-comparison", p.as_dict(), low, lam + y_high,
                              (not hypothesis) or conclusion, wit)


def demo_deficit_instance(p: Params) -> tuple[SetFamily, list[int]]:
    """A family with no s-matching and a low matching Q with Delta(Q) >= l.

    Q is one (m+1-l)-set when l <= m, otherwise singletons.  The rest of F is
    every (m+1)-set meeting a block S of s-1-|Q| further vertices, so every
    matching uses at most |Q| + |S| = s - 1 members.
    """
    if p.l <= p.m:
        sizes = [p.m + 1 - p.l]
    else:
        sizes = [1] * -(-p.l // p.m)
    Q, nxt = [], 0
    for k in sizes:
        Q.append(((1 << k) - 1) << nxt)
        nxt += k
    free = max(0, p.s - 1 - len(Q))
    if nxt + free > p.n:
        raise DomainError("parameters too small for the demonstration instance")
    S = ((1 << free) - 1) << nxt
    top = SetFamily.uniform(p.n, p.m + 1)
    hit = top.select((top.masks & np.uint64(S)) != 0)
    return SetFamily(p.n, np.concatenate([np.array(Q, dtype=np.uint64), hit.masks])), Q
