"""Closed forms and polynomial identities in exact integer arithmetic.

Binomial coefficients follow the zero convention: ``C(n, k) = 0`` whenever
``k < 0``, ``k > n`` or ``n < 0``.  Nothing here touches floating point
except :meth:`QuadraticSurd.__float__`, which exists for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, isqrt

from .core import Params
from .errors import DomainError


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def binom_tail(n: int, k: int) -> int:
    """Number of subsets of [n] with at least ``k`` elements."""
    if k <= 0:
        return 1 << n
    return (1 << n) - sum(binom(n, i) for i in range(min(k, n + 1)))


# ---------------------------------------------------------------------------
# canonical family sizes
# ---------------------------------------------------------------------------


def lambda_ar(a: int, r: int, m: int, j: int) -> int:
    """``Lambda_j(a, r)``: j-subsets of an (a+r)-set meeting a fixed a-set in at least m+1-j points."""
    if not 0 <= j <= m:
        raise DomainError(f"layer index {j} outside 0..{m}")
    return sum(binom(a, u) * binom(r, j - u) for u in range(m + 1 - j, j + 1))


def lambda_layer(p: Params, j: int) -> int:
    """Number of j-sets E with ``|E & L| >= m + 1 - j`` for a fixed (l-1)-set L."""
    return lambda_ar(p.a, p.r, p.m, j)


def lambda_total(p: Params) -> int:
    """Sum of the canonical layers 0..m."""
    return sum(lambda_layer(p, j) for j in range(p.m + 1))


def p_size(p: Params) -> int:
    return lambda_total(p) + binom_tail(p.n, p.m + 1)


def _check_sl(s: int, l: int) -> None:  # noqa: E741
    if not 1 <= l <= s:
        raise DomainError(f"need 1 <= l <= s, got s={s}, l={l}")


def a3_size(s: int, l: int) -> int:  # noqa: E741
    _check_sl(s, l)
    return binom(3 * l - 1, 3)


def pprime_size(s: int, l: int) -> int:  # noqa: E741
    """Size of all triples inside a (3l-1)-set plus every set of size >= 4 on [4s - l]."""
    _check_sl(s, l)
    return a3_size(s, l) + binom_tail(4 * s - l, 4)


def lambda_minus_a3(s: int, l: int) -> int:  # noqa: E741
    """Factored cubic for |P(3,s,l)| - |P'(s,l)|."""
    _check_sl(s, l)
    num = (l - 1) * (-10 * l * l - 18 * s * l + 17 * l + 24 * s * s - 6 * s - 6)
    q, rem = divmod(num, 3)
    assert rem == 0
    return q


# ---------------------------------------------------------------------------
# the crossover threshold
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticSurd:
    """``rational + coeff * sqrt(disc)`` with exact rational parts."""

    rational: Fraction
    coeff: Fraction
    disc: int

    def __post_init__(self):
        if self.disc < 0:
            raise DomainError("discriminant must be nonnegative")

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0 or isqrt(self.disc) ** 2 == self.disc

    @property
    def is_integer(self) -> bool:
        if not self.is_rational:
            return False
        v = self.rational + self.coeff * isqrt(self.disc)
        return v.denominator == 1

    def floor(self) -> int:
        # valid for coeff > 0: floor((c + sqrt(D)) / k) only depends on isqrt(D)
        if self.coeff < 0:
            raise NotImplementedError("floor implemented for positive radical coefficient")
        v = self.rational + self.coeff * isqrt(self.disc)
        if self.is_rational or self.coeff.denominator == 1 == self.rational.denominator:
            return v.numerator // v.denominator
        # general positive coefficient: bisect on integer candidates
        lo = v.numerator // v.denominator
        while self.compare(lo + 1) >= 0:
            lo += 1
        return lo

    def compare(self, x) -> int:
        """Sign of ``self - x`` for a rational ``x``, decided exactly."""
        d = Fraction(x) - self.rational  # compare coeff*sqrt(D) with d
        c = self.coeff
        if c == 0:
            return (0 > d) - (0 < d)
        if c > 0:
            if d < 0:
                return 1
            lhs, rhs = c * c * self.disc, d * d
        else:
            if d > 0:
                return -1
            lhs, rhs = d * d, c * c * self.disc
        return (lhs > rhs) - (lhs < rhs)

    def __float__(self) -> float:
        return float(self.rational) + float(self.coeff) * self.disc ** 0.5


def t_threshold(s: int) -> QuadraticSurd:
    """Larger root in l of the quadratic factor of the endpoint cubic."""
    if s < 1:
        raise DomainError("t(s) needs s >= 1")
    return QuadraticSurd(Fraction(17 - 18 * s, 20), Fraction(1, 20), 49 - 852 * s + 1284 * s * s)


def t_discriminant(s: int) -> int:
    return t_threshold(s).disc


def asymptotic_slope() -> QuadraticSurd:
    """Limit of t(s)/s, namely (sqrt(321) - 9)/10."""
    return QuadraticSurd(Fraction(-9, 10), Fraction(1, 10), 321)


def endpoint_sign(s: int, l: int) -> int:  # noqa: E741
    """Sign of |P(3,s,l)| - |P'(s,l)| predicted from the roots l = 1 and l = t(s)."""
    _check_sl(s, l)
    if l == 1:
        return 0
    return t_threshold(s).compare(l)


# ---------------------------------------------------------------------------
# Hilton-Milner type bound, blocker bound
# ---------------------------------------------------------------------------


def h_k(N: int, u: int, k: int) -> int:
    if N < u + k:
        raise DomainError(f"h_k needs N >= u + k, got N={N}, u={u}, k={k}")
    return binom(N, k) - binom(N - u, k) + 1 - binom(N - u - k, k - 1)


def blocker_bound(q: int, t: int, d: int) -> int:
    """Ceiling of max{C(qt+d, q)/t, C(d+q, q)}."""
    if q < 1 or t < 1 or d < 0:
        raise DomainError(f"need q, t >= 1 and d >= 0, got q={q}, t={t}, d={d}")
    first = -(-binom(q * t + d, q) // t)
    return max(first, binom(d + q, q))


# ---------------------------------------------------------------------------
# missing-set requirements D_h and candidate counts N_h
# ---------------------------------------------------------------------------


def d_h_general(r: int, m: int, h: int) -> int:
    """``C(r-m+1+h, m) - C(r-m+1, m)``: missing m-sets needed at shortage h."""
    if not 1 <= h <= m + 1:
        raise DomainError(f"h must lie in 1..{m + 1}, got {h}")
    if r < m:
        raise DomainError(f"need r >= m, got r={r}, m={m}")
    return binom(r - m + 1 + h, m) - binom(r - m + 1, m)


def d_h(r: int, m: int, h: int) -> int:
    """Missing-set requirement D_h(r).

    For m = 3 this is the sharper per-class count of :func:`d_terminal`
    (h indexes the four classes); otherwise the general shortage form.
    """
    if m == 3:
        if not 1 <= h <= 4:
            raise DomainError(f"h must lie in 1..4, got {h}")
        return d_terminal(r, h)
    return d_h_general(r, m, h)


def d_terminal(r: int, i: int) -> int:
    """m = 3 requirements for the four classes of non-canonical singletons and pairs.

    Class 1: pairs meeting A once; 2: pairs inside R; 3: singletons in A;
    4: singletons in R.
    """
    if r < 3:
        raise DomainError(f"need r >= 3, got {r}")
    if i == 1:
        return binom(r - 1, 2)
    if i == 2:
        return (r - 2) ** 2
    if i == 3:
        return r * r
    if i == 4:
        return (3 * r * r - 3 * r + 2) // 2
    raise DomainError(f"class index must be 1..4, got {i}")


def d_terminal_binomial(r: int, i: int) -> int:
    """The same four requirements as binomial differences."""
    pairs = {1: (r, r - 1), 2: (r, r - 2), 3: (r + 2, r), 4: (r + 2, r - 1)}
    if i not in pairs:
        raise DomainError(f"class index must be 1..4, got {i}")
    hi, lo = pairs[i]
    return binom(hi, 3) - binom(lo, 3)


def n_h_closed(a: int, r: int, i: int) -> int:
    """Number of possible members of classes 1..i (m = 3)."""
    if not 1 <= i <= 4:
        raise DomainError(f"class index must be 1..4, got {i}")
    parts = [a * r, binom(r, 2), a, r]
    return sum(parts[:i])


def n_h_general_sum(a: int, r: int, m: int, h: int) -> int:
    """Low sets (size <= m-1) whose shortage m+1-|E|-|E & A| lies in 1..h."""
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    total = 0
    for j in range(m):
        for u in range(j + 1):
            if 1 <= m + 1 - j - u <= h:
                total += binom(a, u) * binom(r, j - u)
    return total


# ---------------------------------------------------------------------------
# coefficient comparison
# ---------------------------------------------------------------------------


def theta(m: int) -> Fraction:
    return Fraction(m + 1, 2 * m + 1)


def phi(m: int, alpha) -> Fraction:
    """Normalised m-layer loss minus the largest (m-1)-layer gain."""
    if m < 3:
        raise DomainError(f"phi needs m >= 3, got {m}")
    al = Fraction(alpha)
    if not 0 <= al <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {al}")
    loss = (m + 1 - 2 * al) ** (m - 1) / factorial(m - 1)
    gain = al / 2 * (m + 1 - al) ** (m - 2) / factorial(m - 2)
    return loss - gain


def coefficient_gap(m: int) -> bool:
    """``(2m-1)^(m-1) > (m-1) 2^(m-3) m^(m-2)``."""
    if m < 3:
        raise DomainError(f"needs m >= 3, got {m}")
    return (2 * m - 1) ** (m - 1) > (m - 1) * 2 ** (m - 3) * m ** (m - 2)


def coefficient_gap_sides(m: int) -> tuple[int, int]:
    return (2 * m - 1) ** (m - 1), (m - 1) * 2 ** (m - 3) * m ** (m - 2)


def reduced_gap_sides(m: int) -> tuple[int, int]:
    """``4(m-1)^(m-2)`` against ``m^(m-2)``."""
    return 4 * (m - 1) ** (m - 2), m ** (m - 2)


# ---------------------------------------------------------------------------
# m = 3 numerics: both sides of each identity, computed independently
# ---------------------------------------------------------------------------


def _m3(s: int, l: int):  # noqa: E741
    n = 4 * s - l
    a = l - 1
    r = n - a
    lam = binom(a, 2) + binom(n, 3) - binom(r, 3)
    return n, a, r, lam


def l12(s: int, n: int) -> int:
    """``(s-1) + (s-1)(2n-s)/2``."""
    num = (s - 1) * (2 * n - s)
    assert num % 2 == 0
    return (s - 1) + num // 2


def r_poly(p: int, s: int) -> int:
    return 48 * s * s - 36 * s * p - 20 * p * p + 67 * p - 108 * s + 54


def _good_emc(s, p):
    N = 4 * s - p - 4
    lhs = binom(N, 3) - binom(N - p + 1, 3) - binom(3 * p - 1, 3)
    num = (p - 1) * r_poly(p, s)
    assert num % 6 == 0
    return lhs, num // 6


def _h3_gap(s, l):  # noqa: E741
    n, a, _, lam = _m3(s, l)
    lhs = 2 * (lam - h_k(n, a, 3) - l12(s, n))
    rhs = 5 * l * l - 14 * l * s + 5 * l + 9 * s * s - 15 * s + 8
    return lhs, rhs


def _h3_gap_factor(s, l):  # noqa: E741
    return 5 * l * l - 14 * l * s + 9 * s * s, (s - l) * (9 * s - 5 * l)


def _li(n, i):
    return binom(n, 3) - binom(n - i, 3)


def _case2_h3_1(s, l):  # noqa: E741
    n, _, _, lam = _m3(s, l)
    lhs = 2 * (lam - _li(n, 1) - h_k(n - 1, l - 4, 3) - l12(s, n))
    rhs = 13 * l * l - 46 * l * s - 11 * l + 41 * s * s + 17 * s + 4
    return lhs, rhs


def _case2_h3_2(s, l):  # noqa: E741
    n, _, _, lam = _m3(s, l)
    lhs = 2 * (lam - _li(n, 2) - h_k(n - 2, l - 3, 3) - l12(s, n))
    rhs = 5 * l * l - 14 * l * s + 5 * l + 9 * s * s - 15 * s + 8
    return lhs, rhs


def _case2_clique_1(s, l):  # noqa: E741
    n, _, _, lam = _m3(s, l)
    lhs = 6 * (lam - _li(n, 1) - binom(3 * l - 10, 3) - l12(s, n))
    rhs = (-20 * l**3 - 36 * l * l * s + 294 * l * l + 48 * l * s * s
           + 54 * l * s - 1114 * l - 117 * s * s + 63 * s + 1326)
    return lhs, rhs


def _case2_clique_2(s, l):  # noqa: E741
    n, _, _, lam = _m3(s, l)
    lhs = 6 * (lam - _li(n, 2) - binom(3 * l - 7, 3) - l12(s, n))
    rhs = (-20 * l**3 - 36 * l * l * s + 210 * l * l + 48 * l * s * s
           + 78 * l * s - 616 * l - 165 * s * s + 123 * s + 492)
    return lhs, rhs


def _endpoint_cubic(s, l):  # noqa: E741
    return p_size(Params(3, s, l)) - pprime_size(s, l), lambda_minus_a3(s, l)


@dataclass(frozen=True)
class Identity:
    name: str
    variables: tuple[str, str]
    degree: int
    evaluate: object
    valid: object  # predicate on (x, y): every binomial argument nonnegative

    def sides(self, x: int, y: int) -> tuple[int, int]:
        if not self.valid(x, y):
            raise DomainError(f"{self.name}: ({x}, {y}) outside the identity's range")
        return self.evaluate(x, y)


IDENTITIES: dict[str, Identity] = {
    i.name: i
    for i in [
        Identity("good-emc", ("s", "p"), 3, _good_emc,
                 lambda s, p: p >= 1 and 4 * s - 2 * p - 3 >= 0),
        Identity("h3-gap", ("s", "l"), 3, _h3_gap,
                 lambda s, l: 1 <= l and 4 * s - 2 * l - 2 >= 0 and s >= 1),
        Identity("h3-gap-factor", ("s", "l"), 2, _h3_gap_factor, lambda s, l: True),
        Identity("case2-h3-1", ("s", "l"), 3, _case2_h3_1,
                 lambda s, l: l >= 4 and 4 * s - 2 * l - 1 >= 0 and s >= 1),
        Identity("case2-h3-2", ("s", "l"), 3, _case2_h3_2,
                 lambda s, l: l >= 3 and 4 * s - 2 * l - 2 >= 0 and s >= 1),
        Identity("case2-clique-1", ("s", "l"), 3, _case2_clique_1,
                 lambda s, l: 3 * l - 10 >= 0 and 4 * s - 2 * l + 1 >= 0),
        Identity("case2-clique-2", ("s", "l"), 3, _case2_clique_2,
                 lambda s, l: 3 * l - 7 >= 0 and 4 * s - 2 * l + 1 >= 0),
        Identity("endpoint-cubic", ("s", "l"), 3, _endpoint_cubic,
                 lambda s, l: 1 <= l <= s),
    ]
}


def appendix_identity(selector: str, x: int, y: int) -> tuple[int, int]:
    """(binomial side, polynomial side) of the named identity at (x, y).

    ``good-emc`` takes (s, p); every other selector takes (s, l).
    """
    try:
        ident = IDENTITIES[selector]
    except KeyError:
        raise DomainError(f"unknown identity {selector!r}; choose from {sorted(IDENTITIES)}")
    return ident.sides(x, y)


def certify_identity(selector: str, x0: int, y0: int) -> tuple[bool, int]:
    """Check an identity on the (deg+1) x (deg+1) grid anchored at (x0, y0).

    A bivariate polynomial of degree at most ``deg`` in each variable that
    vanishes on such a product grid is identically zero.  Returns
    ``(all_equal, points_checked)``.
    """
    ident = IDENTITIES[selector]
    side = ident.degree + 1
    ok = True
    for dx in range(side):
        for dy in range(side):
            lhs, rhs = ident.sides(x0 + dx, y0 + dy)
            ok &= lhs == rhs
    return ok, side * side
