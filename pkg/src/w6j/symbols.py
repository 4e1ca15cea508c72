"""Exact 2j, 3j and 6j symbols and the four-spin coupling ranges.

Two independent routes to the 6j symbol are provided.  :func:`six_j_msum`
contracts four 3j symbols with six 2j symbols over every magnetic quantum
number and serves as the reference.  :func:`six_j_racah` is the single-sum
closed form used in production.  Both return :class:`ExactRadical`.

Labels follow the recoupling layout ``{j1 j2 j12; j3 j4 j23}``, whose
triads are ``(j1, j2, j12)``, ``(j3, j4, j12)``, ``(j2, j3, j23)`` and
``(j1, j4, j23)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .errors import DomainError, ResourceLimit
from .exact import ExactRadical, HalfInt, SpinLike, as_half, factorial, squarefree_split

__all__ = [
    "JQuad",
    "SixJArgs",
    "two_j_symbol",
    "three_j_symbol",
    "six_j_msum",
    "six_j_racah",
    "six_j",
    "dim_zs",
    "dim_zs_symmetric",
    "j12_bounds",
    "j23_bounds",
    "scalar_product_BA",
    "time_reversal_phase",
    "triangle_ok",
    "MSUM_MAX_TERMS",
]

# largest m-lattice (number of free (m1, m2, m5) triples) six_j_msum will walk
MSUM_MAX_TERMS = 2_000_000


class JQuad(NamedTuple):
    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    j4: HalfInt

    @classmethod
    def of(cls, *values: SpinLike) -> "JQuad":
        if len(values) != 4:
            raise DomainError("a quad needs four spins")
        quad = cls(*(as_half(v) for v in values))
        if any(j.twice < 0 for j in quad):
            raise DomainError("spins must be nonnegative")
        return quad


class SixJArgs(NamedTuple):
    j1: HalfInt
    j2: HalfInt
    j12: HalfInt
    j3: HalfInt
    j4: HalfInt
    j23: HalfInt

    @classmethod
    def of(cls, *values: SpinLike) -> "SixJArgs":
        if len(values) != 6:
            raise DomainError("a 6j symbol needs six spins")
        args = cls(*(as_half(v) for v in values))
        if any(j.twice < 0 for j in args):
            raise DomainError("spins must be nonnegative")
        return args

    def twice(self) -> tuple[int, ...]:
        return tuple(j.twice for j in self)

    def triads(self):
        j1, j2, j12, j3, j4, j23 = self
        return ((j1, j2, j12), (j3, j4, j12), (j2, j3, j23), (j1, j4, j23))

    def quad(self) -> JQuad:
        return JQuad(self.j1, self.j2, self.j3, self.j4)


# --------------------------------------------------------------------------
# helpers on twice-values

def triangle_ok(ta: int, tb: int, tc: int) -> bool:
    """Triangle inequality with integer perimeter, on twice-values."""
    if (ta + tb + tc) % 2:
        return False
    return abs(ta - tb) <= tc <= ta + tb


def _check_jm(tj: int, tm: int) -> None:
    if tj < 0:
        raise DomainError(f"negative spin {tj}/2")
    if abs(tm) > tj:
        raise DomainError(f"|m| = {abs(tm)}/2 exceeds j = {tj}/2")
    if (tj - tm) % 2:
        raise DomainError(f"j - m is not an integer for j={tj}/2, m={tm}/2")


def _sign(exponent_twice: int) -> int:
    """(-1)**(exponent_twice/2); the exponent must be an integer."""
    assert exponent_twice % 2 == 0
    return -1 if (exponent_twice // 2) % 2 else 1


_PRIME_CACHE: list[int] = []


def _primes(n: int) -> list[int]:
    global _PRIME_CACHE
    if not _PRIME_CACHE or _PRIME_CACHE[-1] < n:
        limit = max(n, 2 * (_PRIME_CACHE[-1] if _PRIME_CACHE else 64))
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, int(limit ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _PRIME_CACHE = [i for i, f in enumerate(sieve) if f]
    return _PRIME_CACHE


def _legendre(n: int, p: int) -> int:
    e = 0
    while n:
        n //= p
        e += n
    return e


def _sqrt_factorial_ratio(num: list[int], den: list[int]) -> tuple[Fraction, int]:
    """sqrt(prod num! / prod den!) as ``(a, k)``: ``a*sqrt(k)``, k squarefree.

    Uses prime exponents from Legendre's formula, so no large integer is
    ever factored.
    """
    top = max(num + den + [1])
    a_num = a_den = 1
    k = 1
    for p in _primes(top):
        if p > top:
            break
        e = sum(_legendre(n, p) for n in num) - sum(_legendre(d, p) for d in den)
        if e == 0:
            continue
        half = e // 2  # floor, also for negative e
        if half > 0:
            a_num *= p**half
        elif half < 0:
            a_den *= p ** (-half)
        if e % 2:
            k *= p
    return Fraction(a_num, a_den), k


# --------------------------------------------------------------------------
# 2j and 3j

@lru_cache(maxsize=None)
def _two_j_form(tj: int, tm: int, tmp: int) -> tuple[Fraction, int]:
    _check_jm(tj, tm)
    _check_jm(tj, tmp)
    if tm != -tmp:
        return Fraction(0), 1
    # (-1)^(j-m) / sqrt(2j+1) = (-1)^(j-m)/(2j+1) * sqrt(2j+1)
    d = tj + 1
    s, k = squarefree_split(d)
    return Fraction(_sign(tj - tm) * s, d), k


def two_j_symbol(j: SpinLike, m: SpinLike, mp: SpinLike) -> ExactRadical:
    """The 2j symbol ``(-1)^(j-m) delta(m, -mp) / sqrt(2j+1)``."""
    j, m, mp = as_half(j), as_half(m), as_half(mp)
    return ExactRadical._from_int_form(*_two_j_form(j.twice, m.twice, mp.twice))


@lru_cache(maxsize=1 << 20)
def _three_j_form(t1: int, t2: int, t3: int, m1: int, m2: int, m3: int) -> tuple[Fraction, int]:
    """Racah's closed form for the 3j symbol on twice-values (int form)."""
    if m1 + m2 + m3 != 0 or not triangle_ok(t1, t2, t3):
        return Fraction(0), 1
    # integer quantities (all differences below are even)
    a = (t1 + t2 - t3) // 2
    b = (t1 - t2 + t3) // 2
    c = (-t1 + t2 + t3) // 2
    p1, q1 = (t1 + m1) // 2, (t1 - m1) // 2
    p2, q2 = (t2 + m2) // 2, (t2 - m2) // 2
    p3, q3 = (t3 + m3) // 2, (t3 - m3) // 2
    x1 = (t3 - t2 + m1) // 2   # j3 - j2 + m1
    x2 = (t3 - t1 - m2) // 2   # j3 - j1 - m2
    kmin = max(0, -x1, -x2)
    kmax = min(a, q1, p2)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (factorial(k) * factorial(x1 + k) * factorial(x2 + k)
               * factorial(a - k) * factorial(q1 - k) * factorial(p2 - k))
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return Fraction(0), 1
    sign = _sign(t1 - t2 - m3)
    root, k = _sqrt_factorial_ratio([a, b, c, p1, q1, p2, q2, p3, q3], [(t1 + t2 + t3) // 2 + 1])
    return sign * total * root, k


def three_j_symbol(j1: SpinLike, j2: SpinLike, j3: SpinLike,
                   m1: SpinLike, m2: SpinLike, m3: SpinLike) -> ExactRadical:
    """Exact Wigner 3j symbol.

    Returns exact zero when the m's do not sum to zero or the j's do not form
    a triangle with integer perimeter.  Raises DomainError if some ``|m| > j``
    or ``j - m`` is not an integer.
    """
    js = [as_half(x).twice for x in (j1, j2, j3)]
    ms = [as_half(x).twice for x in (m1, m2, m3)]
    for tj, tm in zip(js, ms):
        _check_jm(tj, tm)
    return ExactRadical._from_int_form(*_three_j_form(*js, *ms))


# --------------------------------------------------------------------------
# 6j

def _mul(x, y):
    c1, k1 = x
    c2, k2 = y
    if not c1 or not c2:
        return Fraction(0), 1
    if k1 == k2:
        return c1 * c2 * k1, 1
    if k1 == 1:
        return c1 * c2, k2
    if k2 == 1:
        return c1 * c2, k1
    g = gcd(k1, k2)
    return c1 * c2 * g, (k1 // g) * (k2 // g)


def _finish(acc: dict[int, Fraction]) -> ExactRadical:
    out = ExactRadical.zero()
    for k in sorted(acc):
        if acc[k]:
            out = out + ExactRadical._from_int_form(acc[k], k)
    return out


def six_j_msum(args: SixJArgs, max_terms: int | None = None) -> ExactRadical:
    """6j symbol by explicit summation over magnetic quantum numbers.

    With symmetric labels ``{a1 a2 a3; a4 a5 a6}`` this evaluates::

        prod_r sqrt(2a_r+1) * sum_{m, m'} (a1 a2 a3; m1 m2 m3)
            (a1 a5 a6; m1' m5' m6) (a2 a6 a4; m2' m6' m4)
            (a3 a4 a5; m3' m4' m5) * prod_r (a_r a_r; m_r m_r')

    where the last factor is the 2j symbol.  Only m-values for which none of
    the factors trivially vanishes are visited.
    """
    args = args if isinstance(args, SixJArgs) else SixJArgs.of(*args)
    t1, t2, t3, t4, t5, t6 = args.twice()
    if not (triangle_ok(t1, t2, t3) and triangle_ok(t1, t5, t6)
            and triangle_ok(t2, t6, t4) and triangle_ok(t3, t4, t5)):
        return ExactRadical.zero()
    limit = MSUM_MAX_TERMS if max_terms is None else max_terms
    if (t1 + 1) * (t2 + 1) * (t5 + 1) > limit:
        raise ResourceLimit("m-lattice too large for the explicit 6j sum")

    ts = (t1, t2, t3, t4, t5, t6)
    # sqrt(prod (2a+1)) in int form
    prod = 1
    for t in ts:
        prod *= t + 1
    s, k = squarefree_split(prod)
    pref = (Fraction(s), k)

    def tj(r, m):  # 2j symbol (a_r a_r; m -m)
        return _two_j_form(ts[r], m, -m)

    f3 = _three_j_form
    acc: dict[int, Fraction] = {}
    for m1 in range(-t1, t1 + 1, 2):
        w1 = _mul(pref, tj(0, m1))
        for m2 in range(-t2, t2 + 1, 2):
            m3 = -m1 - m2
            if abs(m3) > t3:
                continue
            a = f3(t1, t2, t3, m1, m2, m3)
            if not a[0]:
                continue
            w2 = _mul(_mul(_mul(w1, a), tj(1, m2)), tj(2, m3))
            for m5 in range(-t5, t5 + 1, 2):
                m6 = m1 + m5
                if abs(m6) > t6:
                    continue
                m4 = m2 + m6
                if abs(m4) > t4:
                    continue
                b = f3(t1, t5, t6, -m1, -m5, m6)
                if not b[0]:
                    continue
                c = f3(t2, t6, t4, -m2, -m6, m4)
                if not c[0]:
                    continue
                d = f3(t3, t4, t5, -m3, -m4, m5)
                if not d[0]:
                    continue
                v = _mul(_mul(_mul(w2, b), c), d)
                v = _mul(_mul(_mul(v, tj(3, m4)), tj(4, m5)), tj(5, m6))
                if v[0]:
                    acc[v[1]] = acc.get(v[1], Fraction(0)) + v[0]
    return _finish(acc)


@lru_cache(maxsize=1 << 16)
def _six_j_racah_form(t1, t2, t3, t4, t5, t6) -> tuple[Fraction, int]:
    a, b, c, d, e, f = t1, t2, t3, t4, t5, t6
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(triangle_ok(*tr) for tr in triads):
        return Fraction(0), 1
    # Racah's single sum, all quantities as ordinary integers
    alphas = [sum(tr) // 2 for tr in triads]
    betas = [(a + b + d + e) // 2, (a + c + d + f) // 2, (b + c + e + f) // 2]
    total = Fraction(0)
    for z in range(max(alphas), min(betas) + 1):
        den = 1
        for al in alphas:
            den *= factorial(z - al)
        for be in betas:
            den *= factorial(be - z)
        total += Fraction((-1 if z % 2 else 1) * factorial(z + 1), den)
    if total == 0:
        return Fraction(0), 1
    num_args, den_args = [], []
    for x, y, w in triads:
        num_args += [(x + y - w) // 2, (x - y + w) // 2, (-x + y + w) // 2]
        den_args.append((x + y + w) // 2 + 1)
    root, k = _sqrt_factorial_ratio(num_args, den_args)
    return total * root, k


def six_j_racah(args: SixJArgs) -> ExactRadical:
    """6j symbol from Racah's single-sum formula."""
    args = args if isinstance(args, SixJArgs) else SixJArgs.of(*args)
    return ExactRadical._from_int_form(*_six_j_racah_form(*args.twice()))


def six_j(args, oracle: bool = False) -> ExactRadical:
    return six_j_msum(args) if oracle else six_j_racah(args)


# --------------------------------------------------------------------------
# coupling ranges

def j12_bounds(q: JQuad) -> tuple[HalfInt, HalfInt]:
    """``(max(|j1-j2|, |j3-j4|), min(j1+j2, j3+j4))``; may be empty."""
    q = q if isinstance(q, JQuad) else JQuad.of(*q)
    t1, t2, t3, t4 = (j.twice for j in q)
    return HalfInt(max(abs(t1 - t2), abs(t3 - t4))), HalfInt(min(t1 + t2, t3 + t4))


def j23_bounds(q: JQuad) -> tuple[HalfInt, HalfInt]:
    """``(max(|j2-j3|, |j1-j4|), min(j2+j3, j1+j4))``; may be empty."""
    q = q if isinstance(q, JQuad) else JQuad.of(*q)
    t1, t2, t3, t4 = (j.twice for j in q)
    return HalfInt(max(abs(t2 - t3), abs(t1 - t4))), HalfInt(min(t2 + t3, t1 + t4))


def _dim_from_bounds(q: JQuad) -> Fraction:
    lo, hi = j12_bounds(q)
    return hi.value - lo.value + 1


def dim_zs_symmetric(q: JQuad) -> Fraction:
    """``2*min(j_r, s - j_r) + 1`` with ``s`` the semiperimeter (unclipped)."""
    q = q if isinstance(q, JQuad) else JQuad.of(*q)
    vals = [j.value for j in q]
    s = sum(vals) / 2
    return 2 * min(vals + [s - v for v in vals]) + 1


def dim_zs(q: JQuad) -> int:
    """Dimension of the space of rotational invariants in four spins.

    Zero when ``j1+j2+j3+j4`` is not an integer or the polygon inequality
    fails.  The bounds-based count is cross-checked against the symmetric
    formula whenever the latter is positive.
    """
    q = q if isinstance(q, JQuad) else JQuad.of(*q)
    if sum(j.twice for j in q) % 2:
        return 0
    d = _dim_from_bounds(q)
    sym = dim_zs_symmetric(q)
    if sym > 0 and d != sym:
        raise AssertionError(f"dimension formulas disagree on {q}: {d} vs {sym}")
    return max(0, int(d))


# --------------------------------------------------------------------------
# scalar products and time reversal

def scalar_product_BA(args: SixJArgs) -> ExactRadical:
    """``<j23|j12> = (-1)^(j1+j2+j3+j4) sqrt((2j12+1)(2j23+1)) {6j}``."""
    args = args if isinstance(args, SixJArgs) else SixJArgs.of(*args)
    w = six_j_racah(args)
    if w.is_zero():
        return w
    t = args.twice()
    sign = _sign(t[0] + t[1] + t[3] + t[4])
    return w * ExactRadical(Fraction(sign), (t[2] + 1) * (t[5] + 1))


def time_reversal_phase(j: SpinLike, m: SpinLike) -> tuple[int, HalfInt]:
    """Image of ``|j m>`` under time reversal: ``((-1)^(j-m), -m)``."""
    j, m = as_half(j), as_half(m)
    _check_jm(j.twice, m.twice)
    return _sign(j.twice - m.twice), -m
