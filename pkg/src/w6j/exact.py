"""Exact arithmetic: half-integers, radicals ``r*sqrt(s)`` and factorials.

Rationals are :class:`fractions.Fraction` throughout.  An
:class:`ExactRadical` is kept in a canonical form so that two equal numbers
always compare (and hash) equal:

* ``coef`` is a Fraction and ``radicand`` is a Fraction whose numerator and
  denominator are squarefree and coprime;
* a prime with odd exponent in the squared value sits in the radicand
  numerator when that exponent is positive and in the denominator when it is
  negative, so ``1/sqrt(2)`` prints as ``1*sqrt(1/2)`` while ``sqrt(2)``
  stays ``1*sqrt(2)``;
* zero is ``0*sqrt(1)``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import DomainError, IncompatibleRadicands, ResourceLimit

__all__ = [
    "HalfInt",
    "as_half",
    "ExactRadical",
    "radical_mul",
    "radical_add",
    "to_float",
    "to_decimal",
    "factorial",
    "set_factorial_cap",
    "squarefree_split",
]


# --------------------------------------------------------------------------
# half-integers

@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A multiple of 1/2, stored as the integer ``twice = 2*value``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise DomainError(f"twice must be an int, got {self.twice!r}")

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Read ``"3"``, ``"-1/2"``, ``"7/2"`` or ``"2.5"``."""
        s = str(text).strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a half-integer: {text!r}") from None
        return cls.from_fraction(value)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "HalfInt":
        t = 2 * Fraction(value)
        if t.denominator != 1:
            raise DomainError(f"{value} is not a multiple of 1/2")
        return cls(int(t))

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self):
        return self.twice / 2

    def __add__(self, other):
        other = as_half(other)
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_half(other)
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        return as_half(other) - self

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __lt__(self, other):
        try:
            other = as_half(other)
        except DomainError:
            return NotImplemented
        return self.twice < other.twice

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return Fraction(self.twice, 2) == other
        return NotImplemented

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({str(self)!r})"


SpinLike = Union[HalfInt, int, Fraction, str, float]


def as_half(x: SpinLike) -> HalfInt:
    """Coerce ints, Fractions, strings and exact-half floats to HalfInt."""
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, bool):
        raise DomainError("booleans are not spins")
    if isinstance(x, int):
        return HalfInt(2 * x)
    if isinstance(x, Fraction):
        return HalfInt.from_fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x) or (2 * x) != int(2 * x):
            raise DomainError(f"{x} is not a multiple of 1/2")
        return HalfInt(int(2 * x))
    if isinstance(x, str):
        return HalfInt.parse(x)
    raise DomainError(f"cannot interpret {x!r} as a half-integer")


# --------------------------------------------------------------------------
# factorials

class _FactorialTable:
    """Grow-only table of n!.  Readers never see a partially built entry."""

    def __init__(self, cap: int = 600):
        self.cap = cap
        self._values = [1]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n > self.cap:
            raise ResourceLimit(f"{n}! exceeds the factorial cap {self.cap}")
        values = self._values
        if 0 <= n < len(values):
            return values[n]
        if n < 0:
            raise DomainError(f"factorial of negative number {n}")
        with self._lock:
            values = self._values
            while len(values) <= n:
                # append is atomic, so concurrent readers only ever see
                # fully computed entries
                values.append(values[-1] * len(values))
            return values[n]


factorial = _FactorialTable()


def set_factorial_cap(cap: int) -> None:
    """Change the largest n for which n! may be requested."""
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    factorial.cap = cap


# --------------------------------------------------------------------------
# squarefree decomposition

def _primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]


_TRIAL_BOUND = 5000
_PRIMES = _primes_up_to(_TRIAL_BOUND)


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(a, k)`` with ``n == a*a*k`` and ``k`` squarefree.

    Trial division covers primes up to a fixed bound; a leftover cofactor is
    absorbed if it is a perfect square and otherwise kept in ``k``.  Inputs
    here are products of small factorial-type integers, so the fallback is
    essentially never exercised.
    """
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return (1, n)
    a, k = 1, 1
    for p in _PRIMES:
        if p * p > n:
            break
        if n % p:
            continue
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        a *= p ** (e // 2)
        if e % 2:
            k *= p
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            a *= r
        else:
            k *= n
    return a, k


# --------------------------------------------------------------------------
# radicals

def _display_form(c: Fraction, k: int) -> tuple[Fraction, Fraction]:
    """Map the integer form ``c*sqrt(k)`` (k squarefree) to display form."""
    if c == 0 or k == 0:
        return Fraction(0), Fraction(1)
    t = math.gcd(k, c.denominator)
    return c * t, Fraction(k // t, t)


@dataclass(frozen=True, eq=False)
class ExactRadical:
    """The exact real number ``coef * sqrt(radicand)``.

    The constructor accepts any rational pair and normalizes it, so
    ``ExactRadical(Fraction(1, 2), 12)`` becomes ``1*sqrt(3)``.
    """

    coef: Fraction
    radicand: Fraction = Fraction(1)

    def __post_init__(self):
        coef = Fraction(self.coef)
        rad = Fraction(self.radicand)
        if rad < 0:
            raise DomainError("radicand must be nonnegative")
        if coef == 0 or rad == 0:
            c, r = Fraction(0), Fraction(1)
        else:
            # sqrt(P/Q) = sqrt(P*Q)/Q
            a, k = squarefree_split(rad.numerator * rad.denominator)
            c, r = _display_form(coef * a / rad.denominator, k)
        object.__setattr__(self, "coef", c)
        object.__setattr__(self, "radicand", r)

    @classmethod
    def _from_int_form(cls, c: Fraction, k: int) -> "ExactRadical":
        # k must already be squarefree; skips factorization
        obj = object.__new__(cls)
        coef, rad = _display_form(c, k)
        object.__setattr__(obj, "coef", coef)
        object.__setattr__(obj, "radicand", rad)
        return obj

    @property
    def int_form(self) -> tuple[Fraction, int]:
        """``(c, k)`` with value ``c*sqrt(k)`` and ``k`` a squarefree integer."""
        r = self.radicand
        return self.coef / r.denominator, r.numerator * r.denominator

    @classmethod
    def zero(cls) -> "ExactRadical":
        return cls(Fraction(0))

    @classmethod
    def one(cls) -> "ExactRadical":
        return cls(Fraction(1))

    def is_zero(self) -> bool:
        return self.coef == 0

    def sign(self) -> int:
        return (self.coef > 0) - (self.coef < 0)

    def square(self) -> Fraction:
        """The exact rational value of ``self**2``."""
        return self.coef * self.coef * self.radicand

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactRadical(Fraction(other))
        if not isinstance(other, ExactRadical):
            return NotImplemented
        return radical_mul(self, other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactRadical(Fraction(other))
        if not isinstance(other, ExactRadical):
            return NotImplemented
        return radical_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ExactRadical._from_int_form(*_neg(self.int_form))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactRadical(Fraction(other))
        if not isinstance(other, ExactRadical):
            return NotImplemented
        return self.coef == other.coef and self.radicand == other.radicand

    def __hash__(self):
        return hash((self.coef, self.radicand))

    def __bool__(self):
        return self.coef != 0

    def __float__(self):
        return to_float(self)

    def __str__(self):
        if self.coef == 0:
            return "0"
        r = self.radicand
        rad = str(r.numerator) if r.denominator == 1 else f"({r})"
        return f"{self.coef}·√{rad}"

    def __repr__(self):
        return f"ExactRadical({self.coef!s}, {self.radicand!s})"


def _neg(form):
    c, k = form
    return -c, k


def radical_mul(a: ExactRadical, b: ExactRadical) -> ExactRadical:
    """Exact product, normalized."""
    c1, k1 = a.int_form
    c2, k2 = b.int_form
    if c1 == 0 or c2 == 0:
        return ExactRadical.zero()
    g = math.gcd(k1, k2)
    return ExactRadical._from_int_form(c1 * c2 * g, (k1 // g) * (k2 // g))


def radical_add(a: ExactRadical, b: ExactRadical) -> ExactRadical:
    """Exact sum of two radicals sharing a square class.

    Raises :class:`IncompatibleRadicands` for ``sqrt(2) + sqrt(3)`` style
    input, which cannot be written as a single radical.
    """
    c1, k1 = a.int_form
    c2, k2 = b.int_form
    if c1 == 0:
        return b
    if c2 == 0:
        return a
    if k1 != k2:
        raise IncompatibleRadicands(f"cannot add {a} and {b}")
    return ExactRadical._from_int_form(c1 + c2, k1)


def _sqrt_fraction_floor(num: int, den: int, shift: int) -> tuple[int, bool]:
    """floor(sqrt(num/den) * 2**shift) and whether it is exact."""
    scaled = num << (2 * shift)
    q, rem = divmod(scaled, den)
    s = math.isqrt(q)
    return s, (rem == 0 and s * s == q)


def to_float(a: ExactRadical, precision_bits: int = 53) -> float:
    """Nearest double to ``a``.

    The square root is taken on integers with ``precision_bits + 64`` guard
    bits plus a sticky bit, so the final conversion is correctly rounded.
    """
    if precision_bits < 53:
        raise DomainError("precision_bits must be at least 53")
    if a.coef == 0:
        return 0.0
    sq = a.square()
    num, den = sq.numerator, sq.denominator
    # choose shift so the root carries precision_bits + 64 significant bits
    mag = (num.bit_length() - den.bit_length()) // 2
    shift = max(0, precision_bits + 64 - mag)
    s, exact = _sqrt_fraction_floor(num, den, shift)
    if exact:
        value = Fraction(s, 1 << shift)
    else:
        value = Fraction(2 * s + 1, 1 << (shift + 1))
    return a.sign() * float(value)


def to_decimal(a: ExactRadical, digits: int = 17) -> str:
    """Decimal string of ``a`` truncated to ``digits`` significant digits."""
    if a.coef == 0:
        return "0"
    sq = a.square()
    num, den = sq.numerator, sq.denominator
    # estimate decimal exponent of the root
    est = (len(str(num)) - len(str(den))) // 2
    scale = digits - est + 1
    if scale >= 0:
        q = (num * 10 ** (2 * scale)) // den
    else:
        q = num // (den * 10 ** (-2 * scale))
    s = math.isqrt(q)
    text = str(s)
    # place the decimal point: value = s * 10**(-scale)
    point = len(text) - scale
    keep = text[:digits]
    if point <= 0:
        body = "0." + "0" * (-point) + keep.rstrip("0")
    elif point >= len(keep):
        body = keep + "0" * (point - len(keep))
    else:
        body = keep[:point] + "." + keep[point:]
        body = body.rstrip("0").rstrip(".")
    if body.endswith("."):
        body = body[:-1]
    sign = "-" if a.coef < 0 else ""
    return sign + body
