"""Exact arithmetic for real quadratic irrationals (p + q*sqrt(D)) / r.

All decisions (floor, sign, equality, cycle detection) are made with
unbounded integer arithmetic; floating point only appears in the decimal
conversion helpers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache
from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "QuadSurd",
    "UnimodularMap",
    "IDENTITY",
    "T",
    "V",
    "S",
    "parse_surd",
    "format_surd",
]

_TRIAL_LIMIT = 10_000


def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, f in enumerate(sieve) if f)


_PRIMES = _small_primes(_TRIAL_LIMIT)


@lru_cache(maxsize=4096)
def square_split(n: int) -> tuple[int, int]:
    """Write n = s**2 * d with d free of squares detectable at this size.

    Trial division up to 10**4 plus a perfect-square test of the cofactor;
    enough for every radicand this library produces (form discriminants
    t**2 - 4 with the Pell u-factor coming from the found primes).  Cached:
    the radicand is invariant along every expansion and cycle walk.
    """
    if n <= 0:
        raise ValueError("square_split needs a positive integer")
    s, d = 1, 1
    for p in _PRIMES:
        if p * p > n:
            break
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
    root = isqrt(n)
    if root * root == n:
        s *= root
    else:
        d *= n
    return s, d


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


class QuadSurd:
    """An element (p + q*sqrt(D)) / r of a real quadratic field.

    Canonical representation: r > 0, gcd(p, q, r) = 1, square factors of D
    pulled into q, and D = 1 exactly when the value is rational.  Instances
    are immutable; all operations return new values.
    """

    __slots__ = ("p", "q", "r", "D")

    def __init__(self, p: int, q: int = 0, r: int = 1, D: int = 1):
        if r == 0:
            raise ZeroDivisionError("surd denominator r must be nonzero")
        if q != 0:
            if D <= 0:
                raise ValueError("radicand D must be positive")
            s, d = square_split(D)
            if d == 1:  # sqrt(D) is an integer: the value is rational
                p, q, D = p + q * s, 0, 1
            else:
                q, D = q * s, d
        if q == 0:
            D = 1
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    # -- basic structure ------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    @classmethod
    def from_rational(cls, num: int, den: int = 1) -> "QuadSurd":
        return cls(num, 0, den)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return Fraction(self.p, self.r)

    def _key(self):
        # Semantic key: rational part and signed square of the irrational
        # part.  Equal values always share it, whatever D was handed in.
        irr = Fraction(self.q * abs(self.q) * self.D, self.r * self.r)
        return (Fraction(self.p, self.r), irr)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.q == 0 and self.r == 1 and self.p == other
        if not isinstance(other, QuadSurd):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))  # agrees with equal ints
        return hash(self._key())

    def __repr__(self):
        return f"QuadSurd({format_surd(self)!r})"

    def __str__(self):
        return format_surd(self)

    # -- arithmetic ------------------------------------------------------

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.p, -self.q, self.r, self.D)

    def __neg__(self) -> "QuadSurd":
        return QuadSurd(-self.p, -self.q, self.r, self.D)

    def __add__(self, n: int) -> "QuadSurd":
        if not isinstance(n, int):
            return NotImplemented
        return QuadSurd(self.p + n * self.r, self.q, self.r, self.D)

    __radd__ = __add__

    def __sub__(self, n: int) -> "QuadSurd":
        if not isinstance(n, int):
            return NotImplemented
        return self + (-n)

    def __rsub__(self, n: int) -> "QuadSurd":
        return (-self) + n

    def reciprocal(self) -> "QuadSurd":
        # 1 / w = r * (p - q*sqrt(D)) / (p**2 - q**2 D)
        den = self.p * self.p - self.q * self.q * self.D
        if den == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return QuadSurd(self.r * self.p, -self.r * self.q, den, self.D)

    def _scaled(self, k: int) -> "QuadSurd":
        return QuadSurd(self.p * k, self.q * k, self.r, self.D)

    # -- exact comparisons ------------------------------------------------

    def sign(self) -> int:
        """Sign of the value, decided by integer square root comparisons."""
        p, q, D = self.p, self.q, self.D
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        # compare p with -q*sqrt(D)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        lhs, rhs = p * p, q * q * D
        if lhs == rhs:
            return 0  # cannot happen for irrational values
        bigger_rational = lhs > rhs
        if p > 0:  # q < 0
            return 1 if bigger_rational else -1
        return -1 if bigger_rational else 1

    def _cmp_fraction(self, num: int, den: int) -> int:
        """Sign of self - num/den (den > 0)."""
        diff = QuadSurd(self.p * den - num * self.r, self.q * den, self.r * den, self.D)
        return diff.sign()

    def __lt__(self, other):
        return self._cmp_other(other) < 0

    def __le__(self, other):
        return self._cmp_other(other) <= 0

    def __gt__(self, other):
        return self._cmp_other(other) > 0

    def __ge__(self, other):
        return self._cmp_other(other) >= 0

    def _cmp_other(self, other) -> int:
        if isinstance(other, int):
            return self._cmp_fraction(other, 1)
        if isinstance(other, Fraction):
            return self._cmp_fraction(other.numerator, other.denominator)
        if isinstance(other, QuadSurd):
            if other.is_rational:
                return self._cmp_fraction(other.p, other.r)
            if self.is_rational:
                return -other._cmp_fraction(self.p, self.r)
            if self.D != other.D:
                raise TypeError("ordering surds from different fields is not supported")
            diff = QuadSurd(
                self.p * other.r - other.p * self.r,
                self.q * other.r - other.q * self.r,
                self.r * other.r,
                self.D,
            )
            return diff.sign()
        raise TypeError(f"cannot compare QuadSurd with {type(other).__name__}")

    def floor(self) -> int:
        """Exact floor via integer square roots, never floating point."""
        p, q, r, D = self.p, self.q, self.r, self.D
        if q == 0:
            return p // r
        # sqrt(q**2 D) approximates |q| sqrt(D) within 1, so the first guess
        # is off by at most one.
        root = isqrt(q * q * D)
        approx_num = p + (root if q > 0 else -(root + 1))
        n = approx_num // r
        while self._cmp_fraction(n + 1, 1) >= 0:
            n += 1
        while self._cmp_fraction(n, 1) < 0:
            n -= 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    # -- quadratic form --------------------------------------------------

    def minimal_form(self) -> tuple[int, int, int]:
        """Primitive (a, b, c) with a w**2 + b w + c = 0 and w = (-b + sqrt(b**2-4ac)) / (2a)."""
        if self.is_rational:
            raise ValueError("rational values have no primitive indefinite form")
        p, q, r, D = self.p, self.q, self.r, self.D
        a, b, c = r * r, -2 * p * r, p * p - q * q * D
        g = gcd(gcd(a, b), c)
        a, b, c = a // g, b // g, c // g
        if q < 0:  # keep w on the +sqrt branch
            a, b, c = -a, -b, -c
        return a, b, c

    @property
    def discriminant(self) -> int:
        a, b, c = self.minimal_form()
        return b * b - 4 * a * c

    # -- conversion -------------------------------------------------------

    def scaled_floor(self, scale_pow10: int) -> int:
        """floor(value * 10**scale_pow10), exactly."""
        return self._scaled(10**scale_pow10).floor()

    def to_decimal(self, digits: int = 15) -> Decimal:
        """The value rounded to `digits` significant decimal digits.

        Rounding is verified by recomputing with more guard digits until the
        rounded result is stable, which settles every case that can occur
        for quadratic irrationals (no exact ties exist).
        """
        if digits < 1:
            raise ValueError("digits must be >= 1")
        if self.p == 0 and self.q == 0:
            return Decimal(0)
        # locate the magnitude with exact scaled floors (handles values
        # that are tiny through cancellation of p against q*sqrt(D))
        k0 = 8
        n = self.scaled_floor(k0)
        while n in (0, -1):
            k0 *= 2
            n = self.scaled_floor(k0)
            if k0 > 1 << 20:  # pragma: no cover - defensive
                raise RuntimeError("value too close to zero to size")
        mag = len(str(abs(n) + 1)) - k0  # exponent of the leading digit
        guard = 8
        prev = None
        while True:
            k = max(digits - mag + guard, 1)
            n = self.scaled_floor(k)
            with localcontext() as ctx:
                ctx.prec = digits
                result = +(Decimal(n) / (Decimal(10) ** k))
            if prev is not None and result == prev:
                return result
            prev = result
            guard += 10
            if guard > 200:  # pragma: no cover - defensive
                raise RuntimeError("decimal rounding failed to stabilise")

    def __float__(self) -> float:
        return float(self.to_decimal(25))


@dataclass(frozen=True)
class UnimodularMap:
    """Integer 2x2 matrix with determinant +/-1 acting by Moebius maps."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant must be +/-1, got {self.det}")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return UnimodularMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMap":
        s = self.det
        return UnimodularMap(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def __pow__(self, n: int) -> "UnimodularMap":
        m = self if n >= 0 else self.inverse()
        n = abs(n)
        result = IDENTITY
        while n:
            if n & 1:
                result = result @ m
            m = m @ m
            n >>= 1
        return result

    def apply(self, w: QuadSurd) -> QuadSurd:
        """Exact Moebius action (a w + b) / (c w + d)."""
        p, q, r, D = w.p, w.q, w.r, w.D
        n1, m1 = self.a * p + self.b * r, self.a * q
        n2, m2 = self.c * p + self.d * r, self.c * q
        den = n2 * n2 - m2 * m2 * D
        if den == 0:
            raise ZeroDivisionError("Moebius map has a pole at this rational value")
        return QuadSurd(n1 * n2 - m1 * m2 * D, m1 * n2 - n1 * m2, den, D)

    def apply_complex(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)


IDENTITY = UnimodularMap(1, 0, 0, 1)
T = UnimodularMap(1, 1, 0, 1)
V = UnimodularMap(1, 0, 1, 1)
S = UnimodularMap(0, -1, 1, 0)


_SURD_RE = re.compile(
    r"""^\s*\(\s*(?P<p>[+-]?\d+)\s*(?P<sign>[+-])\s*(?:(?P<q>\d+)\s*\*\s*)?
        sqrt\(\s*(?P<D>\d+)\s*\)\s*\)\s*(?:/\s*(?P<r>\d+))?\s*$""",
    re.VERBOSE,
)
_RAT_RE = re.compile(r"^\s*(?P<p>[+-]?\d+)\s*(?:/\s*(?P<r>\d+))?\s*$")


def parse_surd(text: str) -> QuadSurd:
    """Parse the literal form "(p+q*sqrt(D))/r"; "q*" and "/r" may be omitted."""
    m = _SURD_RE.match(text)
    if m:
        q = int(m.group("q") or 1)
        if m.group("sign") == "-":
            q = -q
        return QuadSurd(int(m.group("p")), q, int(m.group("r") or 1), int(m.group("D")))
    m = _RAT_RE.match(text)
    if m:
        return QuadSurd(int(m.group("p")), 0, int(m.group("r") or 1))
    raise ValueError(f"not a surd literal: {text!r}")


def format_surd(w: QuadSurd) -> str:
    if w.is_rational:
        return f"{w.p}/{w.r}" if w.r != 1 else str(w.p)
    sign = "+" if w.q > 0 else "-"
    body = f"({w.p}{sign}{abs(w.q)}*sqrt({w.D}))"
    return f"{body}/{w.r}" if w.r != 1 else body
