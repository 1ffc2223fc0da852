"""'+' and '-' continued fractions of quadratic irrationals.

The '-' expansion b0 - 1/(b1 - 1/...) is driven by PSL(2,Z) and is the one
the cycle machinery consumes; the ordinary '+' expansion and the conversion
rule between the two are needed to move between the two Markov tree
presentations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .exact import QuadSurd, UnimodularMap

__all__ = [
    "PLUS",
    "MINUS",
    "COINCIDE_RATIO",
    "PeriodicCF",
    "minus_expand",
    "plus_expand",
    "plus_to_minus",
    "value_of",
    "conjugate_cf",
    "rotate_period",
    "coincide_distance_bound",
    "parse_cf",
    "format_cf",
]

PLUS = "+"
MINUS = "-"

#: The contraction ratio (2 / (1 + sqrt 5))**2 appearing in all error bounds.
COINCIDE_RATIO = (2.0 / (1.0 + math.sqrt(5.0))) ** 2

_EXPANSION_CAP = 100_000


class ExpansionError(RuntimeError):
    """Internal failure of an expansion that must terminate."""


class DegeneratePeriodError(ValueError):
    """The periodic part fixes a rational point; not a valid quadratic CF."""


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[: d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class PeriodicCF:
    """An eventually periodic continued fraction in one of the conventions."""

    convention: str
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if self.convention not in (PLUS, MINUS):
            raise ValueError("convention must be '+' or '-'")
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        if self.convention == MINUS:
            if any(b < 2 for b in self.period):
                raise ValueError("'-' period entries must be >= 2")
            if any(b < 2 for b in self.preperiod[1:]):
                raise ValueError("'-' partial quotients after the first must be >= 2")
        else:
            if any(a < 1 for a in self.period):
                raise ValueError("'+' period entries must be >= 1")
            if any(a < 1 for a in self.preperiod[1:]):
                raise ValueError("'+' partial quotients after the first must be >= 1")

    @property
    def is_pure(self) -> bool:
        return not self.preperiod

    def digits(self) -> Iterator[int]:
        """The infinite partial-quotient stream."""
        yield from self.preperiod
        while True:
            yield from self.period

    def first_digits(self, n: int) -> tuple[int, ...]:
        return tuple(islice(self.digits(), n))

    def canonical(self) -> "PeriodicCF":
        """Shortest preperiod, primitive period."""
        period = _primitive(self.period)
        pre = list(self.preperiod)
        period = list(period)
        while pre and pre[-1] == period[-1]:
            period.insert(0, period.pop())
            pre.pop()
        return PeriodicCF(self.convention, tuple(pre), tuple(period))

    def least_rotation(self) -> "PeriodicCF":
        """Rotation-insensitive representative of a purely periodic CF."""
        if not self.is_pure:
            raise ValueError("least_rotation needs a purely periodic CF")
        w = self.period
        best = min(w[i:] + w[:i] for i in range(len(w)))
        return PeriodicCF(self.convention, (), best)

    def same_period(self, other: "PeriodicCF") -> bool:
        """True when the two CFs have the same period up to rotation."""
        a = _primitive(self.canonical().period)
        b = _primitive(other.canonical().period)
        return self.convention == other.convention and len(a) == len(b) and (
            b in tuple(a[i:] + a[:i] for i in range(len(a)))
        )

    def __str__(self):
        return format_cf(self)


def _step_maps(convention: str, digit: int) -> UnimodularMap:
    # value map t -> digit - 1/t (MINUS) or digit + 1/t (PLUS)
    if convention == MINUS:
        return UnimodularMap(digit, -1, 1, 0)
    return UnimodularMap(digit, 1, 1, 0)


def _expand(w: QuadSurd, convention: str) -> PeriodicCF:
    if w.is_rational:
        raise ValueError("expansion of a rational value does not terminate")
    seen: dict[QuadSurd, int] = {}
    digits: list[int] = []
    state = w
    for _ in range(_EXPANSION_CAP):
        if state in seen:
            k = seen[state]
            return PeriodicCF(convention, tuple(digits[:k]), tuple(digits[k:])).canonical()
        seen[state] = len(digits)
        if convention == MINUS:
            b = state.ceil()
            digits.append(b)
            state = (b - state).reciprocal()  # 1 / (b - w)
        else:
            a = state.floor()
            digits.append(a)
            state = (state - a).reciprocal()  # 1 / (w - a)
    raise ExpansionError("state never recurred; this cannot happen for quadratic surds")


def minus_expand(w: QuadSurd) -> PeriodicCF:
    """The '-' expansion, with the period detected by exact state recurrence."""
    return _expand(w, MINUS)


def plus_expand(w: QuadSurd) -> PeriodicCF:
    """The ordinary '+' expansion."""
    return _expand(w, PLUS)


def _select_periodic_root(m: UnimodularMap, convention: str) -> QuadSurd:
    """The fixed point of m that a purely periodic CF of this convention names.

    For MINUS that is the root with 0 < conj(x) < 1 < x, for PLUS the root
    with x > 1 and -1 < conj(x) < 0.
    """
    a, b, c, d = m.entries()
    if c == 0:
        raise DegeneratePeriodError("period matrix is affine; no quadratic fixed point")
    disc = (a - d) * (a - d) + 4 * b * c
    if disc <= 0 or QuadSurd(0, 1, 1, disc).is_rational:
        raise DegeneratePeriodError("fixed point of the period is rational")
    for sgn in (1, -1):
        x = QuadSurd(a - d, sgn, 2 * c, disc)
        xc = x.conjugate()
        if convention == MINUS:
            ok = x > 1 and 0 < xc and xc < 1
        else:
            ok = x > 1 and QuadSurd(-1, 0, 1) < xc and xc < 0
        if ok:
            return x
    raise DegeneratePeriodError("no fixed point satisfies the pure-periodicity range")


def value_of(cf: PeriodicCF) -> QuadSurd:
    """Exact value: solve the period's fixed point, then apply the preperiod."""
    cf = cf.canonical()
    m = UnimodularMap(1, 0, 0, 1)
    for digit in cf.period:
        m = m @ _step_maps(cf.convention, digit)
    x = _select_periodic_root(m, cf.convention)
    for digit in reversed(cf.preperiod):
        x = _step_maps(cf.convention, digit).apply(x)
    return x


def plus_to_minus(cf: PeriodicCF) -> PeriodicCF:
    """Convert a '+' CF to the '-' convention.

    The rule sends [a0, a1, a2, a3, ...] to
    (a0+1, 2 x (a1-1), a2+2, 2 x (a3-1), ...), pairing entries two at a
    time.  The period is unrolled to even length first so that the pairing
    is stable, and an empty preperiod borrows one period copy so position 0
    (which receives +1 instead of +2) is handled once.
    """
    if cf.convention != PLUS:
        raise ValueError("plus_to_minus needs a '+' continued fraction")
    cf = cf.canonical()
    period = cf.period if len(cf.period) % 2 == 0 else cf.period * 2
    pre = cf.preperiod
    if len(pre) % 2 == 1:
        pre = pre + period[:1]
        period = period[1:] + period[:1]
    if not pre:
        pre = period

    def pairs(word):
        return zip(word[0::2], word[1::2])

    out_pre: list[int] = []
    for idx, (even, odd) in enumerate(pairs(pre)):
        out_pre.append(even + (1 if idx == 0 else 2))
        out_pre.extend([2] * (odd - 1))
    out_period: list[int] = []
    for even, odd in pairs(period):
        out_period.append(even + 2)
        out_period.extend([2] * (odd - 1))
    return PeriodicCF(MINUS, tuple(out_pre), tuple(out_period)).canonical()


def conjugate_cf(cf: PeriodicCF) -> PeriodicCF:
    """The '-' expansion of -conj(w) for w = (d0, overline(d1..dm)).

    Purely periodic input (overline(b0..br)) is first rewritten as
    (b0, overline(b1..br b0)).
    """
    if cf.convention != MINUS:
        raise ValueError("conjugate_cf needs a '-' continued fraction")
    cf = cf.canonical()
    if cf.is_pure:
        d0 = cf.period[0]
        period = cf.period[1:] + cf.period[:1]
    elif len(cf.preperiod) == 1:
        d0 = cf.preperiod[0]
        period = cf.period
    else:
        raise ValueError("conjugate_cf needs shape (d0, overline(d1..dm))")
    dm = period[-1]
    new_period = tuple(reversed(period[:-1])) + (dm,)
    return PeriodicCF(MINUS, (dm - d0,), new_period).canonical()


def rotate_period(cf: PeriodicCF, k: int) -> PeriodicCF:
    """Cyclic rotation of a purely periodic CF by k places."""
    if not cf.is_pure:
        raise ValueError("rotate_period needs a purely periodic CF")
    n = len(cf.period)
    k %= n
    return PeriodicCF(cf.convention, (), cf.period[k:] + cf.period[:k])


def coincide_distance_bound(r: int) -> float:
    """Upper bound 10 * ((2/(1+sqrt5))**2)**r for two reals whose '-' CFs
    share the first r+1 partial quotients (and whose '+' CFs use only 1, 2)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return 10.0 * COINCIDE_RATIO**r


_MINUS_RE = re.compile(r"^\s*(?P<pre>[^();\[\]]*?)\s*;?\s*\(\s*(?P<per>[^()]+)\s*\)\s*$")
_PLUS_RE = re.compile(r"^\s*\[\s*(?P<body>.+)\s*\]\s*$")


def _parse_ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


def parse_cf(text: str) -> PeriodicCF:
    """Parse "b0;(b1,b2,...)" (MINUS) or "[a0;(a1,...)]" (PLUS).

    Preperiod entries sit before the parenthesis, comma separated; pure
    periodic forms omit them: "(3)" or "[(1)]".
    """
    plus = _PLUS_RE.match(text)
    body, convention = (plus.group("body"), PLUS) if plus else (text, MINUS)
    m = _MINUS_RE.match(body)
    if not m:
        raise ValueError(f"not a continued fraction literal: {text!r}")
    return PeriodicCF(convention, _parse_ints(m.group("pre")), _parse_ints(m.group("per")))


def format_cf(cf: PeriodicCF) -> str:
    pre = ",".join(map(str, cf.preperiod))
    per = ",".join(map(str, cf.period))
    body = f"{pre};({per})" if pre else f"({per})"
    return f"[{body}]" if cf.convention == PLUS else body
