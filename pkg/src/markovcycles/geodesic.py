"""The T/V reduction cycle of a quadratic, its automorph, unit and length.

The floor-driven iteration w -> T^-1 w (when floor(w) >= 1) or V^-1 w walks
the quadratic around its cycle using exact arithmetic only; the product of
the inverse letters is the automorph, whose trace gives the fundamental
unit and the geodesic length 2 log(epsilon).  `pell_fundamental` recovers
the same unit from the continued fraction of sqrt(D), independently of the
cycle walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt

import mpmath

from .exact import IDENTITY, QuadSurd, T, UnimodularMap, V

__all__ = [
    "CycleData",
    "CycleNotClosedError",
    "tv_cycle",
    "rotate_cycle",
    "pell_fundamental",
    "orientation_sign",
]

T_INV = T.inverse()
V_INV = V.inverse()

_LETTER = {"T": T, "V": V}


class CycleNotClosedError(RuntimeError):
    """The T/V iteration did not return to its starting state."""


@dataclass(frozen=True)
class CycleData:
    """One closed T/V cycle: word, visited quadratics, automorph and unit."""

    base: QuadSurd
    word: str  # letters of A_i^-1, e.g. "TTVVTV"
    elements: tuple[QuadSurd, ...]
    conjugates: tuple[QuadSurd, ...]
    automorph: UnimodularMap
    transient: int = 0  # steps discarded before entering the closed cycle

    def __post_init__(self):
        if self.automorph.det != 1:
            raise ValueError("automorph must lie in PSL(2, Z)")
        if self.automorph.apply(self.base) != self.base:
            raise ValueError("automorph does not fix the base point")

    def __len__(self) -> int:
        return len(self.word)

    @property
    def trace(self) -> int:
        return self.automorph.trace

    @property
    def log_epsilon(self) -> float:
        """log of the automorph eigenvalue epsilon = (t + sqrt(t^2-4)) / 2.

        Computed from the exact trace with guard digits, so it stays finite
        and accurate when epsilon itself would overflow.
        """
        t = self.trace
        with mpmath.workdps(len(str(t)) + 25):
            return float(mpmath.log((t + mpmath.sqrt(t * t - 4)) / 2))

    @property
    def length(self) -> float:
        """Geodesic length 2 log(epsilon); for the golden cycle this is
        2 arccosh(3/2) = 1.9248..., the shortest closed geodesic."""
        return 2.0 * self.log_epsilon

    @property
    def epsilon(self) -> float:
        """The unit (t + u sqrt(D)) / 2 itself; inf if it exceeds float range."""
        try:
            return math.exp(self.log_epsilon)
        except OverflowError:
            return math.inf

    def pell_solution(self) -> tuple[int, int]:
        """(t, u) with t = trace and t^2 - D u^2 = 4 for the form discriminant."""
        t = self.trace
        disc = self.base.discriminant
        u_sq, rem = divmod(t * t - 4, disc)
        if rem != 0:
            raise ArithmeticError("trace^2 - 4 is not a multiple of the discriminant")
        u = isqrt(u_sq)
        if u * u != u_sq:
            raise ArithmeticError("trace does not correspond to a Pell solution")
        return t, u


def _step(state: QuadSurd) -> tuple[str, QuadSurd]:
    if state.floor() >= 1:
        return "T", T_INV.apply(state)
    return "V", V_INV.apply(state)


def tv_cycle(w: QuadSurd, max_steps: int = 10**6, allow_transient: bool = False) -> CycleData:
    """Walk the floor-driven T/V iteration until the start state recurs.

    With `allow_transient` the walk may first drift onto the closed cycle
    (as rotated continued fractions do) and the returned cycle is based at
    the entry state; otherwise any non-returning input is an error.
    """
    if w.is_rational:
        raise ValueError("rational inputs have no cycle")
    seen: dict[QuadSurd, int] = {}
    letters: list[str] = []
    states: list[QuadSurd] = [w]
    state = w
    for _ in range(max_steps):
        letter, state = _step(state)
        letters.append(letter)
        if state in seen or state == w:
            start = seen.get(state, 0)
            if start != 0 and not allow_transient:
                raise CycleNotClosedError(
                    f"iteration re-entered at step {start}, not at the start; "
                    "the input is not a cycle state"
                )
            word = "".join(letters[start:])
            elements = tuple(states[start:])
            automorph = IDENTITY
            for c in word:
                automorph = automorph @ _LETTER[c]
            return CycleData(
                base=elements[0],
                word=word,
                elements=elements,
                conjugates=tuple(e.conjugate() for e in elements),
                automorph=automorph,
                transient=start,
            )
        seen[state] = len(states)
        states.append(state)
    raise CycleNotClosedError(f"no recurrence within {max_steps} steps")


def rotate_cycle(cycle: CycleData, k: int) -> CycleData:
    """The same closed cycle based at elements[k]."""
    n = len(cycle)
    k %= n
    word = cycle.word[k:] + cycle.word[:k]
    elements = cycle.elements[k:] + cycle.elements[:k]
    automorph = IDENTITY
    for c in word:
        automorph = automorph @ _LETTER[c]
    return CycleData(
        base=elements[0],
        word=word,
        elements=elements,
        conjugates=tuple(e.conjugate() for e in elements),
        automorph=automorph,
        transient=cycle.transient,
    )


def _pell_unit(d: int) -> tuple[tuple[int, int], int]:
    """Fundamental solution of |x^2 - d y^2| = 1 via the CF of sqrt(d).

    Returns ((x, y), norm) where norm is the sign of x^2 - d y^2.
    """
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d must not be a perfect square")
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    big_p, big_q, a = 0, 1, a0
    while True:
        norm = p * p - d * q * q
        if norm in (1, -1):
            return (p, q), norm
        big_p = a * big_q - big_p
        big_q = (d - big_p * big_p) // big_q
        a = (a0 + big_p) // big_q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev


def _integer_cbrt(n: int) -> int:
    if n < 0:
        return -_integer_cbrt(-n)
    x = round(n ** (1 / 3)) if n < 1 << 52 else 1 << (n.bit_length() // 3 + 1)
    while x * x * x > n:
        x = (2 * x + n // (x * x)) // 3
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def pell_fundamental(D: int) -> tuple[int, int]:
    """Least positive (t, u) with t^2 - D u^2 = 4.

    Solved through the '+' continued fraction of sqrt(D) (sqrt(D/4) when D
    is divisible by 4); for D = 1 mod 4 the possible half-integer unit
    (t, u both odd) is recovered by an exact cube-root descent from the
    fundamental unit of Z[sqrt(D)].
    """
    if D <= 0:
        raise ValueError("D must be positive")
    if isqrt(D) ** 2 == D:
        raise ValueError("D must not be a perfect square")
    if D % 4 == 0:
        (x, y), norm = _pell_unit(D // 4)
        if norm == -1:
            x, y = x * x + (D // 4) * y * y, 2 * x * y
        return 2 * x, y
    (x, y), norm = _pell_unit(D)
    if D % 4 == 1:
        # eta^3 = x + y sqrt(D) with eta = (t + u sqrt(D))/2 forces
        # t^3 - 3 norm t = 2 x
        t = _integer_cbrt(2 * x)
        for cand in (t - 1, t, t + 1):
            if cand > 0 and cand**3 - 3 * norm * cand == 2 * x:
                u_sq, rem = divmod(cand * cand - 4 * norm, D)
                if rem == 0:
                    u = isqrt(u_sq)
                    if u * u == u_sq:
                        if norm == 1:
                            return cand, u
                        return cand * cand + 2, cand * u
    if norm == -1:
        x, y = x * x + D * y * y, 2 * x * y
    return 2 * x, 2 * y


def orientation_sign(w: QuadSurd) -> int:
    """Sign of the leading form coefficient: +1 counterclockwise traversal."""
    a, _, _ = w.minimal_form()
    return 1 if a > 0 else -1
