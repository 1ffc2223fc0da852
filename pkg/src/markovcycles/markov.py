"""Markov triples, their tree, the attached quadratics and branch closed forms.

The tree is rooted at (2, 1, 5); the two singular solutions (1,1,1) and
(1,1,2) stay outside the address scheme and are only surfaced through
`markov_numbers` and the branch predecessors.  Triples are kept ordered:
in (a, b, m) the entry a is the right predecessor's Markov number and b the
left predecessor's, which is what fixes the Gamma-orbit of theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .contfrac import PLUS, PeriodicCF, plus_to_minus, value_of
from .exact import QuadSurd

__all__ = [
    "MarkovTriple",
    "TreeNode",
    "Branch",
    "SINGULAR_TRIPLES",
    "ROOT_TRIPLE",
    "LEFT",
    "RIGHT",
    "vieta_children",
    "enumerate_tree",
    "node_at",
    "markov_numbers",
    "theta_from_triple",
    "markov_constant",
    "markov_constant_reciprocal",
    "conjunction",
    "branch_from_descriptor",
    "parse_branch",
]

LEFT = "L"
RIGHT = "R"


@dataclass(frozen=True)
class MarkovTriple:
    """An ordered positive solution (a, b, m) of a^2+b^2+m^2 = 3abm, m maximal."""

    a: int
    b: int
    m: int

    def __post_init__(self):
        if min(self.a, self.b, self.m) < 1:
            raise ValueError("Markov triples are positive")
        if self.a**2 + self.b**2 + self.m**2 != 3 * self.a * self.b * self.m:
            raise ValueError(f"({self.a},{self.b},{self.m}) is not a Markov triple")
        if self.m < max(self.a, self.b):
            raise ValueError("last coordinate must be maximal")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.m)


SINGULAR_TRIPLES = (MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2))
ROOT_TRIPLE = MarkovTriple(2, 1, 5)

GOLDEN_PLUS = (1, 1)  # '+' period of the leftmost predecessor, m = 1
SILVER_PLUS = (2, 2)  # '+' period of the rightmost predecessor, m = 2


def vieta_children(t: MarkovTriple) -> tuple[MarkovTriple, MarkovTriple]:
    """The two Vieta descendants (m, b, 3bm-a) and (a, m, 3am-b)."""
    a, b, m = t.as_tuple()
    return (
        MarkovTriple(m, b, 3 * b * m - a),
        MarkovTriple(a, m, 3 * a * m - b),
    )


@dataclass(frozen=True)
class TreeNode:
    """A vertex of the regular Markov tree with its '+' CF bookkeeping."""

    address: str  # word over {L, R} from the root
    triple: MarkovTriple
    plus_period: tuple[int, ...]
    left_pred_plus: tuple[int, ...]
    right_pred_plus: tuple[int, ...]

    @property
    def markov_number(self) -> int:
        return self.triple.m

    def plus_cf(self) -> PeriodicCF:
        return PeriodicCF(PLUS, (), self.plus_period)

    def minus_cf(self) -> PeriodicCF:
        return plus_to_minus(self.plus_cf())

    def value(self) -> QuadSurd:
        return value_of(self.plus_cf())

    def child(self, direction: str) -> "TreeNode":
        left_t, right_t = vieta_children(self.triple)
        if direction == LEFT:
            return TreeNode(
                self.address + LEFT,
                left_t,
                self.plus_period + self.left_pred_plus,
                self.left_pred_plus,
                self.plus_period,
            )
        if direction == RIGHT:
            return TreeNode(
                self.address + RIGHT,
                right_t,
                self.right_pred_plus + self.plus_period,
                self.plus_period,
                self.right_pred_plus,
            )
        raise ValueError(f"direction must be 'L' or 'R', got {direction!r}")


def root_node() -> TreeNode:
    return TreeNode("", ROOT_TRIPLE, SILVER_PLUS + GOLDEN_PLUS, GOLDEN_PLUS, SILVER_PLUS)


def enumerate_tree(depth: int) -> list[tuple[str, MarkovTriple]]:
    """Breadth-first vertices (address, triple) down to the given depth."""
    return [(node.address, node.triple) for node in enumerate_nodes(depth)]


def enumerate_nodes(depth: int) -> list[TreeNode]:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    level = [root_node()]
    out = list(level)
    for _ in range(depth):
        level = [n.child(d) for n in level for d in (LEFT, RIGHT)]
        out.extend(level)
    return out


def node_at(address: str) -> TreeNode:
    node = root_node()
    for step in address:
        node = node.child(step)
    return node


def markov_numbers(depth: int) -> list[int]:
    """Sorted distinct Markov numbers seen down to `depth`, with 1 and 2."""
    values = {1, 2}
    values.update(t.m for _, t in enumerate_tree(depth))
    return sorted(values)


def theta_from_triple(t: MarkovTriple) -> QuadSurd:
    """The quadratic (3m - 2k + sqrt(9 m^2 - 4)) / (2m) with a*k = b (mod m)."""
    a, b, m = t.as_tuple()
    if math.gcd(a, m) != 1:
        raise ValueError("a must be invertible modulo m")
    k = (pow(a, -1, m) * b) % m if m > 1 else 0
    return QuadSurd(3 * m - 2 * k, 1, 2 * m, 9 * m * m - 4)


def markov_constant(m: int) -> float:
    """sqrt(9 - 4/m^2), the spectrum value attached to the Markov number m."""
    if m < 1:
        raise ValueError("Markov numbers are positive")
    msq = m * m
    correction = 0.0 if msq > 10**300 else 4.0 / msq  # avoids float overflow
    return math.sqrt(9.0 - correction)


def markov_constant_reciprocal(m: int) -> float:
    """m / sqrt(9 m^2 - 4): the Hurwitz-style approximation constant."""
    return 1.0 / markov_constant(m)


def conjunction(x: PeriodicCF, y: PeriodicCF) -> PeriodicCF:
    """Concatenate the periods of two purely periodic '+' fractions."""
    if x.convention != PLUS or y.convention != PLUS:
        raise ValueError("conjunction is defined on '+' continued fractions")
    if not (x.is_pure and y.is_pure):
        raise ValueError("conjunction needs purely periodic operands")
    return PeriodicCF(PLUS, (), x.period + y.period)


@dataclass(frozen=True)
class Branch:
    """A zigzag-free descending path, named by its tip and orientation.

    `tip_plus` is the '+' period of the branch tip w_1 and `pred_plus` that
    of the predecessor w_0 (the left predecessor for a left branch, right
    for a right branch).  The n-th vertex follows by repeated conjunction.
    """

    tip_address: str
    orientation: str
    tip_plus: tuple[int, ...]
    pred_plus: tuple[int, ...]

    @property
    def is_leftmost(self) -> bool:
        return self.orientation == LEFT and self.pred_plus == GOLDEN_PLUS

    @property
    def is_rightmost(self) -> bool:
        return self.orientation == RIGHT and self.pred_plus == SILVER_PLUS

    def descriptor(self) -> str:
        return f"{self.tip_address or 'e'}:{self.orientation}"

    def quadratic_plus(self, n: int) -> PeriodicCF:
        if n < 0:
            raise ValueError("branch index must be >= 0")
        if n == 0:
            return PeriodicCF(PLUS, (), self.pred_plus)
        if self.orientation == LEFT:
            word = self.tip_plus + self.pred_plus * (n - 1)
        else:
            word = self.pred_plus * (n - 1) + self.tip_plus
        return PeriodicCF(PLUS, (), word)

    def quadratic(self, n: int) -> PeriodicCF:
        """w_n of the branch as a canonical '-' continued fraction."""
        return plus_to_minus(self.quadratic_plus(n))

    def value(self, n: int) -> QuadSurd:
        return value_of(self.quadratic_plus(n))

    @property
    def pred_minus_period(self) -> tuple[int, ...]:
        """(b_1..b_r): the '-' period of w_0."""
        return self.quadratic(0).period

    @property
    def r(self) -> int:
        """Number of partial quotients in the '-' period of w_0."""
        return len(self.pred_minus_period)

    @property
    def seed_word(self) -> tuple[int, ...]:
        """(a_1..a_s): the '-' period of w_1 with the w_0 block removed."""
        tip_period = self.quadratic(1).period
        b = self.pred_minus_period
        if self.orientation == LEFT and not self.is_leftmost:
            if tip_period[-len(b):] != b:
                raise AssertionError("w_0 period is not a suffix of the tip period")
            return tip_period[: -len(b)]
        return tip_period

    def cycle_length(self, n: int) -> int:
        """ell_n, the T/V word length, computed from the closed-form digits."""
        period = self.quadratic(n).period
        return sum(b - 1 for b in period)

    def cycle_length_linear(self, n: int) -> int:
        """ell_n = n*ell_0 + sum(a_i - 1) (left branches other than the
        leftmost; the other shapes shift the n offset)."""
        ell0 = sum(b - 1 for b in self.pred_minus_period)
        a_sum = sum(a - 1 for a in self.seed_word)
        if self.orientation == RIGHT:
            return (n - 1) * ell0 + a_sum
        if self.is_leftmost:
            return n * ell0 + 4
        return n * ell0 + a_sum

    def cycle_length_bound(self, n: int) -> int:
        """The a-priori bound ell_n <= 3 r (n+1)."""
        return 3 * self.r * (n + 1)


def branch_from_node(address: str, orientation: str) -> Branch:
    """The maximal branch through the vertex at `address` with the given
    orientation; the tip is found by walking up through same-direction steps."""
    if orientation not in (LEFT, RIGHT):
        raise ValueError("orientation must be 'L' or 'R'")
    tip_address = address
    while tip_address and tip_address[-1] == orientation:
        tip_address = tip_address[:-1]
    tip = node_at(tip_address)
    pred = tip.left_pred_plus if orientation == LEFT else tip.right_pred_plus
    return Branch(tip_address, orientation, tip.plus_period, pred)


def parse_branch(descriptor: str) -> Branch:
    """Parse "<path>:<orientation>", path over L/R with 'e' (or empty) as root.

    Examples: "e:L" is the leftmost branch, "R:L" the left branch whose tip
    is the right child of the root.
    """
    try:
        path, orientation = descriptor.split(":")
    except ValueError:
        raise ValueError(f"branch descriptor must look like 'LRL:L', got {descriptor!r}")
    path = path.strip().upper()
    orientation = orientation.strip().upper()
    if path in ("E", "ε"):
        path = ""
    if not all(c in "LR" for c in path):
        raise ValueError(f"branch path may only contain L and R, got {descriptor!r}")
    if orientation not in (LEFT, RIGHT):
        raise ValueError(f"branch orientation must be L or R, got {descriptor!r}")
    return branch_from_node(path, orientation)


branch_from_descriptor = parse_branch


@lru_cache(maxsize=None)
def leftmost_branch() -> Branch:
    return parse_branch("e:L")


@lru_cache(maxsize=None)
def rightmost_branch() -> Branch:
    return parse_branch("e:R")
