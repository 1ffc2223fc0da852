import math

import pytest

from markovcycles.contfrac import value_of
from markovcycles.exact import QuadSurd
from markovcycles.geodesic import (
    CycleNotClosedError,
    orientation_sign,
    pell_fundamental,
    rotate_cycle,
    tv_cycle,
)
from markovcycles.markov import enumerate_nodes, parse_branch

GOLDEN = QuadSurd(1, 1, 2, 5)
SILVER = QuadSurd(1, 1, 1, 2)
ROOT = QuadSurd(9, 1, 10, 221)  # (3, overline(2,3,4))


class TestCycleWalk:
    def test_paper_example_word(self):
        cycle = tv_cycle(ROOT)
        assert cycle.word == "TTVVTV"
        assert len(cycle) == 6

    def test_paper_example_elements(self):
        cycle = tv_cycle(ROOT)
        from markovcycles.contfrac import minus_expand

        forms = [minus_expand(e) for e in cycle.elements]
        shapes = [(cf.preperiod, cf.period) for cf in forms]
        assert shapes[0] == ((3,), (2, 3, 4))
        assert shapes[1] == ((2,), (2, 3, 4))
        assert shapes[2] == ((1,), (2, 3, 4))
        assert shapes[3] == ((1,), (3, 4, 2))
        assert shapes[4] == ((2,), (4, 2, 3))
        assert shapes[5] == ((1,), (4, 2, 3))

    def test_golden_cycle(self):
        cycle = tv_cycle(GOLDEN)
        assert cycle.word == "TV"
        assert cycle.trace == 3
        # epsilon = (3 + sqrt(5)) / 2, the eigenvalue of T @ V
        assert cycle.epsilon == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-14)
        assert cycle.length == pytest.approx(2 * math.acosh(1.5), rel=1e-13)
        assert cycle.log_epsilon == pytest.approx(0.9624236501192069, rel=1e-13)

    def test_silver_cycle(self):
        cycle = tv_cycle(SILVER)
        assert cycle.trace == 6
        # epsilon = 3 + 2 sqrt(2) = (1 + sqrt(2))^2
        assert cycle.epsilon == pytest.approx(3 + 2 * math.sqrt(2), rel=1e-14)
        assert cycle.length == pytest.approx(2 * 1.7627471740390861, rel=1e-13)

    def test_automorph_fixes_base_and_is_hyperbolic(self):
        for node in enumerate_nodes(3):
            cycle = tv_cycle(value_of(node.minus_cf()))
            assert cycle.automorph.apply(cycle.base) == cycle.base
            assert cycle.automorph.det == 1
            assert cycle.trace > 2

    def test_trace_is_three_m(self):
        for node in enumerate_nodes(3):
            cycle = tv_cycle(value_of(node.minus_cf()))
            assert cycle.trace == 3 * node.markov_number

    def test_closure_is_exact(self):
        cycle = tv_cycle(ROOT)
        state = cycle.base
        from markovcycles.geodesic import _step

        for letter in cycle.word:
            got, state = _step(state)
            assert got == letter
        assert state == cycle.base

    def test_word_letter_count(self):
        # each '-' partial quotient b of the period contributes b - 1 letters
        for node in enumerate_nodes(3):
            cf = node.minus_cf()
            cycle = tv_cycle(value_of(cf))
            assert len(cycle) == sum(b - 1 for b in cf.period)

    def test_rational_rejected(self):
        with pytest.raises(ValueError):
            tv_cycle(QuadSurd(3, 0, 2))

    def test_transient_input_strict_mode(self):
        # a rotated pure period merges into the cycle without returning
        from markovcycles.contfrac import MINUS, PeriodicCF

        rotated = value_of(PeriodicCF(MINUS, (), (3, 4, 2)))
        with pytest.raises(CycleNotClosedError):
            tv_cycle(rotated)
        cycle = tv_cycle(rotated, allow_transient=True)
        assert cycle.transient > 0
        assert cycle.trace == 15
        assert set(cycle.elements) == set(tv_cycle(ROOT).elements)

    def test_reduced_root_two_closes(self):
        cycle = tv_cycle(QuadSurd(0, 1, 1, 2))  # sqrt(2): word TVVT
        assert cycle.word == "TVVT" and cycle.trace == 6

    def test_non_closing_surd_hits_cap(self):
        # negative inputs drift toward zero under V^-1 and never recur
        with pytest.raises(CycleNotClosedError):
            tv_cycle(QuadSurd(0, -1, 1, 2), max_steps=200)


class TestRotation:
    def test_rotations_share_word_and_unit(self):
        cycle = tv_cycle(ROOT)
        for k in range(1, len(cycle)):
            rot = rotate_cycle(cycle, k)
            assert rot.base == cycle.elements[k]
            assert rot.trace == cycle.trace
            assert rot.word == cycle.word[k:] + cycle.word[:k]
            assert rot.length == pytest.approx(cycle.length, rel=1e-15)

    def test_restart_from_any_element_closes(self):
        cycle = tv_cycle(ROOT)
        for element in cycle.elements:
            again = tv_cycle(element)
            assert set(again.elements) == set(cycle.elements)
            assert again.trace == cycle.trace


class TestPell:
    @pytest.mark.parametrize("D, expected", [(5, (3, 1)), (8, (6, 2)), (221, (15, 1))])
    def test_examples(self, D, expected):
        assert pell_fundamental(D) == expected

    @pytest.mark.parametrize("D", [2, 3, 5, 8, 12, 13, 17, 21, 28, 29, 44, 61, 221, 1021, 2600])
    def test_solution_and_minimality(self, D):
        t, u = pell_fundamental(D)
        assert t > 0 and u > 0 and t * t - D * u * u == 4
        for smaller_u in range(1, min(u, 10_000)):
            val = 4 + D * smaller_u * smaller_u
            assert math.isqrt(val) ** 2 != val

    def test_square_rejected(self):
        with pytest.raises(ValueError):
            pell_fundamental(16)

    def test_unit_consistency_with_cycles(self):
        # trace from the cycle walk vs the CF-of-sqrt(D) route
        for node in enumerate_nodes(3):
            cycle = tv_cycle(value_of(node.minus_cf()))
            t, u = cycle.pell_solution()
            assert (t, u) == pell_fundamental(cycle.base.discriminant)


class TestOrientation:
    def test_examples(self):
        assert orientation_sign(GOLDEN) == 1
        assert orientation_sign(SILVER) == 1
        assert orientation_sign(QuadSurd(1, -1, 2, 5)) == -1


class TestClosedFormLengths:
    def test_leftmost_lengths(self):
        branch = parse_branch("e:L")
        lengths = [branch.cycle_length(n) for n in range(1, 7)]
        assert lengths == [6, 8, 10, 12, 14, 16]

    def test_branch_lengths_match_cycle_walk(self):
        for descriptor in ("e:L", "e:R", "R:L", "L:R"):
            branch = parse_branch(descriptor)
            for n in range(0, 4):
                cycle = tv_cycle(branch.value(n))
                assert len(cycle) == branch.cycle_length(n)
