import math

import pytest

from markovcycles.contfrac import MINUS, PLUS, PeriodicCF, minus_expand, value_of
from markovcycles.exact import QuadSurd
from markovcycles.markov import (
    ROOT_TRIPLE,
    SINGULAR_TRIPLES,
    MarkovTriple,
    conjunction,
    enumerate_nodes,
    enumerate_tree,
    markov_constant,
    markov_constant_reciprocal,
    markov_numbers,
    node_at,
    parse_branch,
    theta_from_triple,
    vieta_children,
)


def triples(pairs):
    return [t.as_tuple() for _, t in pairs]


class TestTriples:
    def test_vieta_children_of_root(self):
        left, right = vieta_children(ROOT_TRIPLE)
        assert left.as_tuple() == (5, 1, 13)
        assert right.as_tuple() == (2, 5, 29)

    def test_vieta_children_deeper(self):
        left, right = vieta_children(MarkovTriple(2, 5, 29))
        assert left.as_tuple() == (29, 5, 433)
        assert right.as_tuple() == (2, 29, 169)

    def test_singular_chain(self):
        assert vieta_children(SINGULAR_TRIPLES[1])[0].as_tuple() == (2, 1, 5)

    def test_invalid_triple_rejected(self):
        with pytest.raises(ValueError):
            MarkovTriple(1, 2, 4)
        with pytest.raises(ValueError):
            MarkovTriple(5, 1, 2)

    def test_markov_equation_holds_everywhere(self):
        for _, t in enumerate_tree(6):
            a, b, m = t.as_tuple()
            assert a * a + b * b + m * m == 3 * a * b * m


class TestTree:
    def test_depth_zero(self):
        assert triples(enumerate_tree(0)) == [(2, 1, 5)]

    def test_depth_one(self):
        assert triples(enumerate_tree(1)) == [(2, 1, 5), (5, 1, 13), (2, 5, 29)]

    def test_depth_two_matches_figure(self):
        got = triples(enumerate_tree(2))
        assert got[3:] == [(13, 1, 34), (5, 13, 194), (29, 5, 433), (2, 29, 169)]

    def test_addresses_bfs_left_first(self):
        addresses = [addr for addr, _ in enumerate_tree(2)]
        assert addresses == ["", "L", "R", "LL", "LR", "RL", "RR"]

    def test_markov_numbers_first_nine(self):
        assert markov_numbers(3)[:9] == [1, 2, 5, 13, 29, 34, 89, 169, 194]
        assert markov_numbers(0) == [1, 2, 5]

    def test_plus_tree_figure(self):
        assert node_at("").plus_period == (2, 2, 1, 1)
        assert node_at("L").plus_period == (2, 2, 1, 1, 1, 1)
        assert node_at("R").plus_period == (2, 2, 2, 2, 1, 1)
        assert node_at("RL").plus_period == (2, 2, 2, 2, 1, 1, 2, 2, 1, 1)
        assert node_at("RR").plus_period == (2, 2, 2, 2, 2, 2, 1, 1)

    def test_minus_tree_figure(self):
        assert node_at("").minus_cf().period == (2, 3, 4)
        assert node_at("L").minus_cf().period == (2, 3, 3, 4)
        assert node_at("R").minus_cf().period == (2, 4, 2, 3, 4)
        assert node_at("LL").minus_cf().period == (2, 3, 3, 3, 4)
        assert node_at("LR").minus_cf().period == (2, 3, 4, 2, 3, 3, 4)
        assert node_at("RL").minus_cf().period == (2, 4, 2, 3, 4, 2, 3, 4)

    def test_all_plus_quotients_are_one_or_two(self):
        for node in enumerate_nodes(5):
            assert set(node.plus_period) <= {1, 2}

    def test_conjunction_consistency(self):
        for node in enumerate_nodes(4):
            left = node.child("L")
            right = node.child("R")
            assert left.plus_period == node.plus_period + node.left_pred_plus
            assert right.plus_period == node.right_pred_plus + node.plus_period


class TestTheta:
    def test_examples(self):
        assert theta_from_triple(MarkovTriple(1, 1, 1)) == QuadSurd(3, 1, 2, 5)
        assert theta_from_triple(MarkovTriple(1, 1, 2)) == QuadSurd(1, 1, 1, 2)
        assert theta_from_triple(ROOT_TRIPLE) == QuadSurd(9, 1, 10, 221)

    def test_k_least_nonnegative(self):
        # 2k = 1 mod 5 -> k = 3 -> theta = (9 + sqrt(221)) / 10
        theta = theta_from_triple(ROOT_TRIPLE)
        assert (theta.p, theta.r, theta.D) == (9, 10, 221)

    def test_tree_theta_same_minus_period(self):
        for node in enumerate_nodes(3):
            expanded = minus_expand(theta_from_triple(node.triple))
            assert expanded.same_period(node.minus_cf())

    def test_theta_equals_tree_value_at_small_depth(self):
        # stronger than Gamma-equivalence at the root: identical value
        assert value_of(node_at("").minus_cf()) == theta_from_triple(ROOT_TRIPLE)


class TestConstants:
    def test_markov_constant_values(self):
        assert markov_constant(1) == pytest.approx(math.sqrt(5))
        assert markov_constant(2) == pytest.approx(math.sqrt(8))
        assert markov_constant(5) == pytest.approx(math.sqrt(221) / 5)

    def test_reciprocals_match_hurwitz_chain(self):
        assert markov_constant_reciprocal(1) == pytest.approx(1 / math.sqrt(5))
        assert markov_constant_reciprocal(2) == pytest.approx(1 / math.sqrt(8))
        assert markov_constant_reciprocal(5) == pytest.approx(5 / math.sqrt(221))

    def test_huge_markov_number(self):
        assert markov_constant(10**400) == 3.0


class TestConjunction:
    def test_concatenation(self):
        a = PeriodicCF(PLUS, (), (1, 1))
        b = PeriodicCF(PLUS, (), (2, 2))
        assert conjunction(a, b).period == (1, 1, 2, 2)
        assert conjunction(b, a).period == (2, 2, 1, 1)

    def test_tree_child(self):
        root = PeriodicCF(PLUS, (), (2, 2, 1, 1))
        golden = PeriodicCF(PLUS, (), (1, 1))
        assert conjunction(root, golden).period == (2, 2, 1, 1, 1, 1)

    def test_needs_pure_plus(self):
        with pytest.raises(ValueError):
            conjunction(PeriodicCF(MINUS, (), (3,)), PeriodicCF(MINUS, (), (3,)))
        with pytest.raises(ValueError):
            conjunction(PeriodicCF(PLUS, (1,), (2,)), PeriodicCF(PLUS, (), (2,)))


class TestBranch:
    def test_leftmost(self):
        branch = parse_branch("e:L")
        assert branch.quadratic(0) == PeriodicCF(MINUS, (2,), (3,))
        assert branch.quadratic(1).period == (2, 3, 4)
        assert branch.quadratic(2).period == (2, 3, 3, 4)
        assert branch.quadratic(3).period == (2, 3, 3, 3, 4)
        assert branch.is_leftmost and branch.r == 1

    def test_rightmost(self):
        branch = parse_branch("e:R")
        assert branch.quadratic(0).period == (2, 4)
        assert branch.quadratic(1).period == (2, 3, 4)
        assert branch.quadratic(2).period == (2, 4, 2, 3, 4)
        assert branch.is_rightmost and branch.r == 2

    def test_rightmost_alias_descriptor(self):
        assert parse_branch("R:R") == parse_branch("e:R")

    def test_interior_left_branch(self):
        branch = parse_branch("R:L")
        assert branch.quadratic(0).period == (2, 3, 4)
        assert branch.quadratic(1).period == (2, 4, 2, 3, 4)
        assert branch.quadratic(2).period == (2, 4, 2, 3, 4, 2, 3, 4)
        assert branch.seed_word == (2, 4)
        assert branch.r == 3

    def test_branch_matches_tree_walk(self):
        # descending the tree one same-direction step at a time reproduces
        # the closed form
        for descriptor in ("R:L", "L:R", "RL:L", "LR:R"):
            branch = parse_branch(descriptor)
            address = branch.tip_address
            for n in (1, 2, 3):
                assert branch.value(n) == node_at(address).value()
                address += branch.orientation

    def test_branch_through_interior_node_normalises_tip(self):
        assert parse_branch("RL:L") == parse_branch("R:L")
        assert parse_branch("RLL:L") == parse_branch("R:L")

    def test_fibonacci_branch_numbers(self):
        ms = [node_at("L" * k).markov_number for k in range(5)]
        assert ms == [5, 13, 34, 89, 233]  # odd-indexed Fibonacci numbers

    def test_pell_branch_numbers(self):
        ms = [node_at("R" * k).markov_number for k in range(5)]
        pell = [0, 1]
        while len(pell) < 12:
            pell.append(2 * pell[-1] + pell[-2])
        # odd-indexed Pell numbers P_3, P_5, P_7, ...
        assert ms == [pell[i] for i in range(3, 12, 2)]

    def test_cycle_length_formulas_agree(self):
        for descriptor in ("e:L", "e:R", "R:L", "L:R", "RL:L"):
            branch = parse_branch(descriptor)
            for n in range(1, 6):
                ell = branch.cycle_length(n)
                assert ell == branch.cycle_length_linear(n)
                assert ell <= branch.cycle_length_bound(n)

    def test_bad_descriptors(self):
        with pytest.raises(ValueError):
            parse_branch("Q:L")
        with pytest.raises(ValueError):
            parse_branch("LR")
        with pytest.raises(ValueError):
            parse_branch("LR:X")
