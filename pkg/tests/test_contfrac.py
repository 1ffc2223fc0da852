from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markovcycles.contfrac import (
    COINCIDE_RATIO,
    MINUS,
    PLUS,
    DegeneratePeriodError,
    PeriodicCF,
    coincide_distance_bound,
    conjugate_cf,
    format_cf,
    minus_expand,
    parse_cf,
    plus_expand,
    plus_to_minus,
    rotate_period,
    value_of,
)
from markovcycles.exact import IDENTITY, QuadSurd, UnimodularMap

GOLDEN = QuadSurd(1, 1, 2, 5)
SILVER = QuadSurd(1, 1, 1, 2)
ROOT5 = QuadSurd(9, 1, 10, 221)


def mcf(pre, per):
    return PeriodicCF(MINUS, tuple(pre), tuple(per))


def pcf(pre, per):
    return PeriodicCF(PLUS, tuple(pre), tuple(per))


class TestExpansion:
    def test_minus_golden(self):
        assert minus_expand(GOLDEN) == mcf([2], [3])

    def test_minus_silver(self):
        assert minus_expand(SILVER) == mcf([3], [2, 4])

    def test_minus_purely_periodic(self):
        assert minus_expand(QuadSurd(3, 1, 2, 5)) == mcf([], [3])

    def test_plus_golden(self):
        assert plus_expand(GOLDEN) == pcf([], [1])

    def test_plus_silver(self):
        assert plus_expand(SILVER) == pcf([], [2])

    def test_plus_markov_root(self):
        assert plus_expand(ROOT5) == pcf([], [2, 2, 1, 1])

    def test_minus_markov_root(self):
        assert minus_expand(ROOT5) == mcf([3], [2, 3, 4])

    def test_rational_rejected(self):
        with pytest.raises(ValueError):
            minus_expand(QuadSurd(7, 0, 3))


class TestValueOf:
    def test_examples(self):
        assert value_of(mcf([2], [3])) == GOLDEN
        assert value_of(mcf([3], [2, 4])) == SILVER
        assert value_of(pcf([], [1])) == GOLDEN

    def test_degenerate_period(self):
        with pytest.raises(DegeneratePeriodError):
            value_of(mcf([5], [2]))

    surd_strategy = st.tuples(
        st.integers(-25, 25),
        st.integers(-9, 9).filter(bool),
        st.integers(1, 9),
        st.sampled_from([2, 3, 5, 13, 21, 221]),
    )

    @given(surd_strategy)
    @settings(max_examples=120, deadline=None)
    def test_roundtrip_minus(self, pqrD):
        w = QuadSurd(*pqrD)
        assert value_of(minus_expand(w)) == w

    @given(surd_strategy)
    @settings(max_examples=120, deadline=None)
    def test_roundtrip_plus(self, pqrD):
        w = QuadSurd(*pqrD)
        assert value_of(plus_expand(w)) == w


class TestConversion:
    @pytest.mark.parametrize(
        "plus, minus",
        [
            (pcf([], [1, 1]), mcf([2], [3])),
            (pcf([], [2, 2]), mcf([3], [2, 4])),
            (pcf([], [2, 2, 1, 1]), mcf([3], [2, 3, 4])),
        ],
    )
    def test_tree_correspondences(self, plus, minus):
        assert plus_to_minus(plus) == minus

    def test_rotated_preperiod_form(self):
        # [2;(2,1,1,2)] is the same stream as [(2,2,1,1)]
        assert plus_to_minus(pcf([2], [2, 1, 1, 2])) == mcf([3], [2, 3, 4])

    def test_wrong_convention_rejected(self):
        with pytest.raises(ValueError):
            plus_to_minus(mcf([2], [3]))

    @given(TestValueOf.surd_strategy)
    @settings(max_examples=100, deadline=None)
    def test_value_preserved(self, pqrD):
        w = QuadSurd(*pqrD)
        cf = plus_expand(w)
        converted = plus_to_minus(cf)
        assert converted.convention == MINUS
        assert value_of(converted) == w


class TestConjugateCF:
    def test_paper_formula(self):
        assert conjugate_cf(mcf([3], [2, 3, 4])) == mcf([1], [3, 2, 4])

    def test_silver(self):
        assert conjugate_cf(mcf([3], [2, 4])) == mcf([1], [2, 4])

    def test_pure_input(self):
        got = conjugate_cf(mcf([], [3]))
        assert got == mcf([0], [3])
        w = value_of(mcf([], [3]))
        assert value_of(got) == -w.conjugate()

    @pytest.mark.parametrize(
        "cf",
        [mcf([3], [2, 3, 4]), mcf([3], [2, 4]), mcf([2], [3]), mcf([], [3, 4, 2])],
    )
    def test_value_is_negated_conjugate(self, cf):
        assert value_of(conjugate_cf(cf)) == -value_of(cf).conjugate()


class TestPeriodicity:
    @pytest.mark.parametrize(
        "w",
        [
            QuadSurd(3, 1, 2, 5),
            QuadSurd(2, 1, 1, 2),
            GOLDEN,
            SILVER,
            ROOT5,
            QuadSurd(-1, 1, 2, 5),
        ],
    )
    def test_property_two_pure_iff_range(self, w):
        cf = minus_expand(w)
        wc = w.conjugate()
        in_range = w > 1 and wc > 0 and wc < 1
        assert cf.is_pure == in_range

    @pytest.mark.parametrize("period", [(3,), (3, 4, 2), (2, 4), (4, 3, 2, 3)])
    def test_property_three_reversal(self, period):
        w = value_of(mcf([], period))
        reversed_value = value_of(mcf([], tuple(reversed(period))))
        assert reversed_value == w.conjugate().reciprocal()

    @pytest.mark.parametrize("k", [0, 1, 2, 5])
    def test_rotations_are_gamma_equivalent(self, k):
        # the conjugating word is the product of the first k expansion steps
        cf = mcf([], [3, 4, 2])
        w = value_of(cf)
        m = IDENTITY
        for digit in cf.first_digits(k):
            m = UnimodularMap(0, 1, -1, digit) @ m  # w -> 1/(digit - w)
        assert m.apply(w) == value_of(rotate_period(cf, k))

    def test_rotate_period(self):
        assert rotate_period(mcf([], [2, 3, 4]), 1) == mcf([], [3, 4, 2])
        assert rotate_period(mcf([], [3]), 7) == mcf([], [3])
        assert rotate_period(mcf([], [2, 4]), 1) == mcf([], [4, 2])
        with pytest.raises(ValueError):
            rotate_period(mcf([2], [3]), 1)


class TestCanonical:
    def test_primitive_period(self):
        assert mcf([], [3, 3]).canonical() == mcf([], [3])

    def test_preperiod_trim(self):
        assert mcf([3, 2, 3], [4, 2, 3]).canonical() == mcf([3], [2, 3, 4])
        assert mcf([3, 2, 3], [3, 4, 2]).canonical() == mcf([3, 2, 3], [3, 4, 2])

    def test_least_rotation(self):
        assert mcf([], [4, 2, 3]).least_rotation() == mcf([], [2, 3, 4])

    def test_same_period(self):
        assert mcf([3], [2, 3, 4]).same_period(mcf([2], [3, 4, 2]))
        assert not mcf([3], [2, 3, 4]).same_period(mcf([3], [2, 4]))

    def test_validation(self):
        with pytest.raises(ValueError):
            PeriodicCF(MINUS, (), (1, 3))
        with pytest.raises(ValueError):
            PeriodicCF(PLUS, (1, 0), (1,))
        with pytest.raises(ValueError):
            PeriodicCF(MINUS, (2,), ())


class TestCoincideBound:
    def test_values(self):
        assert coincide_distance_bound(0) == 10.0
        assert coincide_distance_bound(1) == pytest.approx(3.8196601125, rel=1e-9)
        assert coincide_distance_bound(10) == pytest.approx(6.6147e-4, rel=1e-3)
        assert 0.3819660112 < COINCIDE_RATIO < 0.3819660113

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            coincide_distance_bound(-1)

    def test_bound_on_golden_like_pair(self):
        # (3, 2,3,4,...) vs (3, 2,3,3,...): streams share 3 digits -> r = 2
        u, v = value_of(mcf([3], [2, 3, 4])), value_of(mcf([3], [2, 3, 3, 4]))
        du, dv = u.to_decimal(35), v.to_decimal(35)
        assert abs(du - dv) <= Decimal(10) * Decimal(COINCIDE_RATIO) ** 2


class TestParse:
    @pytest.mark.parametrize(
        "text, cf",
        [
            ("3;(2,3,4)", mcf([3], [2, 3, 4])),
            ("2;(3)", mcf([2], [3])),
            ("(3)", mcf([], [3])),
            ("[2;(2,1,1,2)]", pcf([2], [2, 1, 1, 2])),
            ("[(1)]", pcf([], [1])),
        ],
    )
    def test_parse_and_format(self, text, cf):
        assert parse_cf(text) == cf
        assert parse_cf(format_cf(cf)) == cf

    def test_bad_literal(self):
        with pytest.raises(ValueError):
            parse_cf("3;2,3,4")
        with pytest.raises(ValueError):
            parse_cf("[3;(2,x)]")
