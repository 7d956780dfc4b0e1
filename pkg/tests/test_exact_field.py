"""Exact quadratic-field arithmetic: examples plus algebraic properties."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pompeiu.exact_field import (
    QField,
    format_qfield,
    is_rational_ratio,
    parse_qfield,
    sign,
)

ONE = QField(Fraction(1))
SQRT2 = QField.sqrt(2)


def mp_value(x: QField) -> mpmath.mpf:
    """Independent 50-digit evaluation of p + q*sqrt(d)."""
    with mpmath.workdps(50):
        return mpmath.mpf(x.p.numerator) / x.p.denominator + (
            mpmath.mpf(x.q.numerator) / x.q.denominator
        ) * mpmath.sqrt(x.d)


class TestArithmetic:
    def test_cancellation(self):
        assert (ONE + SQRT2) - ONE == SQRT2

    def test_radical_square_is_rational(self):
        prod = SQRT2 * SQRT2
        assert prod == QField(Fraction(2))
        assert prod.d == 1 and prod.is_rational

    def test_conjugate_division(self):
        # (2 - sqrt2) / sqrt2 = -1 + sqrt2, cross-checked at 50 digits
        result = (QField(Fraction(2)) - SQRT2) / SQRT2
        assert result == QField(Fraction(-1), Fraction(1), 2)
        with mpmath.workdps(50):
            expected = (2 - mpmath.sqrt(2)) / mpmath.sqrt(2)
            assert abs(mp_value(result) - expected) < mpmath.mpf("1e-45")

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ONE / QField(Fraction(0))

    def test_incompatible_radicands(self):
        with pytest.raises(ValueError, match="radicand"):
            SQRT2 + QField.sqrt(3)

    def test_rational_operand_mixes_with_any_field(self):
        assert QField.sqrt(3) + 1 == QField(Fraction(1), Fraction(1), 3)

    def test_square_free_validation(self):
        with pytest.raises(ValueError):
            QField(Fraction(0), Fraction(1), 4)
        with pytest.raises(ValueError):
            QField(Fraction(0), Fraction(1), 12)

    def test_d1_folds_radical_into_rational(self):
        assert QField(Fraction(2), Fraction(3), 1) == QField(Fraction(5))


class TestRationalityWitness:
    def test_radical_cancels(self):
        w = is_rational_ratio(SQRT2, SQRT2 * 2)
        assert w.is_rational and (w.n, w.m, w.sign) == (1, 2, 1)

    def test_irrational_ratio(self):
        assert not is_rational_ratio(ONE, SQRT2).is_rational

    def test_nonzero_radical_component_after_normalization(self):
        w = is_rational_ratio(QField(Fraction(2)) - SQRT2, QField(Fraction(4)))
        assert not w.is_rational

    def test_zero_numerator(self):
        w = is_rational_ratio(QField(Fraction(0)), SQRT2)
        assert w.is_rational and (w.n, w.m, w.sign) == (0, 1, 0)

    def test_negative_ratio_sign_carried_separately(self):
        w = is_rational_ratio(-SQRT2, SQRT2 * 2)
        assert w.is_rational and (w.n, w.m, w.sign) == (1, 2, -1)
        assert w.as_fraction() == Fraction(-1, 2)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            is_rational_ratio(ONE, QField(Fraction(0)))


class TestSign:
    def test_examples(self):
        # (3/2)^2 = 9/4 > 2 so 3/2 - sqrt2 > 0; 1 < sqrt2 so 1 - sqrt2 < 0
        assert sign(QField(Fraction(3, 2)) - SQRT2) == 1
        assert sign(ONE - SQRT2) == -1
        assert sign(QField(Fraction(0))) == 0

    def test_both_negative(self):
        assert sign(-ONE - SQRT2) == -1

    def test_comparisons(self):
        assert QField(Fraction(3, 2)) > SQRT2 > ONE
        assert not SQRT2 < SQRT2


class TestLiteralSyntax:
    @pytest.mark.parametrize(
        "text",
        ["3/2 - 1/1*sqrt(2)", "1/1+1/1*sqrt(2)", "7/5", "-2/3", "0/1", "sqrt(5)",
         "-sqrt(2)", "3", "1/2*sqrt(3)"],
    )
    def test_round_trip_idempotent(self, text):
        value = parse_qfield(text)
        printed = format_qfield(value)
        assert parse_qfield(printed) == value
        assert format_qfield(parse_qfield(printed)) == printed

    def test_canonical_example(self):
        assert format_qfield(QField(Fraction(3, 2), Fraction(-1), 2)) == "3/2 - 1/1*sqrt(2)"

    @pytest.mark.parametrize("text", ["", "sqrt(4)", "1//2", "2 + sqrt", "1 + 2"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_qfield(text)

    def test_float_conversion_close_to_mpmath(self):
        value = QField(Fraction(3, 7), Fraction(-22, 13), 5)
        assert float(value) == pytest.approx(float(mp_value(value)), abs=1e-15)


# -- algebraic properties ------------------------------------------------------

fractions_st = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=20
)


def qfields(d: int):
    return st.builds(lambda p, q: QField(p, q, d), fractions_st, fractions_st)


@given(qfields(2), qfields(2), qfields(2))
@settings(max_examples=150)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(qfields(3), qfields(3))
@settings(max_examples=150)
def test_sign_is_multiplicative(x, y):
    assert sign(x * y) == sign(x) * sign(y)
    assert (sign(x) == 0) == (x == QField(Fraction(0)))


@given(qfields(2), qfields(2))
@settings(max_examples=150)
def test_rationality_matches_radical_component_of_quotient(x, y):
    if not y:
        return
    assert is_rational_ratio(x, y).is_rational == ((x / y).q == 0)


@given(qfields(5))
@settings(max_examples=150)
def test_format_parse_round_trip(x):
    assert parse_qfield(format_qfield(x)) == x


@given(qfields(2), qfields(2))
@settings(max_examples=100)
def test_division_inverts_multiplication(x, y):
    if not y:
        return
    assert (x * y) / y == x
