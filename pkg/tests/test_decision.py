"""Decision criterion, gap-widening identities, and the three-interval test."""

import random
from fractions import Fraction

import pytest

from pompeiu.decision import (
    Reason,
    classify_conditions,
    decide_two_interval,
    hole_equiv_check,
    hole_transform,
    three_interval_rational_test,
)
from pompeiu.exact_field import QField, is_rational_ratio
from pompeiu.functions import SineAffine
from pompeiu.interval_sets import ThreeIntervalParams, TwoIntervalParams
from pompeiu.verifier import QuadratureConfig, RandomSampler, verify_invariance

ONE = QField(Fraction(1))
TWO = QField(Fraction(2))
SQRT2 = QField.sqrt(2)

CFG = QuadratureConfig(panels_per_unit=8)


def params(ell, H, L) -> TwoIntervalParams:
    return TwoIntervalParams.create(ell, H, L)


class TestClassifyConditions:
    def test_radical_gap_case(self):
        # ell=1, L=H=sqrt2: (L-ell)/(2(L+H)) = (sqrt2-1)/(4 sqrt2) = (2-sqrt2)/8
        report = classify_conditions(params(ONE, SQRT2, SQRT2))
        assert report.h1 is True
        assert report.h2 is None and report.m_parity is None

    def test_rational_lengths(self):
        report = classify_conditions(params(ONE, ONE, TWO))
        assert report.h1 is False

    def test_odd_denominator(self):
        # (L-ell)/(2(L+H)) = 1/(2*(5/2)) = 1/5
        report = classify_conditions(params(SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2))
        assert report.h1 is True
        assert (report.h2.n, report.h2.m) == (1, 5)
        assert report.m_parity == "odd"

    def test_equal_lengths_give_zero_over_one(self):
        report = classify_conditions(params(ONE, ONE, ONE))
        assert (report.h2.n, report.h2.m) == (0, 1)
        assert report.m_parity == "odd"


class TestDecide:
    def test_gap_equals_length_holds(self):
        verdict = decide_two_interval(params(ONE, SQRT2, SQRT2))
        assert verdict.holds and verdict.reason is Reason.HOLDS_NOT_H2
        assert verdict.counterexample is None

    def test_rational_ratio_fails_with_periodic_function(self):
        verdict = decide_two_interval(params(ONE, ONE, TWO), constant=6.0)
        assert not verdict.holds and verdict.reason is Reason.H1_FAILS
        f = verdict.counterexample
        assert isinstance(f, SineAffine)
        assert f.period == 1.0
        # integral over one period must be C/(n1+n2) = 6/3
        assert f.exact_integral(0.0, 1.0) == pytest.approx(2.0, abs=1e-14)

    def test_odd_denominator_fails_with_sine(self):
        verdict = decide_two_interval(
            params(SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2), constant=0.0
        )
        assert not verdict.holds and verdict.reason is Reason.H2_ODD
        assert verdict.counterexample.period == 1.0

    def test_even_denominator_holds(self):
        # 2(L+H) = 2(1+sqrt2+2-sqrt2) = 6 exactly
        verdict = decide_two_interval(params(SQRT2, TWO - SQRT2, ONE + SQRT2))
        assert verdict.holds and verdict.reason is Reason.HOLDS_H2_EVEN
        assert verdict.conditions.h2.m == 6

    def test_verdict_invariant_under_swap_and_scaling(self):
        rng = random.Random(3)
        for _ in range(30):
            trip = [
                QField(Fraction(rng.randint(1, 12), rng.randint(1, 6)))
                + (SQRT2 * rng.randint(0, 2) if rng.random() < 0.5 else QField(Fraction(0)))
                for _ in range(3)
            ]
            ell, H, L = trip
            base = decide_two_interval(params(ell, H, L))
            swapped = decide_two_interval(params(L, H, ell))
            scale = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            scaled = decide_two_interval(params(ell * scale, H * scale, L * scale))
            assert swapped.holds == base.holds == scaled.holds
            assert swapped.reason == base.reason == scaled.reason

    def test_failing_verdicts_verify_numerically(self):
        for p, constant in [
            (params(ONE, ONE, TWO), 3.0),
            (params(SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2), 1.0),
        ]:
            verdict = decide_two_interval(p, constant)
            report = verify_invariance(
                verdict.counterexample,
                p.to_interval_set(),
                "full",
                RandomSampler(100, seed=1),
                CFG,
            )
            assert report.max_abs_deviation < 1e-10
            assert report.c_estimate == pytest.approx(constant, abs=1e-10)


class TestHoleTransform:
    def test_examples(self):
        assert hole_transform(params(ONE, TWO, QField(Fraction(3)))).H == QField(Fraction(10))
        assert hole_transform(params(ONE, ONE, ONE)).H == QField(Fraction(5))
        # 3(3/2 - sqrt2) + (1 + sqrt2) + sqrt2 = 11/2 - sqrt2
        widened = hole_transform(params(SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2))
        assert widened.H == QField(Fraction(11, 2), Fraction(-1), 2)

    def test_preserves_lengths(self):
        p = params(ONE, TWO, QField(Fraction(3)))
        widened = hole_transform(p)
        assert (widened.ell, widened.L) == (p.ell, p.L)


class TestHoleEquivCheck:
    def test_rational_example(self):
        # beta = 2/5, alpha = 2/13 = (2/5)/(3 - 2/5)
        assert hole_equiv_check(params(ONE, TWO, QField(Fraction(3))))

    def test_zero_difference(self):
        assert hole_equiv_check(params(ONE, ONE, ONE))

    def test_radical_case(self):
        assert hole_equiv_check(
            params(SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2)
        )

    def test_always_true_on_random_triples(self):
        rng = random.Random(17)
        for _ in range(60):
            if rng.random() < 0.5:
                trip = [QField(Fraction(rng.randint(1, 30), rng.randint(1, 10))) for _ in range(3)]
            else:
                trip = []
                while len(trip) < 3:
                    v = QField(
                        Fraction(rng.randint(-5, 10), rng.randint(1, 4)),
                        Fraction(rng.randint(-5, 10), rng.randint(1, 4)),
                        2,
                    )
                    if v.sign() > 0:
                        trip.append(v)
            assert hole_equiv_check(TwoIntervalParams.create(*trip))

    def test_rationality_class_survives_widening(self):
        rng = random.Random(23)
        for _ in range(40):
            trip = []
            while len(trip) < 3:
                v = QField(
                    Fraction(rng.randint(-4, 8), rng.randint(1, 3)),
                    Fraction(rng.randint(-4, 8), rng.randint(1, 3)),
                    2,
                )
                if v.sign() > 0:
                    trip.append(v)
            p = TwoIntervalParams.create(*trip)
            widened = hole_transform(p)
            before = is_rational_ratio(p.L - p.ell, p.L + p.H).is_rational
            after = is_rational_ratio(widened.L - widened.ell, widened.L + widened.H).is_rational
            assert before == after


class TestThreeIntervalRationalTest:
    def test_unit_case(self):
        q = ThreeIntervalParams(ONE, ONE, ONE, ONE)
        assert three_interval_rational_test(q) == (ONE, 3, 1)

    def test_radical_cancellation(self):
        q = ThreeIntervalParams(ONE, QField(Fraction(3)), SQRT2, TWO - SQRT2)
        assert three_interval_rational_test(q) == (QField(Fraction(3)), 1, 1)

    def test_irrational_ratio(self):
        q = ThreeIntervalParams(ONE, ONE, ONE, SQRT2)
        assert three_interval_rational_test(q) is None
