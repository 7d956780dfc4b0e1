"""Constructions: recurrence extensions, sine families, period detection."""

import math
from fractions import Fraction

import numpy as np
import pytest

from pompeiu.exact_field import QField
from pompeiu.functions import (
    ConstantFunction,
    ConstructionNotApplicable,
    PeriodicSamples,
    RecurrenceDepthError,
    SeedCompatibilityError,
    SeedSpec,
    SineAffine,
    construct_periodic_counterexample,
    construct_recurrence_extension,
    construct_recurrence_extension_n,
    construct_sine_counterexample,
    construct_three_interval_counterexample,
    default_seed,
    detect_period,
    function_from_descriptor,
    function_to_descriptor,
    pointwise_residual,
    sampled_range,
)
from pompeiu.interval_sets import IntervalSet, ThreeIntervalParams, TwoIntervalParams

ONE = QField(Fraction(1))
TWO = QField(Fraction(2))
SQRT2 = QField.sqrt(2)

UNIT_SET = IntervalSet.from_pairs([(0, 1), (2, 3)])

# f0(x) = x(3-x) = 3x - x^2 on [0, 3]
HUMP_SEED = SeedSpec(
    coefficients=(QField(Fraction(0)), QField(Fraction(3)), QField(Fraction(-1))),
    constant=QField(Fraction(7, 3)),
)


def poly_integral_oracle(coeffs, lo: Fraction, hi: Fraction) -> Fraction:
    """Independent exact polynomial integration in plain Fractions."""
    total = Fraction(0)
    for k, c in enumerate(coeffs):
        total += Fraction(c) * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
    return total


class TestSeedSpec:
    def test_hump_seed_satisfies_both_constraints(self):
        # oracle: integral of 3x - x^2 over [0,1] and [2,3] is 7/6 each
        piece = poly_integral_oracle([0, 3, -1], Fraction(0), Fraction(1))
        assert piece == Fraction(7, 6)
        assert piece + poly_integral_oracle([0, 3, -1], Fraction(2), Fraction(3)) == Fraction(7, 3)
        HUMP_SEED.validate(UNIT_SET)

    def test_boundary_violation_reported_with_residual(self):
        seed = SeedSpec(coefficients=(QField(Fraction(0)), ONE), constant=QField(Fraction(4)))
        # f0 = x: (0 + 2) - (1 + 3) = -2
        with pytest.raises(SeedCompatibilityError) as info:
            seed.validate(UNIT_SET)
        assert info.value.residual == QField(Fraction(-2))

    def test_integral_mismatch_rejected(self):
        seed = SeedSpec(
            coefficients=HUMP_SEED.coefficients, constant=QField(Fraction(1))
        )
        with pytest.raises(SeedCompatibilityError):
            seed.validate(UNIT_SET)

    def test_default_seed_is_monic_quadratic_meeting_constraints(self):
        for constant in (0.0, 5.5, -2.0):
            seed = default_seed(UNIT_SET, constant)
            assert len(seed.coefficients) == 3
            assert seed.coefficients[-1] == ONE
            seed.validate(UNIT_SET)
            expected = poly_integral_oracle(
                [c.as_fraction() for c in seed.coefficients], Fraction(0), Fraction(1)
            ) + poly_integral_oracle(
                [c.as_fraction() for c in seed.coefficients], Fraction(2), Fraction(3)
            )
            assert expected == Fraction(constant)


class TestRecurrenceExtension:
    def test_reproduces_seed_on_hull(self):
        f = construct_recurrence_extension(UNIT_SET, seed=HUMP_SEED)
        for x in np.linspace(0.0, 3.0, 31):
            assert f(float(x)) == pytest.approx(x * (3 - x), abs=1e-14)

    def test_one_step_left_value(self):
        # window identity at t=-0.5: f(-0.5) = f(0.5) - f(1.5) + f(2.5)
        #                                     = 1.25 - 2.25 + 1.25 = 0.25
        f = construct_recurrence_extension(UNIT_SET, seed=HUMP_SEED)
        assert f(-0.5) == pytest.approx(0.25, abs=1e-14)

    def test_constant_seed_extends_to_constant(self):
        seed = SeedSpec(coefficients=(QField(Fraction(4)),), constant=QField(Fraction(8)))
        f = construct_recurrence_extension(UNIT_SET, seed=seed)
        for x in (-7.3, -0.1, 1.5, 9.8):
            assert f(x) == pytest.approx(4.0, abs=1e-12)

    def test_residual_vanishes_on_rational_set(self):
        f = construct_recurrence_extension(UNIT_SET)
        worst = max(
            abs(pointwise_residual(f, UNIT_SET, float(t)))
            for t in np.linspace(-10, 10, 500)
        )
        assert worst <= 1e-9

    def test_residual_vanishes_on_radical_set(self):
        iset = IntervalSet.from_pairs([(0, SQRT2), (SQRT2 + 1, SQRT2 * 2 + 1)])
        f = construct_recurrence_extension(iset, constant=1.0)
        worst = max(
            abs(pointwise_residual(f, iset, float(t)))
            for t in np.linspace(-5, 5, 200)
        )
        assert worst <= 1e-9

    def test_array_evaluation_matches_scalar(self):
        f = construct_recurrence_extension(UNIT_SET)
        xs = np.linspace(-8, 11, 400)
        values = f.evaluate_array(xs)
        for x, v in zip(xs[::17], values[::17]):
            assert f(float(x)) == pytest.approx(v, rel=1e-12, abs=1e-12)

    def test_depth_cap(self):
        f = construct_recurrence_extension(UNIT_SET, max_depth=3)
        with pytest.raises(RecurrenceDepthError):
            f(-10.0)

    def test_three_intervals_constant_seed(self):
        iset = IntervalSet.from_pairs([(0, 1), (2, 3), (4, 5)])
        seed = SeedSpec(coefficients=(QField(Fraction(2)),), constant=QField(Fraction(6)))
        f = construct_recurrence_extension_n(iset, seed=seed)
        for x in (-4.2, 0.5, 6.7):
            assert f(x) == pytest.approx(2.0, abs=1e-12)

    def test_three_intervals_nonconstant_residual(self):
        iset = IntervalSet.from_pairs([(0, 1), (2, 3), (4, 5)])
        f = construct_recurrence_extension_n(iset, constant=2.0)
        worst = max(
            abs(pointwise_residual(f, iset, float(t)))
            for t in np.linspace(-5, 5, 300)
        )
        assert worst <= 1e-9
        assert sampled_range(f, (-5, 10)) > 0.1

    def test_two_interval_wrapper_rejects_other_sizes(self):
        iset = IntervalSet.from_pairs([(0, 1), (2, 3), (4, 5)])
        with pytest.raises(ValueError, match="2 intervals"):
            construct_recurrence_extension(iset)

    def test_n_version_matches_two_interval_version(self):
        f2 = construct_recurrence_extension(UNIT_SET, seed=HUMP_SEED)
        fn = construct_recurrence_extension_n(UNIT_SET, seed=HUMP_SEED)
        for x in np.linspace(-6, 9, 101):
            assert f2(float(x)) == pytest.approx(fn(float(x)), rel=1e-13, abs=1e-13)

    def test_breakpoints_on_unit_lattice(self):
        f = construct_recurrence_extension(UNIT_SET)
        assert f.breakpoints_in(-2.5, 2.5) == [-2.0, -1.0, 0.0, 1.0, 2.0]


class TestPointwiseResidual:
    def test_constant_function(self):
        assert pointwise_residual(ConstantFunction(3.3), UNIT_SET, 17.2) == 0.0

    def test_unit_period_sine_is_exactly_balanced(self):
        f = SineAffine(period=1.0)
        for t in np.linspace(-3, 3, 50):
            assert abs(pointwise_residual(f, UNIT_SET, float(t))) < 1e-13


class TestSineCounterexample:
    ODD_PARAMS = TwoIntervalParams.create(
        SQRT2, QField(Fraction(3, 2)) - SQRT2, ONE + SQRT2
    )

    def test_basic_period(self):
        f = construct_sine_counterexample(self.ODD_PARAMS, 0.0)
        assert f.period == 1.0 and f.mean == 0.0

    def test_offset(self):
        f = construct_sine_counterexample(self.ODD_PARAMS, 5.0)
        assert f.mean == pytest.approx(5.0 / float(ONE + SQRT2 * 2), abs=1e-15)

    def test_equal_lengths_degenerate_branch(self):
        # ell = L = H = 1: ratio 0/1, m = 1 odd, s = 2(L+H) = 4
        f = construct_sine_counterexample(TwoIntervalParams(ONE, ONE, ONE), 3.0)
        assert f.period == 4.0
        assert f.mean == pytest.approx(1.5)
        assert f(1.0) == pytest.approx(math.sin(math.pi / 2) + 1.5)

    def test_rejects_even_denominator(self):
        holds = TwoIntervalParams.create(SQRT2, TWO - SQRT2, ONE + SQRT2)
        with pytest.raises(ConstructionNotApplicable):
            construct_sine_counterexample(holds, 0.0)


class TestPeriodicCounterexample:
    def test_one_two_lengths(self):
        p = TwoIntervalParams.create(ONE, ONE, TWO)
        f = construct_periodic_counterexample(p, 6.0)
        assert f.period == 1.0
        assert f.exact_integral(0, 1) == pytest.approx(2.0)

    def test_equal_lengths(self):
        f = construct_periodic_counterexample(TwoIntervalParams(ONE, ONE, ONE), 0.0)
        assert f.period == 1.0 and f.mean == 0.0

    def test_half_three_halves(self):
        p = TwoIntervalParams.create(
            QField(Fraction(1, 2)), ONE, QField(Fraction(3, 2))
        )
        f = construct_periodic_counterexample(p, 4.0)
        assert f.period == 0.5
        assert f.mean == pytest.approx(2.0)

    def test_rejects_irrational_ratio(self):
        with pytest.raises(ConstructionNotApplicable):
            construct_periodic_counterexample(
                TwoIntervalParams.create(ONE, ONE, SQRT2), 0.0
            )


class TestThreeIntervalCounterexample:
    def test_unit_layout(self):
        f = construct_three_interval_counterexample(
            ThreeIntervalParams(ONE, ONE, ONE, ONE), 3.0
        )
        assert f.period == 1.0 and f.mean == pytest.approx(1.0)

    def test_radical_layout(self):
        f = construct_three_interval_counterexample(
            ThreeIntervalParams(ONE, QField(Fraction(3)), SQRT2, TWO - SQRT2), 0.0
        )
        assert f.period == 3.0 and f.mean == 0.0

    def test_refusal(self):
        with pytest.raises(ConstructionNotApplicable):
            construct_three_interval_counterexample(
                ThreeIntervalParams(ONE, ONE, ONE, SQRT2), 0.0
            )


class TestDetectPeriod:
    def test_true_period(self):
        result = detect_period(SineAffine(period=1.0), 1.0, (0.0, 2.0), n=64, tol=1e-12)
        assert result.is_periodic and result.max_deviation < 1e-12

    def test_half_period_deviates_by_two(self):
        result = detect_period(SineAffine(period=1.0), 0.5, (0.0, 1.0), n=5, tol=1e-9)
        assert not result.is_periodic
        assert result.max_deviation == pytest.approx(2.0, abs=1e-12)

    def test_constant(self):
        result = detect_period(ConstantFunction(3.0), 0.77, (-4.0, 4.0), tol=1e-12)
        assert result.is_periodic and result.max_deviation == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            detect_period(ConstantFunction(0.0), 1.0, (0.0, 1.0), n=1)
        with pytest.raises(ValueError):
            detect_period(ConstantFunction(0.0), -1.0, (0.0, 1.0))
        with pytest.raises(ValueError):
            detect_period(ConstantFunction(0.0), 1.0, (1.0, 0.0))


class TestPeriodicSamples:
    def test_requires_matching_endpoints(self):
        with pytest.raises(ValueError, match="agree"):
            PeriodicSamples(1.0, [0.0, 1.0, 2.0])

    def test_interpolates_periodically(self):
        xs = np.linspace(0.0, 2.0, 41)
        f = PeriodicSamples(2.0, np.sin(math.pi * xs))
        assert f(0.3) == pytest.approx(math.sin(math.pi * 0.3), abs=1e-4)
        for x in (-3.1, 0.4, 5.9):
            assert f(x) == pytest.approx(f(x + 2.0), abs=1e-12)

    def test_range_of_sine_constructions(self):
        assert sampled_range(SineAffine(period=1.0), (0.0, 1.0)) >= 2.0 - 1e-4


class TestDescriptors:
    @pytest.mark.parametrize(
        "f",
        [
            ConstantFunction(2.5),
            SineAffine(period=3.0, mean=1.2, amplitude=0.7, phase=0.3),
            PeriodicSamples(2.0, np.sin(math.pi * np.linspace(0, 2, 21))),
            construct_recurrence_extension(UNIT_SET, seed=HUMP_SEED),
        ],
        ids=["constant", "sine", "samples", "recurrence"],
    )
    def test_round_trip(self, f):
        clone = function_from_descriptor(function_to_descriptor(f))
        for x in np.linspace(-4.0, 6.0, 37):
            assert clone(float(x)) == pytest.approx(f(float(x)), rel=1e-12, abs=1e-12)

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="variant"):
            function_from_descriptor({"variant": "nope"})
