"""Pompeiu property on unions of real intervals: exact decision, explicit
counterexample constructions, and independent numerical verification."""

from .exact_field import (
    QField,
    RationalityWitness,
    format_qfield,
    is_rational_ratio,
    parse_qfield,
    sign,
)
from .interval_sets import (
    IntervalSet,
    Isometry,
    ThreeIntervalParams,
    TwoIntervalParams,
    apply_isometry,
    normalize_two,
)
from .decision import (
    ConditionReport,
    Reason,
    Verdict,
    classify_conditions,
    decide_two_interval,
    hole_equiv_check,
    hole_transform,
    three_interval_rational_test,
)
from .functions import (
    ConstantFunction,
    ConstructionNotApplicable,
    EvaluableFunction,
    PeriodicSamples,
    RecurrenceDepthError,
    RecurrenceExtension,
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
from .verifier import (
    GridSampler,
    IntegralResult,
    InvarianceReport,
    QuadratureConfig,
    RandomSampler,
    integrate,
    integrate_over_image,
    signed_window_integral,
    verify_invariance,
)

__version__ = "0.1.0"

__all__ = [
    "QField",
    "RationalityWitness",
    "format_qfield",
    "is_rational_ratio",
    "parse_qfield",
    "sign",
    "IntervalSet",
    "Isometry",
    "ThreeIntervalParams",
    "TwoIntervalParams",
    "apply_isometry",
    "normalize_two",
    "ConditionReport",
    "Reason",
    "Verdict",
    "classify_conditions",
    "decide_two_interval",
    "hole_equiv_check",
    "hole_transform",
    "three_interval_rational_test",
    "ConstantFunction",
    "ConstructionNotApplicable",
    "EvaluableFunction",
    "PeriodicSamples",
    "RecurrenceDepthError",
    "RecurrenceExtension",
    "SeedCompatibilityError",
    "SeedSpec",
    "SineAffine",
    "construct_periodic_counterexample",
    "construct_recurrence_extension",
    "construct_recurrence_extension_n",
    "construct_sine_counterexample",
    "construct_three_interval_counterexample",
    "default_seed",
    "detect_period",
    "function_from_descriptor",
    "function_to_descriptor",
    "pointwise_residual",
    "sampled_range",
    "GridSampler",
    "IntegralResult",
    "InvarianceReport",
    "QuadratureConfig",
    "RandomSampler",
    "integrate",
    "integrate_over_image",
    "signed_window_integral",
    "verify_invariance",
]
