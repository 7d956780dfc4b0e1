"""Exact decision of the Pompeiu property for two-interval sets.

The criterion is arithmetic on the two lengths and the gap: writing ell <= L
for the lengths and H for the gap, the property holds under the full isometry
family iff ell/L is irrational and (L-ell)/(2(L+H)) is either irrational or
rational with even reduced denominator.  Every failing case comes with an
explicit counterexample function.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exact_field import QField, RationalityWitness, is_rational_ratio
from .functions import (
    EvaluableFunction,
    construct_periodic_counterexample,
    construct_sine_counterexample,
    function_to_descriptor,
)
from .interval_sets import ThreeIntervalParams, TwoIntervalParams

__all__ = [
    "ConditionReport",
    "Verdict",
    "Reason",
    "classify_conditions",
    "decide_two_interval",
    "hole_transform",
    "hole_equiv_check",
    "three_interval_rational_test",
]


class Reason(str, enum.Enum):
    H1_FAILS = "H1_fails"
    H2_ODD = "H2_odd"
    HOLDS_NOT_H2 = "holds_not_H2"
    HOLDS_H2_EVEN = "holds_H2_even"


@dataclass(frozen=True)
class ConditionReport:
    """Exact classification of the two arithmetic conditions.

    ``h1``: ell/L is irrational.  ``h2``: witness n/m of (L-ell)/(2(L+H))
    when that ratio is rational, else None; ``m_parity`` mirrors m.
    """

    h1: bool
    h2: RationalityWitness | None
    m_parity: str | None

    def to_json_obj(self) -> dict:
        return {
            "H1": self.h1,
            "H2": None if self.h2 is None else {"n": self.h2.n, "m": self.h2.m},
            "m_parity": self.m_parity,
        }


@dataclass(frozen=True)
class Verdict:
    holds: bool
    reason: Reason
    conditions: ConditionReport
    counterexample: EvaluableFunction | None = None

    def __post_init__(self) -> None:
        if self.holds and self.counterexample is not None:
            raise ValueError("a holding verdict must not carry a counterexample")
        if not self.holds and self.counterexample is None:
            raise ValueError("a failing verdict must carry a counterexample")

    def to_json_obj(self) -> dict:
        return {
            "holds": self.holds,
            "reason": self.reason.value,
            "conditions": self.conditions.to_json_obj(),
            "counterexample": None
            if self.counterexample is None
            else function_to_descriptor(self.counterexample),
        }


def classify_conditions(params: TwoIntervalParams) -> ConditionReport:
    """Exact classification; no floating arithmetic on the way."""
    h1 = not is_rational_ratio(params.ell, params.L).is_rational
    witness = is_rational_ratio(params.L - params.ell, (params.L + params.H) * 2)
    if witness.is_rational:
        return ConditionReport(
            h1=h1, h2=witness, m_parity="even" if witness.m % 2 == 0 else "odd"
        )
    return ConditionReport(h1=h1, h2=None, m_parity=None)


def decide_two_interval(params: TwoIntervalParams, constant: float = 0.0) -> Verdict:
    """Decide the property; on failure attach a concrete counterexample whose
    integral over every image of the set equals ``constant``."""
    report = classify_conditions(params)
    if not report.h1:
        return Verdict(
            holds=False,
            reason=Reason.H1_FAILS,
            conditions=report,
            counterexample=construct_periodic_counterexample(params, constant),
        )
    if report.h2 is not None and report.m_parity == "odd":
        return Verdict(
            holds=False,
            reason=Reason.H2_ODD,
            conditions=report,
            counterexample=construct_sine_counterexample(params, constant),
        )
    reason = Reason.HOLDS_NOT_H2 if report.h2 is None else Reason.HOLDS_H2_EVEN
    return Verdict(holds=True, reason=reason, conditions=report)


def hole_transform(params: TwoIntervalParams) -> TwoIntervalParams:
    """Widen the gap to H' = 3H + L + ell; invariance hypotheses survive this."""
    new_gap = params.H * 3 + params.L + params.ell
    return TwoIntervalParams(ell=params.ell, H=new_gap, L=params.L)


def hole_equiv_check(params: TwoIntervalParams) -> bool:
    """Consistency check of the widened-gap transform (true for every valid
    input; a False return flags a bug in the exact arithmetic).

    Verifies that beta = (L-ell)/(L+H) and alpha = (L-ell)/(L+H') share their
    rationality class and satisfy alpha = beta/(3-beta), beta = 3alpha/(1+alpha).
    """
    diff = params.L - params.ell
    widened = hole_transform(params)
    beta = diff / (params.L + params.H)
    alpha = diff / (widened.L + widened.H)
    same_class = beta.is_rational == alpha.is_rational
    cross1 = alpha * (QField(Fraction(3)) - beta) == beta
    cross2 = beta * (QField(Fraction(1)) + alpha) == alpha * 3
    return same_class and cross1 and cross2


def three_interval_rational_test(
    params: ThreeIntervalParams,
) -> tuple[QField, int, int] | None:
    """(s, n1, n2) with ell+L+curly_L = n1*s and H = n2*s, when the ratio of
    total length to gap is rational; None otherwise."""
    return params.rational_structure()
