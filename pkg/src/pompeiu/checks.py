"""Desk-scale verification battery behind the ``demo`` command.

Each check re-derives its expectations with the independent quadrature
oracle; results are deterministic given the seed, so reports can be diffed
byte-for-byte.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .decision import Reason, classify_conditions, decide_two_interval, hole_equiv_check
from .exact_field import QField, format_qfield
from .functions import (
    ConstantFunction,
    ConstructionNotApplicable,
    EvaluableFunction,
    SineAffine,
    construct_recurrence_extension,
    construct_three_interval_counterexample,
    detect_period,
    pointwise_residual,
    sampled_range,
)
from .interval_sets import IntervalSet, ThreeIntervalParams, TwoIntervalParams
from .verifier import (
    GridSampler,
    QuadratureConfig,
    RandomSampler,
    integrate,
    signed_window_integral,
    verify_invariance,
)

__all__ = ["CHECK_NAMES", "run_check", "run_all_checks", "canonical_cases"]

# Light quadrature for check runtime: pieces are sines and piecewise
# quadratics, for which order-8 panels at this density are already exact to
# rounding; the user-facing default config stays denser.
_CFG = QuadratureConfig(panels_per_unit=8)

_ONE = QField(Fraction(1))
_TWO = QField(Fraction(2))
_SQRT2 = QField.sqrt(2)


def canonical_cases() -> dict[str, TwoIntervalParams]:
    """The four canonical parameter triples exercised all over the battery."""
    return {
        "gap_matches_length": TwoIntervalParams.create(_ONE, _SQRT2, _SQRT2),
        "rational_lengths": TwoIntervalParams.create(_ONE, _ONE, _TWO),
        "half_ratio_odd": TwoIntervalParams.create(
            _SQRT2, QField(Fraction(3, 2)) - _SQRT2, _ONE + _SQRT2
        ),
        "half_ratio_even": TwoIntervalParams.create(
            _SQRT2, _TWO - _SQRT2, _ONE + _SQRT2
        ),
    }


def _params_json(p: TwoIntervalParams) -> dict:
    return {
        "ell": format_qfield(p.ell),
        "H": format_qfield(p.H),
        "L": format_qfield(p.L),
    }


# -- individual checks ----------------------------------------------------------


def check_decision_table(seed: int) -> dict:
    """The four canonical cases must be decided exactly as tabulated."""
    expected = {
        "gap_matches_length": (True, Reason.HOLDS_NOT_H2, None),
        "rational_lengths": (False, Reason.H1_FAILS, None),
        "half_ratio_odd": (False, Reason.H2_ODD, 5),
        "half_ratio_even": (True, Reason.HOLDS_H2_EVEN, 6),
    }
    rows = []
    ok = True
    for name, params in canonical_cases().items():
        want_holds, want_reason, want_m = expected[name]
        verdict = decide_two_interval(params, 0.0)
        m = verdict.conditions.h2.m if verdict.conditions.h2 is not None else None
        good = (
            verdict.holds == want_holds
            and verdict.reason == want_reason
            and (want_m is None or m == want_m)
        )
        ok = ok and good
        rows.append(
            {
                "case": name,
                "params": _params_json(params),
                "holds": verdict.holds,
                "reason": verdict.reason.value,
                "conditions": verdict.conditions.to_json_obj(),
                "as_expected": good,
            }
        )
    return {"name": "decision-table", "passed": ok, "details": {"cases": rows}}


def check_recurrence_reproduction(seed: int) -> dict:
    """Recurrence extension on [0,1]u[2,3]: window identity residual at 1000
    points of [-10, 10], flat translation integrals, and non-constancy."""
    iset = IntervalSet.from_pairs([(0, 1), (2, 3)])
    f = construct_recurrence_extension(iset)
    ts = np.linspace(-10.0, 10.0, 1000)
    max_residual = max(abs(pointwise_residual(f, iset, float(t))) for t in ts)
    report = verify_invariance(f, iset, "translations", GridSampler(-10, 10, 401), _CFG)
    value_range = sampled_range(f, (-10.0, 13.0), 1000)
    ok = (
        max_residual <= 1e-9
        and report.max_rel_deviation <= 1e-8
        and value_range > 0.1
        and report.all_converged
    )
    ds = [(float(t), report.rows[i].integral) for i, t in enumerate(np.linspace(-10, 10, 401))]
    return {
        "name": "recurrence-extension",
        "passed": ok,
        "details": {
            "max_pointwise_residual": max_residual,
            "max_rel_deviation": report.max_rel_deviation,
            "c_estimate": report.c_estimate,
            "range_on_window": value_range,
            "translation_integrals": [
                {"t": t, "integral": v} for t, v in ds[:: max(1, len(ds) // 40)]
            ],
        },
    }


def _failing_counterexamples(constant: float = 0.0):
    cases = canonical_cases()
    for name in ("rational_lengths", "half_ratio_odd"):
        params = cases[name]
        verdict = decide_two_interval(params, constant)
        yield name, params, verdict.counterexample


def check_necessity(seed: int) -> dict:
    """Counterexamples emitted for the failing cases must survive 1000 random
    full isometries within 1e-9 and be visibly non-constant."""
    rows = []
    ok = True
    for name, params, f in _failing_counterexamples():
        report = verify_invariance(
            f, params.to_interval_set(), "full", RandomSampler(1000, seed=seed), _CFG
        )
        value_range = sampled_range(f, (0.0, f.period))
        good = report.max_abs_deviation <= 1e-9 and value_range >= 1.9
        ok = ok and good
        rows.append(
            {
                "case": name,
                "function": f.descriptor(),
                "c_estimate": report.c_estimate,
                "max_abs_deviation": report.max_abs_deviation,
                "range_on_period": value_range,
                "as_expected": good,
            }
        )
    return {"name": "necessity-counterexamples", "passed": ok, "details": {"cases": rows}}


def check_sufficiency_negative(seed: int) -> dict:
    """No sine candidate may sneak past the oracle on the holding cases: all
    20 must deviate by at least 1e-3 somewhere."""
    cases = canonical_cases()
    rng = random.Random(seed)
    rows = []
    ok = True
    for name in ("gap_matches_length", "half_ratio_even"):
        params = cases[name]
        iset = params.to_interval_set()
        periods = {
            "ell": float(params.ell),
            "L": float(params.L),
            "L-ell": float(params.L - params.ell),
            "L+ell": float(params.L + params.ell),
            "L+H": float(params.L + params.H),
        }
        for label, period in periods.items():
            for _ in range(2):
                phase = rng.uniform(0.0, 2.0 * math.pi)
                candidate = SineAffine(period=period, phase=phase)
                report = verify_invariance(
                    candidate, iset, "full", RandomSampler(100, seed=rng.randrange(2**31)), _CFG
                )
                good = report.max_abs_deviation >= 1e-3
                ok = ok and good
                rows.append(
                    {
                        "case": name,
                        "period": label,
                        "phase": phase,
                        "max_abs_deviation": report.max_abs_deviation,
                        "rejected": good,
                    }
                )
    return {
        "name": "sufficiency-negative-control",
        "passed": ok,
        "details": {"candidates": rows, "count": len(rows)},
    }


def _random_positive_rational(rng: random.Random) -> QField:
    return QField(Fraction(rng.randint(1, 24), rng.randint(1, 12)))


def _random_positive_sqrt2(rng: random.Random) -> QField:
    while True:
        value = QField(
            Fraction(rng.randint(-6, 12), rng.randint(1, 6)),
            Fraction(rng.randint(-6, 12), rng.randint(1, 6)),
            2,
        )
        if value.sign() > 0:
            return value


def check_hole_identities(seed: int) -> dict:
    """Exact consistency of the widened-gap transform on random triples, plus
    the numerical window chain for the necessity counterexamples."""
    rng = random.Random(seed)
    exact_failures = 0
    for sampler in (_random_positive_rational, _random_positive_sqrt2):
        for _ in range(100):
            params = TwoIntervalParams.create(sampler(rng), sampler(rng), sampler(rng))
            if not hole_equiv_check(params):
                exact_failures += 1
    chain_rows = []
    chain_ok = True
    for name, params, f in _failing_counterexamples():
        ell = float(params.ell)
        gap = 2.0 * float(params.H) + float(params.L)
        worst = 0.0
        for i in range(100):
            x = -10.0 + 20.0 * i / 99.0
            res = signed_window_integral(f, [(ell, +1), (gap, 0), (ell, -1)], x, _CFG)
            worst = max(worst, abs(res.value))
        good = worst <= 1e-8
        chain_ok = chain_ok and good
        chain_rows.append({"case": name, "worst_chain_value": worst, "as_expected": good})
    ok = exact_failures == 0 and chain_ok
    return {
        "name": "lemma-hole",
        "passed": ok,
        "details": {
            "exact_triples_checked": 200,
            "exact_failures": exact_failures,
            "window_chain": chain_rows,
        },
    }


def check_three_interval(seed: int) -> dict:
    """Equal-gap three-interval constructions verify under 1000 random full
    isometries; the irrational-ratio layout is refused."""
    layouts = [
        ("unit_lengths", ThreeIntervalParams(_ONE, _ONE, _ONE, _ONE)),
        (
            "radical_cancel",
            ThreeIntervalParams(_ONE, QField(Fraction(3)), _SQRT2, _TWO - _SQRT2),
        ),
    ]
    rows = []
    ok = True
    for name, params in layouts:
        for constant in (0.0, 3.0):
            f = construct_three_interval_counterexample(params, constant)
            report = verify_invariance(
                f, params.to_interval_set(), "full", RandomSampler(1000, seed=seed), _CFG
            )
            good = report.max_abs_deviation <= 1e-9 and abs(report.c_estimate - constant) <= 1e-9
            ok = ok and good
            rows.append(
                {
                    "layout": name,
                    "constant": constant,
                    "function": f.descriptor(),
                    "c_estimate": report.c_estimate,
                    "max_abs_deviation": report.max_abs_deviation,
                    "as_expected": good,
                }
            )
    refused = False
    try:
        construct_three_interval_counterexample(
            ThreeIntervalParams(_ONE, _ONE, _ONE, _SQRT2), 0.0
        )
    except ConstructionNotApplicable:
        refused = True
    ok = ok and refused
    return {
        "name": "three-interval",
        "passed": ok,
        "details": {"constructions": rows, "irrational_ratio_refused": refused},
    }


def check_example_chain(seed: int) -> dict:
    """Three-interval set [0,l]u[2l,3l]u[4l,4l+L] with l=1, L=sqrt(2): naive
    sine candidates fail, while the two derived window identities hold for
    constants to rounding."""
    ell = 1.0
    big = math.sqrt(2.0)
    iset = IntervalSet.from_pairs(
        [(0, 1), (2, 3), (QField(Fraction(4)), QField(Fraction(4)) + _SQRT2)]
    )
    rng = random.Random(seed)
    candidates = []
    ok = True
    for period in (ell, ell / 2.0, big, big / 2.0):
        candidate = SineAffine(period=period, phase=rng.uniform(0, 2 * math.pi))
        report = verify_invariance(
            candidate, iset, "full", RandomSampler(100, seed=rng.randrange(2**31)), _CFG
        )
        good = report.max_abs_deviation >= 1e-3
        ok = ok and good
        candidates.append(
            {
                "period": period,
                "max_abs_deviation": report.max_abs_deviation,
                "rejected": good,
            }
        )

    const = ConstantFunction(1.37)
    c_value = 1.37 * (2.0 * ell + big)  # integral of the constant over the set
    worst_long = 0.0  # sum of the two 5-block windows minus the full span
    worst_short = 0.0  # [L+, 5l, L-; x]
    for i in range(50):
        x = -5.0 + 10.0 * i / 49.0
        five_a = signed_window_integral(
            const,
            [(ell, +1), (ell, 0), (ell, +1), (ell, 0), (big, +1)],
            x + big,
            _CFG,
        )
        five_b = signed_window_integral(
            const,
            [(big, +1), (ell, 0), (ell, +1), (ell, 0), (ell, +1)],
            x,
            _CFG,
        )
        span = integrate(const, (x, x + 4.0 * ell + 2.0 * big), _CFG)
        worst_long = max(worst_long, abs(five_a.value + five_b.value - span.value))
        short = signed_window_integral(
            const, [(big, +1), (5.0 * ell, 0), (big, -1)], x, _CFG
        )
        worst_short = max(worst_short, abs(short.value))
        worst_long = max(worst_long, abs(five_a.value + five_b.value - 2.0 * c_value))
    period_long = detect_period(const, 4.0 * ell + 2.0 * big, (-5.0, 5.0), tol=1e-12)
    period_short = detect_period(const, 5.0 * ell + big, (-5.0, 5.0), tol=1e-12)
    windows_ok = (
        worst_long <= 1e-12
        and worst_short <= 1e-12
        and period_long.is_periodic
        and period_short.is_periodic
    )
    ok = ok and windows_ok
    return {
        "name": "three-interval-example",
        "passed": ok,
        "details": {
            "naive_candidates": candidates,
            "constant_window_residual": worst_long,
            "constant_bracket_residual": worst_short,
            "period_checks": {
                "long_window": period_long.max_deviation,
                "short_window": period_short.max_deviation,
            },
        },
    }


class _Polynomial(EvaluableFunction):
    def __init__(self, coefficients: Sequence[float]):
        self.coefficients = np.asarray(coefficients, dtype=float)  # highest first

    def __call__(self, x: float) -> float:
        return float(np.polyval(self.coefficients, x))

    def evaluate_array(self, xs):
        return np.polyval(self.coefficients, np.asarray(xs, dtype=float))

    def descriptor(self) -> dict:
        return {"variant": "polynomial", "coefficients": list(self.coefficients)}


def check_oracle_calibration(seed: int) -> dict:
    """Quadrature against closed forms: sine antiderivatives and exact
    polynomial integrals over random intervals of length up to 20.

    Polynomial closed-form values reach 1e6, so their gate is relative to the
    magnitude; the sine gate stays absolute at 1e-12.
    """
    rng = random.Random(seed)
    worst = 0.0
    failures = 0
    for _ in range(100):
        lo = rng.uniform(-20.0, 20.0)
        hi = lo + rng.uniform(0.01, 20.0)
        if rng.random() < 0.5:
            f = SineAffine(
                period=rng.uniform(0.5, 8.0),
                mean=rng.uniform(-2, 2),
                amplitude=rng.uniform(0.2, 3.0),
                phase=rng.uniform(0, 2 * math.pi),
            )
            closed = f.exact_integral(lo, hi)
        else:
            coeffs = [rng.uniform(-1, 1) for _ in range(rng.randint(1, 6))]
            f = _Polynomial(coeffs)
            anti = np.polyint(np.asarray(coeffs, dtype=float))
            closed = float(np.polyval(anti, hi) - np.polyval(anti, lo))
        result = integrate(f, (lo, hi), _CFG)
        gate = 1e-12 * max(1.0, abs(closed))
        gap = abs(result.value - closed)
        rel = gap / max(1.0, abs(closed))
        worst = max(worst, rel)
        if gap > gate or not result.converged:
            failures += 1
    return {
        "name": "oracle-calibration",
        "passed": failures == 0,
        "details": {"intervals": 100, "failures": failures, "worst_scaled_error": worst},
    }


_CHECKS: dict[str, Callable[[int], dict]] = {
    "decision-table": check_decision_table,
    "recurrence-extension": check_recurrence_reproduction,
    "necessity-counterexamples": check_necessity,
    "sufficiency-negative-control": check_sufficiency_negative,
    "lemma-hole": check_hole_identities,
    "three-interval": check_three_interval,
    "three-interval-example": check_example_chain,
    "oracle-calibration": check_oracle_calibration,
}

CHECK_NAMES = tuple(_CHECKS)


def run_check(name: str, seed: int = 42) -> dict:
    if name not in _CHECKS:
        raise KeyError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
    return _CHECKS[name](seed)


def run_all_checks(seed: int = 42, only: str | None = None) -> dict:
    names = [only] if only else list(CHECK_NAMES)
    checks = [run_check(name, seed) for name in names]
    return {
        "seed": seed,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
