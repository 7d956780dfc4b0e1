"""Counterexample functions and the pointwise translation condition.

The central construction extends a seed polynomial on the convex hull of an
interval set to a continuous function on all of R whose translation-window
sums are constant: for every t, sum_i f(a_i + t) = sum_i f(b_i + t).  Sine
constructions cover the cases where the full isometry family is in play.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_field import QField, format_qfield, is_rational_ratio, parse_qfield
from .interval_sets import (
    IntervalSet,
    ThreeIntervalParams,
    TwoIntervalParams,
)

__all__ = [
    "EvaluableFunction",
    "ConstantFunction",
    "SineAffine",
    "PeriodicSamples",
    "RecurrenceExtension",
    "SeedSpec",
    "SeedCompatibilityError",
    "ConstructionNotApplicable",
    "RecurrenceDepthError",
    "default_seed",
    "construct_recurrence_extension",
    "construct_recurrence_extension_n",
    "construct_sine_counterexample",
    "construct_periodic_counterexample",
    "construct_three_interval_counterexample",
    "pointwise_residual",
    "detect_period",
    "PeriodDetection",
    "sampled_range",
    "function_to_descriptor",
    "function_from_descriptor",
]

TWO_PI = 2.0 * math.pi


class ConstructionNotApplicable(Exception):
    """The requested construction's arithmetic precondition does not hold."""


class SeedCompatibilityError(ValueError):
    """Seed violates a compatibility constraint; carries the exact residual."""

    def __init__(self, message: str, residual: QField):
        super().__init__(f"{message} (residual {format_qfield(residual)})")
        self.residual = residual


class RecurrenceDepthError(RuntimeError):
    """Evaluation point needs more recurrence levels than the configured cap."""


class EvaluableFunction:
    """A real function of one real variable supporting point evaluation."""

    def __call__(self, x: float) -> float:
        raise NotImplementedError

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self(float(x)) for x in np.asarray(xs, dtype=float).ravel()])

    def breakpoints_in(self, lo: float, hi: float) -> list[float] | None:
        """Interior points where smoothness may fail; None when unknown/none."""
        return None

    def descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantFunction(EvaluableFunction):
    value: float

    def __call__(self, x: float) -> float:
        return self.value

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        return np.full(np.shape(xs), self.value, dtype=float)

    def descriptor(self) -> dict:
        return {"variant": "constant", "value": self.value}


@dataclass(frozen=True)
class SineAffine(EvaluableFunction):
    """f(x) = amplitude * sin(2 pi x / period + phase) + mean."""

    period: float
    mean: float = 0.0
    amplitude: float = 1.0
    phase: float = 0.0
    period_exact: QField | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")

    def __call__(self, x: float) -> float:
        return self.amplitude * math.sin(TWO_PI * x / self.period + self.phase) + self.mean

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return self.amplitude * np.sin(TWO_PI * xs / self.period + self.phase) + self.mean

    def exact_integral(self, lo: float, hi: float) -> float:
        """Closed-form integral over [lo, hi] (antiderivative of the sine)."""
        w = TWO_PI / self.period
        osc = -self.amplitude / w * (math.cos(w * hi + self.phase) - math.cos(w * lo + self.phase))
        return osc + self.mean * (hi - lo)

    def descriptor(self) -> dict:
        out = {
            "variant": "sine_affine",
            "period": self.period,
            "mean": self.mean,
            "amplitude": self.amplitude,
            "phase": self.phase,
        }
        if self.period_exact is not None:
            out["period_exact"] = format_qfield(self.period_exact)
        return out


class PeriodicSamples(EvaluableFunction):
    """Periodic function from samples on one period, cyclic cubic interpolation.

    ``samples`` holds values at the nodes linspace(0, period, len(samples)),
    endpoints included; the first and last sample must agree (continuity).
    """

    def __init__(self, period: float, samples: Sequence[float]):
        if not period > 0:
            raise ValueError("period must be positive")
        values = np.asarray(samples, dtype=float)
        if values.size < 3:
            raise ValueError("need at least 3 samples on a period")
        scale = max(1.0, float(np.max(np.abs(values))))
        if abs(values[0] - values[-1]) > 1e-9 * scale:
            raise ValueError("first and last sample must agree for continuity")
        values = values.copy()
        values[-1] = values[0]
        from scipy.interpolate import CubicSpline

        self.period = float(period)
        self.samples = values
        self._spline = CubicSpline(
            np.linspace(0.0, self.period, values.size), values, bc_type="periodic"
        )

    def __call__(self, x: float) -> float:
        return float(self._spline(x % self.period))

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return self._spline(np.mod(xs, self.period))

    def descriptor(self) -> dict:
        return {
            "variant": "periodic_samples",
            "period": self.period,
            "samples": [float(v) for v in self.samples],
        }


# -- seed polynomials ---------------------------------------------------------


@dataclass(frozen=True)
class SeedSpec:
    """Polynomial seed f0 on the hull [a_1, b_N], plus its target integral.

    Compatibility constraints (checked exactly, in the field):
      sum_i f0(a_i) = sum_i f0(b_i)   and   integral of f0 over I = constant.
    """

    coefficients: tuple[QField, ...]  # ascending powers
    constant: QField

    def __post_init__(self) -> None:
        coeffs = tuple(
            c if isinstance(c, QField) else QField(Fraction(c)) for c in self.coefficients
        )
        if not coeffs:
            raise ValueError("seed polynomial needs at least one coefficient")
        constant = (
            self.constant
            if isinstance(self.constant, QField)
            else QField(Fraction(self.constant))
        )
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "constant", constant)

    def value_exact(self, x: QField) -> QField:
        acc = QField(Fraction(0))
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def float_coefficients(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients])

    def integral_exact(self, lo: QField, hi: QField) -> QField:
        acc = QField(Fraction(0))
        # antiderivative term c_k x^(k+1)/(k+1), evaluated hi minus lo
        for k in range(len(self.coefficients) - 1, -1, -1):
            acc = acc * hi + self.coefficients[k] / (k + 1)
        hi_val = acc * hi
        acc = QField(Fraction(0))
        for k in range(len(self.coefficients) - 1, -1, -1):
            acc = acc * lo + self.coefficients[k] / (k + 1)
        lo_val = acc * lo
        return hi_val - lo_val

    def integral_over_set(self, iset: IntervalSet) -> QField:
        total = QField(Fraction(0))
        for lo, hi in iset.pairs:
            total = total + self.integral_exact(lo, hi)
        return total

    def boundary_residual(self, iset: IntervalSet) -> QField:
        total = QField(Fraction(0))
        for lo, hi in iset.pairs:
            total = total + self.value_exact(lo) - self.value_exact(hi)
        return total

    def validate(self, iset: IntervalSet) -> None:
        residual = self.boundary_residual(iset)
        if residual != QField(Fraction(0)):
            raise SeedCompatibilityError(
                "seed breaks the boundary constraint sum f0(a_i) = sum f0(b_i)",
                residual,
            )
        gap = self.integral_over_set(iset) - self.constant
        if gap != QField(Fraction(0)):
            raise SeedCompatibilityError(
                "seed integral over the set does not match the target constant",
                gap,
            )

    def descriptor(self) -> dict:
        return {
            "coefficients": [format_qfield(c) for c in self.coefficients],
            "constant": format_qfield(self.constant),
        }


def default_seed(iset: IntervalSet, constant: QField | float = 0.0) -> SeedSpec:
    """Lowest-degree polynomial satisfying both seed constraints.

    A monic quadratic x^2 + beta x + gamma always works: the boundary
    constraint fixes beta (its gamma-coefficient cancels) and the integral
    target fixes gamma.  It is non-constant by construction.
    """
    if not isinstance(constant, QField):
        constant = QField(Fraction(constant))
    measure = iset.total_measure()
    sq_gap = QField(Fraction(0))
    for lo, hi in iset.pairs:
        sq_gap = sq_gap + hi * hi - lo * lo
    beta = -(sq_gap / measure)
    partial = SeedSpec(
        coefficients=(QField(Fraction(0)), beta, QField(Fraction(1))),
        constant=QField(Fraction(0)),
    )
    missing = constant - partial.integral_over_set(iset)
    gamma = missing / measure
    return SeedSpec(coefficients=(gamma, beta, QField(Fraction(1))), constant=constant)


# -- recurrence extension -------------------------------------------------------


def _fraction_gcd(values: list[Fraction]) -> Fraction:
    denom_lcm = 1
    for v in values:
        denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
    num_gcd = 0
    for v in values:
        num_gcd = math.gcd(num_gcd, abs(v.numerator) * (denom_lcm // v.denominator))
    return Fraction(num_gcd, denom_lcm)


class RecurrenceExtension(EvaluableFunction):
    """Continuous extension of a compatible seed so that translation-window
    sums over the interval set are constant.

    For x below the hull, f(x) is resolved from the window identity at
    t = x - a_1; above the hull, at t = x - b_N.  All recursion offsets live
    on the lattice generated by the endpoint differences, so evaluation
    memoizes on exact lattice coordinates; when the lattice is commensurable
    (rational differences) the expansions of f in terms of seed translates
    are cached per lattice cell and reused across evaluations.

    Caches only memoize deterministic values, so concurrent evaluations see
    identical results; at worst a race recomputes an entry.
    """

    def __init__(self, iset: IntervalSet, seed: SeedSpec, max_depth: int = 64):
        seed.validate(iset)
        self.interval_set = iset
        self.seed = seed
        self.max_depth = int(max_depth)

        pts = iset.endpoints
        self._a1 = pts[0]
        self._bn = pts[-1]
        self._a1_f = float(self._a1)
        self._bn_f = float(self._bn)
        self._left_step_f = float(pts[1] - pts[0])
        self._right_step_f = float(pts[-1] - pts[-2])
        self._poly = self.seed.float_coefficients()[::-1]  # np.polyval order

        # Signed shifts of the two resolution identities, as exact offsets.
        los = [lo for lo, _ in iset.pairs]
        his = [hi for _, hi in iset.pairs]
        self._left_terms: list[tuple[QField, int]] = [(b - self._a1, +1) for b in his] + [
            (a - self._a1, -1) for a in los[1:]
        ]
        self._right_terms: list[tuple[QField, int]] = [(a - self._bn, +1) for a in los] + [
            (b - self._bn, -1) for b in his[:-1]
        ]

        self._lattice = self._commensurable_lattice(pts)
        self._cell_expansions: dict[int, dict[int, int]] = {}
        self.observed_sup = 0.0

    def _commensurable_lattice(self, pts: tuple[QField, ...]):
        diffs = [e - self._a1 for e in pts[1:]]
        if any(not diff.is_rational for diff in diffs):
            return None
        g = _fraction_gcd([diff.as_fraction() for diff in diffs])
        hull_cells = (self._bn - self._a1).as_fraction() / g
        left = [(int((off.as_fraction() / g)), s) for off, s in self._left_terms]
        right = [(int((off.as_fraction() / g)), s) for off, s in self._right_terms]
        return {
            "g": g,
            "g_f": float(g),
            "hull_cells": int(hull_cells),
            "left": left,
            "right": right,
        }

    # -- depth bookkeeping ---------------------------------------------------

    def levels_needed(self, x: float) -> int:
        if x < self._a1_f:
            return int(math.ceil((self._a1_f - x) / self._left_step_f))
        if x > self._bn_f:
            return int(math.ceil((x - self._bn_f) / self._right_step_f))
        return 0

    def _check_depth(self, x: float) -> None:
        needed = self.levels_needed(x)
        if needed > self.max_depth:
            raise RecurrenceDepthError(
                f"evaluating at x={x} needs {needed} recurrence levels "
                f"(cap {self.max_depth})"
            )

    # -- commensurable path: per-cell expansions ------------------------------

    def _expansion(self, cell: int) -> dict[int, int]:
        """f(x) = sum over (m, coeff) of coeff * f0(x + m*g) for x in cell."""
        lat = self._lattice
        hull = lat["hull_cells"]
        if 0 <= cell < hull:
            return {0: 1}
        cache = self._cell_expansions
        if cell in cache:
            return cache[cell]
        # Fill iteratively toward the requested cell.  Dependencies always sit
        # strictly closer to the hull (left shifts are >= 1 cell, right ones
        # <= -1), so a plain sweep from the current frontier suffices.
        if cell < 0:
            frontier = min((k for k in cache if k < 0), default=0)
            order = range(frontier - 1, cell - 1, -1)
            terms = lat["left"]
        else:
            frontier = max((k for k in cache if k >= hull), default=hull - 1)
            order = range(frontier + 1, cell + 1)
            terms = lat["right"]
        for k in order:
            combined: dict[int, int] = {}
            for shift, coeff_sign in terms:
                child_cell = k + shift
                child = {0: 1} if 0 <= child_cell < hull else cache[child_cell]
                for off, coeff in child.items():
                    key = off + shift
                    combined[key] = combined.get(key, 0) + coeff_sign * coeff
            cache[k] = {o: c for o, c in combined.items() if c != 0}
        return cache[cell]

    def _eval_commensurable(self, x: float) -> float:
        lat = self._lattice
        cell = math.floor((x - self._a1_f) / lat["g_f"])
        if 0 <= cell < lat["hull_cells"]:
            return float(np.polyval(self._poly, x))
        exp = self._expansion(cell)
        g_f = lat["g_f"]
        return math.fsum(
            coeff * float(np.polyval(self._poly, x + off * g_f)) for off, coeff in exp.items()
        )

    # -- general path: exact-offset memoization -------------------------------

    def _eval_exact_offsets(self, x: float) -> float:
        memo: dict[QField, float] = {}
        zero = QField(Fraction(0))

        def rec(offset: QField, offset_f: float) -> float:
            got = memo.get(offset)
            if got is not None:
                return got
            y = x + offset_f
            if self._a1_f <= y <= self._bn_f:
                value = float(np.polyval(self._poly, y))
            elif y < self._a1_f:
                value = math.fsum(
                    s * rec(offset + shift, offset_f + float(shift))
                    for shift, s in self._left_terms
                )
            else:
                value = math.fsum(
                    s * rec(offset + shift, offset_f + float(shift))
                    for shift, s in self._right_terms
                )
            memo[offset] = value
            return value

        return rec(zero, 0.0)

    # -- public evaluation -----------------------------------------------------

    def __call__(self, x: float) -> float:
        x = float(x)
        if self._a1_f <= x <= self._bn_f:
            value = float(np.polyval(self._poly, x))
        else:
            self._check_depth(x)
            if self._lattice is not None:
                value = self._eval_commensurable(x)
            else:
                value = self._eval_exact_offsets(x)
        mag = abs(value)
        if mag > self.observed_sup:
            self.observed_sup = mag
        return value

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float).ravel()
        if self._lattice is None:
            return np.array([self(float(x)) for x in xs])
        lat = self._lattice
        g_f = lat["g_f"]
        cells = np.floor((xs - self._a1_f) / g_f).astype(int)
        out = np.empty_like(xs)
        inside = (cells >= 0) & (cells < lat["hull_cells"])
        if np.any(inside):
            out[inside] = np.polyval(self._poly, xs[inside])
        outside_cells = np.unique(cells[~inside])
        if outside_cells.size:
            worst = xs[~inside]
            self._check_depth(float(worst.min()))
            self._check_depth(float(worst.max()))
        for cell in outside_cells:
            mask = cells == cell
            pts = xs[mask]
            acc = np.zeros_like(pts)
            for off, coeff in self._expansion(int(cell)).items():
                acc += coeff * np.polyval(self._poly, pts + off * g_f)
            out[mask] = acc
        sup = float(np.max(np.abs(out))) if out.size else 0.0
        if sup > self.observed_sup:
            self.observed_sup = sup
        return out

    def breakpoints_in(self, lo: float, hi: float) -> list[float] | None:
        if self._lattice is None:
            return None
        g_f = self._lattice["g_f"]
        first = math.ceil((lo - self._a1_f) / g_f)
        last = math.floor((hi - self._a1_f) / g_f)
        if last - first > 16384:
            return None
        pts = [self._a1_f + k * g_f for k in range(first, last + 1)]
        return [p for p in pts if lo < p < hi]

    def descriptor(self) -> dict:
        return {
            "variant": "recurrence_extension",
            "intervals": self.interval_set.to_json_obj(),
            "seed": self.seed.descriptor(),
            "max_depth": self.max_depth,
        }


def construct_recurrence_extension(
    iset: IntervalSet,
    seed: SeedSpec | None = None,
    constant: QField | float = 0.0,
    max_depth: int = 64,
) -> RecurrenceExtension:
    """Extension whose translation-window sum is constant, for two intervals."""
    if iset.n_intervals != 2:
        raise ValueError(f"expected 2 intervals, got {iset.n_intervals}")
    return construct_recurrence_extension_n(iset, seed, constant, max_depth)


def construct_recurrence_extension_n(
    iset: IntervalSet,
    seed: SeedSpec | None = None,
    constant: QField | float = 0.0,
    max_depth: int = 64,
) -> RecurrenceExtension:
    """Same construction for any number of intervals (window sums over all)."""
    if seed is None:
        seed = default_seed(iset, constant)
    return RecurrenceExtension(iset, seed, max_depth=max_depth)


# -- sine constructions --------------------------------------------------------


def construct_sine_counterexample(
    params: TwoIntervalParams, constant: float = 0.0
) -> SineAffine:
    """Non-constant function with constant integral over all isometric images,
    available when (L-ell)/(2(L+H)) = n/m with m odd."""
    witness = is_rational_ratio(params.L - params.ell, (params.L + params.H) * 2)
    if not witness.is_rational or witness.m % 2 == 0:
        raise ConstructionNotApplicable(
            "requires (L-ell)/(2(L+H)) rational with odd reduced denominator"
        )
    s = (params.L + params.H) * 2 / witness.m
    mean = constant / float(params.L + params.ell)
    return SineAffine(period=float(s), mean=mean, period_exact=s)


def construct_periodic_counterexample(
    params: TwoIntervalParams, constant: float = 0.0
) -> SineAffine:
    """Non-constant s-periodic function whose integral over every image of the
    set is ``constant``; available when ell/L is rational (ell = n2 s, L = n1 s)."""
    witness = is_rational_ratio(params.ell, params.L)
    if not witness.is_rational:
        raise ConstructionNotApplicable("requires ell/L rational")
    n2, n1 = witness.n, witness.m
    s = params.ell / n2
    mean = constant / ((n1 + n2) * float(s))
    return SineAffine(period=float(s), mean=mean, period_exact=s)


def construct_three_interval_counterexample(
    params: ThreeIntervalParams, constant: float = 0.0
) -> SineAffine:
    """s-periodic function with integral ``constant`` over every isometric
    image of the equal-gap three-interval set; needs (ell+L+curly_L)/H rational."""
    structure = params.rational_structure()
    if structure is None:
        raise ConstructionNotApplicable("requires (ell+L+curly_L)/H rational")
    s, n1, _ = structure
    mean = constant / (n1 * float(s))
    return SineAffine(period=float(s), mean=mean, period_exact=s)


# -- pointwise checks ------------------------------------------------------------


def pointwise_residual(f: EvaluableFunction, iset: IntervalSet, t: float) -> float:
    """sum_i f(a_i + t) - sum_i f(b_i + t); zero iff the window identity holds at t."""
    los = math.fsum(f(float(lo) + t) for lo, _ in iset.pairs)
    his = math.fsum(f(float(hi) + t) for _, hi in iset.pairs)
    return los - his


@dataclass(frozen=True)
class PeriodDetection:
    is_periodic: bool
    max_deviation: float


def detect_period(
    f: EvaluableFunction,
    tau: float,
    window: tuple[float, float],
    n: int = 256,
    tol: float = 1e-9,
) -> PeriodDetection:
    """Grid check of |f(x + tau) - f(x)| over the window."""
    if n < 2:
        raise ValueError("need at least 2 grid points")
    if not tau > 0:
        raise ValueError("tau must be positive")
    x0, x1 = window
    if not x1 > x0:
        raise ValueError("window must have positive length")
    xs = np.linspace(x0, x1, n)
    deviation = float(np.max(np.abs(f.evaluate_array(xs + tau) - f.evaluate_array(xs))))
    return PeriodDetection(is_periodic=deviation <= tol, max_deviation=deviation)


def sampled_range(f: EvaluableFunction, window: tuple[float, float], n: int = 512) -> float:
    xs = np.linspace(window[0], window[1], n)
    values = f.evaluate_array(xs)
    return float(np.max(values) - np.min(values))


# -- descriptors -----------------------------------------------------------------


def function_to_descriptor(f: EvaluableFunction) -> dict:
    return f.descriptor()


def function_from_descriptor(data: dict) -> EvaluableFunction:
    variant = data.get("variant")
    if variant == "constant":
        return ConstantFunction(float(data["value"]))
    if variant == "sine_affine":
        period_exact = (
            parse_qfield(data["period_exact"]) if "period_exact" in data else None
        )
        return SineAffine(
            period=float(data["period"]),
            mean=float(data.get("mean", 0.0)),
            amplitude=float(data.get("amplitude", 1.0)),
            phase=float(data.get("phase", 0.0)),
            period_exact=period_exact,
        )
    if variant == "periodic_samples":
        return PeriodicSamples(float(data["period"]), data["samples"])
    if variant == "recurrence_extension":
        iset = IntervalSet.from_json(data["intervals"])
        seed_data = data["seed"]
        seed = SeedSpec(
            coefficients=tuple(parse_qfield(c) for c in seed_data["coefficients"]),
            constant=parse_qfield(seed_data["constant"]),
        )
        return RecurrenceExtension(iset, seed, max_depth=int(data.get("max_depth", 64)))
    raise ValueError(f"unknown function variant: {variant!r}")
