"""Independent numerical oracle for integral-invariance claims.

Nothing here trusts the constructions: integrals run through composite
Gauss-Legendre panels (with an adaptive-Simpson alternative), images of the
interval set are produced by the isometry machinery, and invariance reports
carry mean, worst deviation and the worst witnesses so failures are
actionable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .functions import EvaluableFunction
from .interval_sets import IntervalSet, Isometry, apply_isometry

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "InvarianceReport",
    "SampleIntegral",
    "GridSampler",
    "RandomSampler",
    "integrate",
    "integrate_over_image",
    "verify_invariance",
    "signed_window_integral",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature rule selection and accuracy targets.

    ``max_subdivisions`` bounds panel doublings for the Gauss-Legendre rule
    and bisection depth for adaptive Simpson.
    """

    rule: str = "gauss_legendre"
    order: int = 8
    panels_per_unit: int = 64
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 12

    def __post_init__(self) -> None:
        if self.rule not in ("gauss_legendre", "adaptive_simpson"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.order < 2 or self.panels_per_unit < 1 or self.max_subdivisions < 1:
            raise ValueError("invalid quadrature parameters")


DEFAULT_CONFIG = QuadratureConfig()

_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _gl_cache:
        _gl_cache[order] = np.polynomial.legendre.leggauss(order)
    return _gl_cache[order]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    converged: bool
    sup_abs_f: float
    evaluations: int

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            converged=self.converged and other.converged,
            sup_abs_f=max(self.sup_abs_f, other.sup_abs_f),
            evaluations=self.evaluations + other.evaluations,
        )


_ZERO_RESULT = IntegralResult(0.0, 0.0, True, 0.0, 0)


def _gl_pass(
    f: EvaluableFunction, lo: float, hi: float, panels: int, order: int
) -> tuple[float, float, int]:
    nodes, weights = _gl_nodes(order)
    h = (hi - lo) / panels
    mids = lo + h * (np.arange(panels) + 0.5)
    xs = (mids[:, None] + (h / 2.0) * nodes[None, :]).ravel()
    ys = np.asarray(f.evaluate_array(xs), dtype=float).reshape(panels, order)
    panel_values = (ys @ weights) * (h / 2.0)
    value = math.fsum(panel_values.tolist())
    sup = float(np.max(np.abs(ys)))
    return value, sup, xs.size


def _integrate_gl(
    f: EvaluableFunction, lo: float, hi: float, cfg: QuadratureConfig
) -> IntegralResult:
    base = max(1, math.ceil(cfg.panels_per_unit * (hi - lo)))
    value, sup, evals = _gl_pass(f, lo, hi, base, cfg.order)
    panels = base
    converged = False
    error = math.inf
    for _ in range(cfg.max_subdivisions):
        panels *= 2
        refined, sup2, n2 = _gl_pass(f, lo, hi, panels, cfg.order)
        sup = max(sup, sup2)
        evals += n2
        error = abs(refined - value)
        value = refined
        if error <= max(cfg.abs_tol, cfg.rel_tol * abs(refined)):
            converged = True
            break
    return IntegralResult(value, error, converged, sup, evals)


def _integrate_simpson(
    f: EvaluableFunction, lo: float, hi: float, cfg: QuadratureConfig
) -> IntegralResult:
    stats = {"sup": 0.0, "evals": 0, "converged": True}

    def ev(x: float) -> float:
        y = f(x)
        stats["evals"] += 1
        a = abs(y)
        if a > stats["sup"]:
            stats["sup"] = a
        return y

    def simpson(a: float, fa: float, fm: float, fb: float, b: float) -> float:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(
        a: float, b: float, fa: float, fm: float, fb: float, whole: float,
        eps: float, depth: int,
    ) -> tuple[float, float]:
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = ev(lm), ev(rm)
        left = simpson(a, fa, flm, fm, m)
        right = simpson(m, fm, frm, fb, b)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or depth >= cfg.max_subdivisions:
            if abs(delta) > 15.0 * eps:
                stats["converged"] = False
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(a, m, fa, flm, fm, left, eps / 2.0, depth + 1)
        rv, re = recurse(m, b, fm, frm, fb, right, eps / 2.0, depth + 1)
        return lv + rv, le + re

    fa, fb = ev(lo), ev(hi)
    fm = ev(0.5 * (lo + hi))
    whole = simpson(lo, fa, fm, fb, hi)
    eps = max(cfg.abs_tol, cfg.rel_tol * abs(whole))
    value, error = recurse(lo, hi, fa, fm, fb, whole, eps, 0)
    return IntegralResult(value, error, stats["converged"], stats["sup"], stats["evals"])


def integrate(
    f: EvaluableFunction,
    interval: tuple[float, float],
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> IntegralResult:
    """Integrate f over [u, v] with an error estimate.

    Splits at the function's known kink locations when it advertises them,
    so piecewise-polynomial integrands are handled at full order.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise ValueError(f"interval must satisfy u <= v, got [{lo}, {hi}]")
    if hi == lo:
        return _ZERO_RESULT
    cuts = f.breakpoints_in(lo, hi) or []
    points = [lo, *cuts, hi]
    total = _ZERO_RESULT
    for seg_lo, seg_hi in zip(points, points[1:]):
        if seg_hi <= seg_lo:
            continue
        if cfg.rule == "adaptive_simpson":
            total = total + _integrate_simpson(f, seg_lo, seg_hi, cfg)
        else:
            total = total + _integrate_gl(f, seg_lo, seg_hi, cfg)
    return total


def integrate_over_image(
    f: EvaluableFunction,
    iset: IntervalSet,
    iso: Isometry,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> IntegralResult:
    """Integral of f over the image of the set under the isometry."""
    total = _ZERO_RESULT
    for lo, hi in apply_isometry(iset, iso):
        total = total + integrate(f, (lo, hi), cfg)
    return total


# -- invariance verification ---------------------------------------------------


@dataclass(frozen=True)
class GridSampler:
    """Deterministic translations t0, ..., t1 (n points); with the full family
    every translation is paired with its reflected twin."""

    t0: float
    t1: float
    n: int

    def isometries(self, family: str) -> list[Isometry]:
        if self.n < 2:
            raise ValueError("need at least 2 samples")
        ts = np.linspace(self.t0, self.t1, self.n)
        if family == "translations":
            return [Isometry(float(t)) for t in ts]
        out = []
        for t in ts:
            out.append(Isometry(float(t), reflected=False))
            out.append(Isometry(float(t), reflected=True))
        return out


@dataclass(frozen=True)
class RandomSampler:
    """Seeded uniform translations over [t0, t1]; reflections are drawn with
    probability 1/2 when the full family is requested."""

    n: int
    seed: int = 42
    t0: float = -10.0
    t1: float = 10.0

    def isometries(self, family: str) -> list[Isometry]:
        if self.n < 2:
            raise ValueError("need at least 2 samples")
        rng = random.Random(self.seed)
        out = []
        for _ in range(self.n):
            t = rng.uniform(self.t0, self.t1)
            reflected = family == "full" and rng.random() < 0.5
            out.append(Isometry(t, reflected))
        return out


Sampler = Union[GridSampler, RandomSampler]


@dataclass(frozen=True)
class SampleIntegral:
    translation: float
    reflected: bool
    integral: float
    deviation: float

    def to_json_obj(self) -> dict:
        return {
            "t": self.translation,
            "reflected": self.reflected,
            "integral": self.integral,
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class InvarianceReport:
    """Constancy check of the image integrals over a sampled isometry family."""

    c_estimate: float
    max_abs_deviation: float
    max_rel_deviation: float
    sup_abs_f: float
    n_samples: int
    family: str
    all_converged: bool
    worst: tuple[SampleIntegral, ...]
    rows: tuple[SampleIntegral, ...] = field(repr=False, default=())

    def to_json_obj(self, include_rows: bool = False) -> dict:
        out = {
            "c_estimate": self.c_estimate,
            "max_abs_deviation": self.max_abs_deviation,
            "max_rel_deviation": self.max_rel_deviation,
            "sup_abs_f": self.sup_abs_f,
            "n_samples": self.n_samples,
            "sigma_family": self.family,
            "all_converged": self.all_converged,
            "worst": [w.to_json_obj() for w in self.worst],
        }
        if include_rows:
            out["rows"] = [r.to_json_obj() for r in self.rows]
        return out


def verify_invariance(
    f: EvaluableFunction,
    iset: IntervalSet,
    family: str,
    sampler: Sampler,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> InvarianceReport:
    """Sample isometries, integrate f over each image, and report how far the
    integrals are from constant (absolute, and relative to sup|f| seen)."""
    if family not in ("translations", "full"):
        raise ValueError(f"unknown isometry family {family!r}")
    isometries = sampler.isometries(family)
    results = [integrate_over_image(f, iset, iso, cfg) for iso in isometries]
    values = [r.value for r in results]
    c_estimate = math.fsum(values) / len(values)
    sup = max(r.sup_abs_f for r in results)
    rows = tuple(
        SampleIntegral(
            translation=iso.translation,
            reflected=iso.reflected,
            integral=res.value,
            deviation=abs(res.value - c_estimate),
        )
        for iso, res in zip(isometries, results)
    )
    max_abs = max(r.deviation for r in rows)
    scale = sup if sup > 0 else 1.0
    worst = tuple(sorted(rows, key=lambda r: -r.deviation)[:3])
    return InvarianceReport(
        c_estimate=c_estimate,
        max_abs_deviation=max_abs,
        max_rel_deviation=max_abs / scale,
        sup_abs_f=sup,
        n_samples=len(rows),
        family=family,
        all_converged=all(r.converged for r in results),
        worst=worst,
        rows=rows,
    )


def signed_window_integral(
    f: EvaluableFunction,
    pattern: Sequence[tuple[float, int]],
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> IntegralResult:
    """Signed sum of integrals over blocks laid left-to-right from x.

    Each pattern entry is (length, sign) with sign +1 or -1 for an integrated
    block and 0 for a gap.
    """
    cursor = float(x)
    total = _ZERO_RESULT
    for length, sgn in pattern:
        if not length > 0:
            raise ValueError("pattern lengths must be positive")
        if sgn not in (-1, 0, 1):
            raise ValueError("pattern signs must be -1, 0 (gap) or +1")
        if sgn != 0:
            res = integrate(f, (cursor, cursor + length), cfg)
            total = IntegralResult(
                value=total.value + sgn * res.value,
                error_estimate=total.error_estimate + res.error_estimate,
                converged=total.converged and res.converged,
                sup_abs_f=max(total.sup_abs_f, res.sup_abs_f),
                evaluations=total.evaluations + res.evaluations,
            )
        cursor += length
    return total
