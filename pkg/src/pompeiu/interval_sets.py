"""Finite unions of disjoint compact intervals with exact endpoints.

Interval data lives in one quadratic field Q(sqrt(d)) so that the decision
engine can run exact tests on lengths and gaps; isometries carry floating
translations because only the numerical verifier ever applies them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .exact_field import QField, format_qfield, parse_qfield

__all__ = [
    "IntervalSet",
    "TwoIntervalParams",
    "ThreeIntervalParams",
    "Isometry",
    "normalize_two",
    "apply_isometry",
]

EndpointLike = Union[QField, int, Fraction, str]


def _to_qfield(value: EndpointLike) -> QField:
    if isinstance(value, QField):
        return value
    if isinstance(value, str):
        return parse_qfield(value)
    return QField(Fraction(value))


@dataclass(frozen=True)
class Isometry:
    """Translation by ``translation``, optionally composed with a reflection.

    The reflection acts first, mapping [u, v] to [-v, -u]; the image of a
    point x is ``-x + translation`` when reflected, ``x + translation`` not.
    """

    translation: float = 0.0
    reflected: bool = False


@dataclass(frozen=True)
class IntervalSet:
    """Ordered disjoint union a_1 < b_1 < a_2 < ... < a_N < b_N, N >= 1.

    Endpoints are exact and must all live in one field: touching or
    overlapping intervals are rejected, not merged.
    """

    endpoints: tuple[QField, ...]

    def __post_init__(self) -> None:
        pts = tuple(_to_qfield(e) for e in self.endpoints)
        if len(pts) < 2 or len(pts) % 2 != 0:
            raise ValueError("an interval set needs an even number (>= 2) of endpoints")
        radicands = {e.d for e in pts if e.d != 1}
        if len(radicands) > 1:
            raise ValueError(f"endpoints mix radicands {sorted(radicands)}")
        for left, right in zip(pts, pts[1:]):
            if not (left < right):
                raise ValueError(
                    f"endpoints must strictly increase: {format_qfield(left)} !< "
                    f"{format_qfield(right)}"
                )
        object.__setattr__(self, "endpoints", pts)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[EndpointLike]]) -> IntervalSet:
        flat: list[QField] = []
        for pair in pairs:
            lo, hi = pair
            flat.append(_to_qfield(lo))
            flat.append(_to_qfield(hi))
        return cls(tuple(flat))

    @classmethod
    def from_json(cls, data: Union[str, dict, list]) -> IntervalSet:
        """Accept ``{"field_d": d, "intervals": [[lo, hi], ...]}`` or the bare list."""
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            intervals = data["intervals"]
            declared = int(data.get("field_d", 1))
        else:
            intervals = data
            declared = None
        iset = cls.from_pairs(intervals)
        if declared is not None and declared != 1 and iset.field_d not in (1, declared):
            raise ValueError(
                f"declared field_d={declared} but endpoints live in sqrt({iset.field_d})"
            )
        return iset

    # -- structure -----------------------------------------------------------

    @property
    def n_intervals(self) -> int:
        return len(self.endpoints) // 2

    @property
    def field_d(self) -> int:
        for e in self.endpoints:
            if e.d != 1:
                return e.d
        return 1

    @property
    def pairs(self) -> tuple[tuple[QField, QField], ...]:
        it = iter(self.endpoints)
        return tuple(zip(it, it))

    def lengths(self) -> tuple[QField, ...]:
        return tuple(hi - lo for lo, hi in self.pairs)

    def total_measure(self) -> QField:
        total = QField(Fraction(0))
        for length in self.lengths():
            total = total + length
        return total

    def float_pairs(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in self.pairs]

    def translate(self, delta: EndpointLike) -> IntervalSet:
        d = _to_qfield(delta)
        return IntervalSet(tuple(e + d for e in self.endpoints))

    def reflect(self) -> IntervalSet:
        return IntervalSet(tuple(-e for e in reversed(self.endpoints)))

    def to_json_obj(self) -> dict:
        return {
            "field_d": self.field_d,
            "intervals": [[format_qfield(lo), format_qfield(hi)] for lo, hi in self.pairs],
        }


@dataclass(frozen=True)
class TwoIntervalParams:
    """Lengths (ell, L) of the two intervals and of the gap H between them.

    Normalized so that L >= ell (reflecting the set swaps the lengths, so
    this loses no generality); the set is [0, ell] u [ell+H, ell+H+L].
    """

    ell: QField
    H: QField
    L: QField

    def __post_init__(self) -> None:
        for name, value in (("ell", self.ell), ("H", self.H), ("L", self.L)):
            if value.sign() <= 0:
                raise ValueError(f"{name} must be positive, got {format_qfield(value)}")
        if self.L < self.ell:
            raise ValueError("params must be normalized with L >= ell")

    @classmethod
    def create(cls, ell: QField, H: QField, L: QField) -> TwoIntervalParams:
        if L < ell:
            ell, L = L, ell
        return cls(ell, H, L)

    def to_interval_set(self) -> IntervalSet:
        zero = QField(Fraction(0))
        return IntervalSet(
            (zero, self.ell, self.ell + self.H, self.ell + self.H + self.L)
        )


@dataclass(frozen=True)
class ThreeIntervalParams:
    """Three intervals with lengths ell, L, curly_L separated by two equal gaps H.

    Encodes I = [0, ell] u [ell+H, ell+H+L] u [ell+L+2H, ell+L+curly_L+2H];
    unequal-gap layouts are out of scope.
    """

    ell: QField
    H: QField
    L: QField
    curly_L: QField

    def __post_init__(self) -> None:
        for name, value in (
            ("ell", self.ell),
            ("H", self.H),
            ("L", self.L),
            ("curly_L", self.curly_L),
        ):
            if value.sign() <= 0:
                raise ValueError(f"{name} must be positive, got {format_qfield(value)}")

    @classmethod
    def from_interval_set(cls, iset: IntervalSet) -> ThreeIntervalParams:
        if iset.n_intervals != 3:
            raise ValueError(f"expected 3 intervals, got {iset.n_intervals}")
        (a1, b1), (a2, b2), (a3, b3) = iset.pairs
        gap1 = a2 - b1
        gap2 = a3 - b2
        if gap1 != gap2:
            raise ValueError(
                "three-interval layout requires equal gaps, got "
                f"{format_qfield(gap1)} and {format_qfield(gap2)}"
            )
        return cls(b1 - a1, gap1, b2 - a2, b3 - a3)

    def to_interval_set(self) -> IntervalSet:
        zero = QField(Fraction(0))
        e = self.ell
        h = self.H
        return IntervalSet(
            (
                zero,
                e,
                e + h,
                e + h + self.L,
                e + self.L + h + h,
                e + self.L + self.curly_L + h + h,
            )
        )

    def rational_structure(self) -> tuple[QField, int, int] | None:
        """If (ell+L+curly_L)/H = n1/n2 in lowest terms, return (s, n1, n2)
        with s = H/n2 exact; otherwise None."""
        from .exact_field import is_rational_ratio

        total = self.ell + self.L + self.curly_L
        witness = is_rational_ratio(total, self.H)
        if not witness.is_rational:
            return None
        s = self.H / witness.m
        return s, witness.n, witness.m


def normalize_two(iset: IntervalSet) -> TwoIntervalParams:
    """Translation- and reflection-invariant parameters of a two-interval set."""
    if iset.n_intervals != 2:
        raise ValueError(f"expected 2 intervals, got {iset.n_intervals}")
    (a, b), (c, d) = iset.pairs
    return TwoIntervalParams.create(ell=b - a, H=c - b, L=d - c)


def apply_isometry(iset: IntervalSet, iso: Isometry) -> list[tuple[float, float]]:
    """Image of the set under the isometry, as sorted disjoint float intervals."""
    source = iset.reflect() if iso.reflected else iset
    return [(lo + iso.translation, hi + iso.translation) for lo, hi in source.float_pairs()]
