"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Every number is stored as ``p + q*sqrt(d)`` with ``p``, ``q`` rational
(:class:`fractions.Fraction`, so arbitrary precision) and ``d`` a square-free
natural number.  ``d = 1`` encodes pure rationals, in which case ``q`` is
normalized to zero.  This is enough to carry out all rationality and sign
tests exactly: no floating point enters this module.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "QField",
    "RationalityWitness",
    "is_rational_ratio",
    "sign",
    "parse_qfield",
    "format_qfield",
]

RationalLike = Union[int, Fraction, "QField"]


def _is_square_free(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


# sqrt(d) to ~50 significant decimal digits, as an exact Fraction.  Used only
# for float conversion; comparisons never touch it.
_SQRT_DIGITS = 50
_sqrt_cache: dict[int, Fraction] = {}


def _sqrt_approx(d: int) -> Fraction:
    if d not in _sqrt_cache:
        scale = 10**_SQRT_DIGITS
        _sqrt_cache[d] = Fraction(math.isqrt(d * scale * scale), scale)
    return _sqrt_cache[d]


@dataclass(frozen=True)
class QField:
    """An element ``p + q*sqrt(d)`` of the real quadratic field Q(sqrt(d)).

    Invariants: fractions are kept in lowest terms with positive denominator
    (Fraction guarantees this), ``d`` is square-free, and ``q == 0`` implies
    ``d == 1``.  Values with different ``d`` mix only when one side is
    rational.
    """

    p: Fraction
    q: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        q = Fraction(self.q)
        d = int(self.d)
        if not _is_square_free(d):
            raise ValueError(f"radicand must be square-free and >= 1, got {d}")
        if d == 1:
            # sqrt(1) = 1: fold the radical part into the rational one.
            p, q = p + q, Fraction(0)
        elif q == 0:
            d = 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, value: int | Fraction | str) -> QField:
        return cls(Fraction(value))

    @classmethod
    def sqrt(cls, d: int) -> QField:
        return cls(Fraction(0), Fraction(1), d)

    # -- structure ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.p

    def conjugate(self) -> QField:
        return QField(self.p, -self.q, self.d)

    def _coerce(self, other: RationalLike) -> QField | None:
        if isinstance(other, QField):
            return other
        if isinstance(other, (int, Fraction)):
            return QField(Fraction(other))
        return None

    def _join_radicand(self, other: QField) -> int:
        if self.d == other.d:
            return self.d
        if self.is_rational:
            return other.d
        if other.is_rational:
            return self.d
        raise ValueError(
            f"incompatible radicands: sqrt({self.d}) vs sqrt({other.d})"
        )

    # -- field arithmetic ----------------------------------------------------

    def __add__(self, other: RationalLike) -> QField:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_radicand(o)
        return QField(self.p + o.p, self.q + o.q, d)

    __radd__ = __add__

    def __neg__(self) -> QField:
        return QField(-self.p, -self.q, self.d)

    def __sub__(self, other: RationalLike) -> QField:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: RationalLike) -> QField:
        return (-self) + other

    def __mul__(self, other: RationalLike) -> QField:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_radicand(o)
        # (p1 + q1 r)(p2 + q2 r) = p1 p2 + q1 q2 d + (p1 q2 + p2 q1) r
        return QField(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike) -> QField:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_radicand(o)
        # Norm p^2 - q^2 d vanishes only at zero: q != 0 would force
        # sqrt(d) = |p/q|, impossible for square-free d > 1.
        norm = o.p * o.p - o.q * o.q * d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        inv = QField(o.p / norm, -o.q / norm, d)
        return self * inv

    def __rtruediv__(self, other: RationalLike) -> QField:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __abs__(self) -> QField:
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return not (self.p == 0 and self.q == 0)

    # -- exact sign and order ------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``p + q*sqrt(d)``: one of -1, 0, +1."""
        p, q, d = self.p, self.q, self.d
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # Opposite signs: |p| vs |q| sqrt(d) decided by p^2 vs q^2 d.
        lhs, rhs = p * p, q * q * d
        if lhs == rhs:  # unreachable for square-free d > 1, kept for safety
            return 0
        bigger_rational = lhs > rhs
        return (1 if bigger_rational else -1) if p > 0 else (-1 if bigger_rational else 1)

    def __lt__(self, other: RationalLike) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other: RationalLike) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other: RationalLike) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other: RationalLike) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QField(Fraction(other))
        if not isinstance(other, QField):
            return NotImplemented
        return self.p == other.p and self.q == other.q and self.d == other.d

    def __hash__(self) -> int:
        # Rational values must hash like the numbers they equal (ints,
        # Fractions) so mixed-type dict keys behave.
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    # -- conversion ----------------------------------------------------------

    def __float__(self) -> float:
        # Exact rational evaluation against a 50-digit sqrt approximation,
        # then one correctly-rounded Fraction -> float conversion (<= 1 ulp).
        if self.q == 0:
            return float(self.p)
        return float(self.p + self.q * _sqrt_approx(self.d))

    def __str__(self) -> str:
        return format_qfield(self)

    def __repr__(self) -> str:
        return f"QField({self.p!r}, {self.q!r}, {self.d})"


@dataclass(frozen=True)
class RationalityWitness:
    """Outcome of an exact rationality test on a ratio x/y.

    When the ratio is rational it equals ``sign * n/m`` with ``n``, ``m``
    coprime naturals and ``m >= 1`` (``n = 0``, ``m = 1`` for a zero ratio).
    """

    is_rational: bool
    n: int | None = None
    m: int | None = None
    sign: int | None = None

    def __post_init__(self) -> None:
        if self.is_rational:
            if self.n is None or self.m is None or self.sign is None:
                raise ValueError("rational witness requires n, m and sign")
            if self.m < 1 or self.n < 0 or math.gcd(self.n, self.m) != 1:
                raise ValueError(f"witness {self.n}/{self.m} not normalized")

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("ratio is irrational")
        return Fraction(self.sign * self.n, self.m)


def is_rational_ratio(x: QField, y: QField) -> RationalityWitness:
    """Exactly decide whether x/y is rational; if so return it in lowest terms."""
    if not y:
        raise ZeroDivisionError("rationality test with zero denominator")
    ratio = x / y
    if not ratio.is_rational:
        return RationalityWitness(is_rational=False)
    value = ratio.p
    s = (value > 0) - (value < 0)
    return RationalityWitness(
        is_rational=True,
        n=abs(value.numerator),
        m=value.denominator,
        sign=s,
    )


def sign(x: QField) -> int:
    return x.sign()


# -- literal syntax ----------------------------------------------------------
#
# Canonical form: "P/Q" for rationals, "P/Q + R/S*sqrt(D)" otherwise (sign of
# the radical part folded into the connecting +/-).  The parser is slightly
# more permissive: integers without denominators, a missing "R/S*" coefficient
# and arbitrary whitespace are accepted.

_RAT = r"\d+(?:\s*/\s*\d+)?"
_FULL_RE = re.compile(
    rf"^\s*([+-]?)\s*({_RAT})"
    rf"(?:\s*([+-])\s*(?:({_RAT})\s*\*\s*)?sqrt\(\s*(\d+)\s*\))?\s*$"
)
_RADICAL_RE = re.compile(
    rf"^\s*([+-]?)\s*(?:({_RAT})\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*$"
)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text.replace(" ", ""))


def parse_qfield(text: str) -> QField:
    """Parse the literal syntax, e.g. ``3/2 - 1/1*sqrt(2)`` or ``7/5``."""
    m = _FULL_RE.match(text)
    if m:
        p_sign, p_txt, q_sign, q_txt, d_txt = m.groups()
        p = _parse_fraction(p_txt)
        if p_sign == "-":
            p = -p
        if d_txt is None:
            return QField(p)
        q = _parse_fraction(q_txt) if q_txt is not None else Fraction(1)
        if q_sign == "-":
            q = -q
        return QField(p, q, int(d_txt))
    m = _RADICAL_RE.match(text)
    if m:
        q_sign, q_txt, d_txt = m.groups()
        q = _parse_fraction(q_txt) if q_txt is not None else Fraction(1)
        if q_sign == "-":
            q = -q
        return QField(Fraction(0), q, int(d_txt))
    raise ValueError(f"malformed exact literal: {text!r}")


def format_qfield(x: QField) -> str:
    """Canonical literal for ``x``; ``parse_qfield`` round-trips it."""
    p_txt = f"{x.p.numerator}/{x.p.denominator}"
    if x.q == 0:
        return p_txt
    connector = "-" if x.q < 0 else "+"
    q = abs(x.q)
    return f"{p_txt} {connector} {q.numerator}/{q.denominator}*sqrt({x.d})"
