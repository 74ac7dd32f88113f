"""Exact arithmetic in Q(√3).

Values are ``a + b·√3`` with rational ``a`` and ``b``. Ordering is decided by
sign analysis and squaring, never by floating point; a float interval screen
is provided separately for fast pre-filtering.
"""
from __future__ import annotations

import enum
import math
from collections.abc import Iterator
from fractions import Fraction
from functools import total_ordering
from typing import Any

from pydantic import BaseModel, ConfigDict, model_validator

Rational = Fraction | int | str


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self) -> str:
        return self.name.lower()


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@total_ordering
class QRoot3(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @model_validator(mode="before")
    @classmethod
    def coerce(cls, data: Any) -> Any:
        if isinstance(data, dict):
            return {key: Fraction(data.get(key, 0)) for key in ("a", "b")}
        return data

    @classmethod
    def rational(cls, x: Rational) -> QRoot3:
        return cls(a=x, b=0)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt3"

    def __add__(self, other: QRoot3 | Rational) -> QRoot3:
        other = _lift(other)
        return QRoot3(a=self.a + other.a, b=self.b + other.b)

    def __sub__(self, other: QRoot3 | Rational) -> QRoot3:
        other = _lift(other)
        return QRoot3(a=self.a - other.a, b=self.b - other.b)

    def __neg__(self) -> QRoot3:
        return QRoot3(a=-self.a, b=-self.b)

    def __mul__(self, other: QRoot3 | Rational) -> QRoot3:
        other = _lift(other)
        return QRoot3(
            a=self.a * other.a + 3 * self.b * other.b,
            b=self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __lt__(self, other: QRoot3 | Rational) -> bool:
        return qr3_cmp(self, _lift(other)) is Ordering.LESS

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        return sa * _sign(self.a * self.a - 3 * self.b * self.b)

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(3)


def _lift(x: QRoot3 | Rational) -> QRoot3:
    return x if isinstance(x, QRoot3) else QRoot3.rational(x)


def qr3_cmp(x: QRoot3 | Rational, y: QRoot3 | Rational) -> Ordering:
    return Ordering((_lift(x) - _lift(y)).sign())


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _enclose(x: QRoot3) -> tuple[float, float]:
    """Outward-rounded float interval containing x."""
    s_lo, s_hi = _down(math.sqrt(3)), _up(math.sqrt(3))
    a_lo, a_hi = _down(float(x.a)), _up(float(x.a))
    b_lo, b_hi = _down(float(x.b)), _up(float(x.b))
    products = [b_lo * s_lo, b_lo * s_hi, b_hi * s_lo, b_hi * s_hi]
    return _down(a_lo + _down(min(products))), _up(a_hi + _up(max(products)))


def qr3_screen(x: QRoot3 | Rational, y: QRoot3 | Rational) -> Ordering | None:
    """Float interval screen: a definite ordering, or None when undecided."""
    x_lo, x_hi = _enclose(_lift(x))
    y_lo, y_hi = _enclose(_lift(y))
    if x_hi < y_lo:
        return Ordering.LESS
    if y_hi < x_lo:
        return Ordering.GREATER
    return None


def sqrt3_convergents() -> Iterator[Fraction]:
    """Continued-fraction convergents of √3 = [1; 1, 2, 1, 2, ...]."""
    p_prev, q_prev = 1, 0
    p, q = 1, 1
    yield Fraction(p, q)
    k = 0
    while True:
        term = 1 if k % 2 == 0 else 2
        p, p_prev = term * p + p_prev, p
        q, q_prev = term * q + q_prev, q
        k += 1
        yield Fraction(p, q)


def rational_near(x: QRoot3, tolerance: Fraction) -> Fraction:
    """A rational r with |x - r| < tolerance, verified exactly."""
    if x.b == 0:
        return x.a
    for c in sqrt3_convergents():
        r = x.a + x.b * c
        if qr3_cmp(abs_qr3(x - r), tolerance) is Ordering.LESS:
            return r
    raise AssertionError("unreachable: convergents approach √3")


def abs_qr3(x: QRoot3) -> QRoot3:
    return -x if x.sign() < 0 else x
