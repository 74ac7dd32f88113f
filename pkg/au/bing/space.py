"""Bing's irrational-slope topology on the rational closed upper half-plane.

A point (a, b) with b ≥ 0 has two feet ``a - b/√3`` and ``a + b/√3`` on the
x-axis (they coincide for axis points). Its basic neighbourhoods are the
point itself together with the rational axis points in small intervals
around both feet. A finitely generated open set is recorded by its axis
trace, an :class:`AxisSystem`; off-axis apexes never affect closures.
"""
from __future__ import annotations

import itertools
import math
import re
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from au.bing.qroot3 import Ordering, QRoot3, qr3_cmp, rational_near, sqrt3_convergents
from au.errors import EmptySystem, MalformedGenerator, VerificationFailure
from au.logger import standard_logger

logger = standard_logger(__name__)

_RATIONAL = r"-?\d+(?:/\d+)?"
_INTERVAL = rf"\(\s*({_RATIONAL})\s*,\s*({_RATIONAL})\s*\)"
_INTERVAL_RE = re.compile(_INTERVAL)
_SYSTEM_RE = re.compile(rf"\[\s*(?:{_INTERVAL}(?:\s*,\s*{_INTERVAL})*)?\s*\]")
_MAX_CONVERGENTS = 256
_SCREEN_SLACK = 1e-9


class BingPoint(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction
    b: Fraction = Fraction(0)

    @model_validator(mode="before")
    @classmethod
    def coerce(cls, data: Any) -> Any:
        if isinstance(data, dict):
            data = {"a": Fraction(data["a"]), "b": Fraction(data.get("b", 0))}
            if data["b"] < 0:
                raise ValueError(f"Points live in the closed upper half-plane. Got b={data['b']}.")
        return data

    def __str__(self) -> str:
        return f"({self.a},{self.b})"

    def feet(self) -> tuple[QRoot3, QRoot3]:
        # b/√3 = (b/3)·√3
        return QRoot3(a=self.a, b=-self.b / 3), QRoot3(a=self.a, b=self.b / 3)


class AxisSystem(BaseModel):
    """A finite union of open rational intervals on the x-axis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def normalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        raw = sorted((Fraction(lo), Fraction(hi)) for lo, hi in data.get("intervals", ()))
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in raw:
            if not lo < hi:
                raise ValueError(f"Interval ({lo},{hi}) needs lo < hi.")
            if merged and lo < merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return {"intervals": tuple(merged)}

    @classmethod
    def of(cls, *intervals: tuple[Any, Any]) -> AxisSystem:
        return cls(intervals=intervals)

    @classmethod
    def parse(cls, text: str) -> AxisSystem:
        body = text.strip()
        if not _SYSTEM_RE.fullmatch(body):
            raise MalformedGenerator(f"Expected `[(lo,hi),...]`. Got {text!r}.")
        pairs = _INTERVAL_RE.findall(body)
        try:
            return cls(intervals=[(Fraction(lo), Fraction(hi)) for lo, hi in pairs])
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedGenerator(f"Bad interval system {text!r}.") from e

    def __str__(self) -> str:
        return "[" + ",".join(f"({lo},{hi})" for lo, hi in self.intervals) + "]"

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def hull(self) -> tuple[Fraction, Fraction]:
        if self.is_empty:
            raise EmptySystem("The empty system has no hull.")
        return self.intervals[0][0], self.intervals[-1][1]

    def midpoint(self) -> BingPoint:
        """A rational axis point inside the system."""
        if self.is_empty:
            raise EmptySystem("The empty system has no points.")
        lo, hi = self.intervals[0]
        return BingPoint(a=(lo + hi) / 2, b=0)

    def union(self, other: AxisSystem) -> AxisSystem:
        return AxisSystem(intervals=self.intervals + other.intervals)


def _in_closed(x: QRoot3, lo: Fraction, hi: Fraction) -> bool:
    return qr3_cmp(lo, x) is not Ordering.GREATER and qr3_cmp(x, hi) is not Ordering.GREATER


def _in_open(x: QRoot3, lo: Fraction, hi: Fraction) -> bool:
    return qr3_cmp(lo, x) is Ordering.LESS and qr3_cmp(x, hi) is Ordering.LESS


def bing_closure_contains(S: AxisSystem, p: BingPoint) -> bool:
    return any(_in_closed(foot, lo, hi) for foot in set(p.feet()) for lo, hi in S.intervals)


def basic_neighbourhood(p: BingPoint, eps: Fraction) -> AxisSystem:
    """Axis trace of a basic neighbourhood: rational intervals of width eps around the feet."""
    eps = Fraction(eps)
    intervals = []
    for foot in set(p.feet()):
        centre = rational_near(foot, eps / 4)
        intervals.append((centre - eps / 2, centre + eps / 2))
    return AxisSystem(intervals=intervals)


def _overlap(i1: tuple[Fraction, Fraction], i2: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction] | None:
    lo, hi = max(i1[0], i2[0]), min(i1[1], i2[1])
    return (lo, hi) if lo < hi else None


def bing_au_witness(S1: AxisSystem, S2: AxisSystem) -> BingPoint:
    """A point in both closures, found by solving for its feet and verified exactly."""
    if S1.is_empty or S2.is_empty:
        raise EmptySystem("Both interval systems must be non-empty.")
    for i1, i2 in itertools.product(S1.intervals, S2.intervals):
        shared = _overlap(i1, i2)
        if shared is not None:
            witness = BingPoint(a=(shared[0] + shared[1]) / 2, b=0)
            return _verified(witness, S1, S2)

    i1, i2 = S1.intervals[0], S2.intervals[0]
    t1, t2 = (i1[0] + i1[1]) / 2, (i2[0] + i2[1]) / 2
    if t1 > t2:
        i1, i2, t1, t2 = i2, i1, t2, t1
    a = (t1 + t2) / 2
    half_gap = (t2 - t1) / 2
    # b ≈ half_gap·√3 so that the feet a ∓ b/√3 land near t1 and t2
    for c in itertools.islice(sqrt3_convergents(), _MAX_CONVERGENTS):
        witness = BingPoint(a=a, b=half_gap * c)
        left, right = witness.feet()
        if _in_open(left, *i1) and _in_open(right, *i2):
            return _verified(witness, S1, S2)
    raise VerificationFailure(f"No witness found for {S1} and {S2}.")


def _verified(witness: BingPoint, S1: AxisSystem, S2: AxisSystem) -> BingPoint:
    if not (bing_closure_contains(S1, witness) and bing_closure_contains(S2, witness)):
        raise VerificationFailure(f"{witness} is not common to {S1} and {S2}.")
    return witness


class TripleCertificate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    systems: tuple[AxisSystem, AxisSystem, AxisSystem]
    pairwise: tuple[BingPoint, ...]
    hulls_disjoint: bool
    pigeonhole: bool
    grid_denominator_bound: int
    grid_hits: tuple[BingPoint, ...]

    @property
    def triple_empty(self) -> bool:
        return self.pigeonhole and not self.grid_hits


EMPTY_TRIPLE_SYSTEMS = (
    AxisSystem.of((Fraction(-1, 2), Fraction(1, 2))),
    AxisSystem.of((Fraction(19, 2), Fraction(21, 2))),
    AxisSystem.of((Fraction(39, 2), Fraction(41, 2))),
)


def hulls_pairwise_disjoint(systems: Sequence[AxisSystem]) -> bool:
    hulls = [S.hull() for S in systems]
    for (lo1, hi1), (lo2, hi2) in itertools.combinations(hulls, 2):
        if not (qr3_cmp(hi1, lo2) is Ordering.LESS or qr3_cmp(hi2, lo1) is Ordering.LESS):
            return False
    return True


def bing_empty_triple(denominator_bound: int = 50) -> TripleCertificate:
    systems = EMPTY_TRIPLE_SYSTEMS
    pairwise = tuple(bing_au_witness(S1, S2) for S1, S2 in itertools.combinations(systems, 2))
    disjoint = hulls_pairwise_disjoint(systems)
    # A point has at most two feet, so it cannot reach three disjoint hulls.
    pigeonhole = disjoint and len(systems) > 2
    hits = tuple(triple_grid_search(systems, denominator_bound))
    logger.info(
        "🔍 Triple search over denominators ≤ %d found %d common points",
        denominator_bound,
        len(hits),
    )
    return TripleCertificate(
        systems=systems,
        pairwise=pairwise,
        hulls_disjoint=disjoint,
        pigeonhole=pigeonhole,
        grid_denominator_bound=denominator_bound,
        grid_hits=hits,
    )


def farey_grid(lo: Fraction, hi: Fraction, denominator_bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced fractions p/q in [lo, hi] with q ≤ bound, as numerator/denominator arrays."""
    numerators, denominators = [], []
    for q in range(1, denominator_bound + 1):
        p = np.arange(math.ceil(lo * q), math.floor(hi * q) + 1, dtype=np.int64)
        p = p[np.gcd(p, q) == 1]
        numerators.append(p)
        denominators.append(np.full(p.shape, q, dtype=np.int64))
    return np.concatenate(numerators), np.concatenate(denominators)


def _screen_mask(feet: list[np.ndarray], S: AxisSystem) -> np.ndarray:
    mask = np.zeros(feet[0].shape, dtype=bool)
    for foot in feet:
        for lo, hi in S.intervals:
            mask |= (foot >= float(lo) - _SCREEN_SLACK) & (foot <= float(hi) + _SCREEN_SLACK)
    return mask


def triple_grid_search(
    systems: Sequence[AxisSystem],
    denominator_bound: int,
    block: int = 256,
) -> list[BingPoint]:
    """Exhaustive search for points in every closure, coordinates with denominators ≤ bound.

    Any common point has its feet inside the overall hull, which bounds both
    coordinates. A float screen proposes candidates; each one is confirmed
    with exact arithmetic.
    """
    lo = min(S.hull()[0] for S in systems)
    hi = max(S.hull()[1] for S in systems)
    a_num, a_den = farey_grid(lo, hi, denominator_bound)
    b_num, b_den = farey_grid(Fraction(0), hi - lo, denominator_bound)
    a_vals = a_num / a_den
    b_vals = b_num / b_den
    inv_sqrt3 = 1 / math.sqrt(3)

    hits: list[BingPoint] = []
    for start in range(0, len(b_vals), block):
        stop = start + block
        offsets = (b_vals[start:stop] * inv_sqrt3)[:, None]
        feet = [a_vals[None, :] - offsets, a_vals[None, :] + offsets]
        mask = np.ones(feet[0].shape, dtype=bool)
        for S in systems:
            mask &= _screen_mask(feet, S)
        for row, col in zip(*np.nonzero(mask)):
            p = BingPoint(
                a=Fraction(int(a_num[col]), int(a_den[col])),
                b=Fraction(int(b_num[start + row]), int(b_den[start + row])),
            )
            if all(bing_closure_contains(S, p) for S in systems):
                hits.append(p)
    return hits


def random_axis_system(
    rng: np.random.Generator,
    max_intervals: int = 3,
    span: int = 20,
    denominator: int = 10,
) -> AxisSystem:
    count = int(rng.integers(1, max_intervals + 1))
    intervals = []
    for _ in range(count):
        lo = Fraction(int(rng.integers(-span * denominator, span * denominator)), denominator)
        width = Fraction(int(rng.integers(1, 2 * denominator + 1)), denominator)
        intervals.append((lo, lo + width))
    return AxisSystem(intervals=intervals)
