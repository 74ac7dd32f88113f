"""Decidable infinite sets over a countable ground set.

An :class:`EnumSet` pairs a lazy enumeration with a membership predicate.
"Infinite" is replaced by productivity: asked for ``k`` elements, a set must
produce them without stalling for more than ``patience`` consecutive
rejected candidates, otherwise :class:`ProductivityViolation` is raised.

Enumerations are memoised, so sets derived from one another (intersections,
differences) share the work of scanning their parents.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Iterator
from fractions import Fraction

from au.errors import MalformedGenerator, ProductivityViolation

Element = Hashable
DEFAULT_PATIENCE = 1 << 16


class EnumSet:
    def __init__(
        self,
        name: str,
        scan: Callable[[], Iterator[Element | None]],
        member: Callable[[Element], bool],
        patience: int = DEFAULT_PATIENCE,
    ):
        self.name = name
        self.member = member
        self.patience = patience
        self._scan = scan
        self._source: Iterator[Element | None] | None = None
        self._cache: list[Element] = []

    def __repr__(self) -> str:
        return f"EnumSet({self.name})"

    def __contains__(self, x: Element) -> bool:
        return self.member(x)

    def _extend(self) -> None:
        if self._source is None:
            self._source = self._scan()
        stalled = 0
        for candidate in self._source:
            if candidate is not None:
                self._cache.append(candidate)
                return
            stalled += 1
            if stalled > self.patience:
                break
        raise ProductivityViolation(
            f"{self.name} produced no fresh element after {self.patience} candidates "
            f"({len(self._cache)} produced so far)."
        )

    def elements(self) -> Iterator[Element]:
        """Enumerate the set in its fixed order, memoising as it goes."""
        for i in itertools.count():
            if i == len(self._cache):
                self._extend()
            yield self._cache[i]

    def nth(self, n: int) -> Element:
        while len(self._cache) <= n:
            self._extend()
        return self._cache[n]

    def take(self, k: int) -> list[Element]:
        return list(itertools.islice(self.elements(), k))

    def is_productive(self, budget: int) -> bool:
        try:
            self.take(budget)
        except ProductivityViolation:
            return False
        return True

    def where(self, name: str, predicate: Callable[[Element], bool]) -> EnumSet:
        """The subset of elements satisfying `predicate`, in this set's order."""
        parent = self

        def scan() -> Iterator[Element | None]:
            for x in parent.elements():
                yield x if predicate(x) else None

        return EnumSet(name, scan, lambda x: parent.member(x) and predicate(x), self.patience)

    def __and__(self, other: EnumSet) -> EnumSet:
        return self.where(f"{self.name}∩{other.name}", other.member)

    def __sub__(self, other: EnumSet) -> EnumSet:
        return self.where(f"{self.name}∖{other.name}", lambda x: not other.member(x))


def from_generator(
    name: str,
    generate: Callable[[], Iterable[Element]],
    member: Callable[[Element], bool],
    patience: int = DEFAULT_PATIENCE,
) -> EnumSet:
    return EnumSet(name, lambda: iter(generate()), member, patience)


def naturals() -> EnumSet:
    return from_generator(
        "ℕ",
        itertools.count,
        lambda x: isinstance(x, int) and x >= 0,
    )


def _stern_brocot_unit() -> Iterator[Fraction]:
    # level order of the Stern–Brocot subtree below 1/2
    queue = deque([(0, 1, 1, 1)])
    while True:
        lp, lq, rp, rq = queue.popleft()
        p, q = lp + rp, lq + rq
        yield Fraction(p, q)
        queue.append((lp, lq, p, q))
        queue.append((p, q, rp, rq))


def unit_rationals() -> EnumSet:
    """ℚ ∩ (0,1) in Stern–Brocot level order."""
    return from_generator(
        "ℚ∩(0,1)",
        _stern_brocot_unit,
        lambda x: isinstance(x, Fraction) and 0 < x < 1,
    )


def evens(U: EnumSet) -> EnumSet:
    return U.where("evens", lambda x: x % 2 == 0)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, int(n**0.5) + 1, 2))


def primes(U: EnumSet) -> EnumSet:
    return U.where("primes", _is_prime)


def progression(U: EnumSet, start: int, step: int) -> EnumSet:
    return U.where(f"{start}+{step}ℕ", lambda x: x >= start and (x - start) % step == 0)


def reciprocals() -> EnumSet:
    """{1/(n+2) : n ∈ ℕ}, enumerated by n."""
    return from_generator(
        "reciprocals",
        lambda: (Fraction(1, n + 2) for n in itertools.count()),
        lambda x: isinstance(x, Fraction) and x.numerator == 1 and x.denominator >= 2,
    )


def co_reciprocals() -> EnumSet:
    """{1 - 1/(n+2) : n ∈ ℕ}, enumerated by n."""
    return from_generator(
        "co-reciprocals",
        lambda: (Fraction(n + 1, n + 2) for n in itertools.count()),
        lambda x: isinstance(x, Fraction) and x.denominator >= 2 and x.numerator + 1 == x.denominator,
    )


def dyadic_interval(U: EnumSet, level: int, index: int) -> EnumSet:
    """U ∩ [index/2^level, (index+1)/2^level)."""
    scale = 1 << level

    def inside(x: Fraction) -> bool:
        scaled = x.numerator * scale
        return index * x.denominator <= scaled < (index + 1) * x.denominator

    return U.where(f"[{index}/{scale},{index + 1}/{scale})", inside)


def dyadic_base(U: EnumSet, min_width_level: int) -> list[EnumSet]:
    """All dyadic intervals of width ≥ 2^-level, traced on U."""
    return [
        dyadic_interval(U, level, index)
        for level in range(min_width_level + 1)
        for index in range(1 << level)
    ]


def split_counts(C: EnumSet, D: EnumSet, examine: int) -> tuple[int, int]:
    """How many of the first `examine` elements of C fall inside and outside D."""
    inside = sum(1 for x in C.take(examine) if D.member(x))
    return inside, examine - inside


BUILTIN_SETS: dict[str, Callable[[EnumSet], EnumSet]] = {
    "evens": evens,
    "primes": primes,
    "reciprocals": lambda U: reciprocals(),
    "co-reciprocals": lambda U: co_reciprocals(),
}

GROUND_SETS: dict[str, Callable[[], EnumSet]] = {
    "naturals": naturals,
    "rationals": unit_rationals,
}

_PROGRESSION_RE = re.compile(r"(\d+)\+(\d+)N")
_DYADIC_RE = re.compile(r"dyadic:(\d+):(\d+)")


def named_set(U: EnumSet, name: str) -> EnumSet:
    """A built-in set by name, an arithmetic progression `a+bN`, or `dyadic:level:index`."""
    if name in BUILTIN_SETS:
        return BUILTIN_SETS[name](U)
    if m := _PROGRESSION_RE.fullmatch(name):
        start, step = int(m[1]), int(m[2])
        if step < 1:
            raise MalformedGenerator(f"Progression step must be positive. Got {name!r}.")
        return progression(U, start, step)
    if m := _DYADIC_RE.fullmatch(name):
        level, index = int(m[1]), int(m[2])
        if index >= 1 << level:
            raise MalformedGenerator(f"Dyadic index {index} is past level {level}. Got {name!r}.")
        return dyadic_interval(U, level, index)
    known = ", ".join(BUILTIN_SETS)
    raise MalformedGenerator(f"Unknown set {name!r}. Expected one of {known}, `a+bN` or `dyadic:level:index`.")
