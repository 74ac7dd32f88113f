"""One-step extension of a countable space by a new point, at desk scale.

Given infinite sets I, J ⊆ U and a base family, a ladder D_0, D_1, ... of
reapers is built by recursion: D_n avoids u_n and splits every member of the
family C_n, and C_{n+1} adds the halves C ∩ D_n and C ∖ D_n of each member.
The new point p gets the neighbourhoods {p} ∪ D_n, and the finite shadows of
"p is an accumulation point of I and of J" are counted directly.

Reapers are explicit round-robin diagonalisations, so every ladder set is an
:class:`EnumSet` with decidable membership.
"""
from __future__ import annotations

import hashlib
import itertools
from collections.abc import Iterator, Mapping, Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict

from au.errors import ProductivityViolation, VerificationFailure
from au.logger import standard_logger
from au.reaping.enumsets import Element, EnumSet, naturals

logger = standard_logger(__name__)


class RoundRobinReaper:
    """Membership oracle of a set splitting every member of a finite family.

    Only the first `examine` elements of each member are constrained. Slots,
    one per member plus one for the ground set, are visited in turn; a visit
    decides the slot's next undecided prefix element, putting it on the side
    where that prefix is short and alternating on ties. A repair pass then
    flips unlocked elements of any prefix still short of `budget` on a side.
    Elements outside every prefix get a keyed hash bit.
    """

    def __init__(
        self,
        family: Sequence[EnumSet],
        ground: EnumSet,
        budget: int,
        forbidden: Element | None = None,
        examine: int | None = None,
        key: str = "",
    ):
        self.ground = ground
        self.budget = budget
        self.examine = examine or 4 * budget
        self._key = key.encode()
        self._decided: dict[Element, bool] = {}
        self._locked: set[Element] = set()
        self._hashed: dict[Element, bool] = {}
        if forbidden is not None:
            self._decided[forbidden] = False
            self._locked.add(forbidden)
        self._prefixes = [_prefix(C, self.examine) for C in family]
        self._colour([*self._prefixes, _prefix(ground, self.examine)])
        self._repair()

    @property
    def decisions(self) -> int:
        return len(self._decided)

    def member(self, x: Element) -> bool:
        decided = self._decided.get(x)
        if decided is not None:
            return decided
        if not self.ground.member(x):
            return False
        bit = self._hashed.get(x)
        if bit is None:
            digest = hashlib.blake2b(repr(x).encode(), digest_size=1, key=self._key)
            bit = self._hashed[x] = bool(digest.digest()[0] & 1)
        return bit

    def _colour(self, prefixes: list[list[Element]]) -> None:
        cursors = [0] * len(prefixes)
        tallies = [[0, 0] for _ in prefixes]
        parity = 0
        active = [k for k, prefix in enumerate(prefixes) if prefix]
        while active:
            still = []
            for k in active:
                prefix, tally = prefixes[k], tallies[k]
                while cursors[k] < len(prefix) and prefix[cursors[k]] in self._decided:
                    tally[self._decided[prefix[cursors[k]]]] += 1
                    cursors[k] += 1
                if cursors[k] == len(prefix):
                    continue
                inside, outside = tally[1], tally[0]
                bit = inside < outside or (inside == outside and parity == 0)
                parity ^= 1
                self._decided[prefix[cursors[k]]] = bit
                tally[bit] += 1
                cursors[k] += 1
                still.append(k)
            active = still

    def _repair(self) -> None:
        changed = True
        while changed:
            changed = False
            for prefix in self._prefixes:
                changed |= self._balance(prefix)

    def _balance(self, prefix: list[Element]) -> bool:
        inside = [x for x in prefix if self._decided[x]]
        outside = [x for x in prefix if not self._decided[x]]
        for short, spare, bit in ((inside, outside, True), (outside, inside, False)):
            need = self.budget - len(short)
            if need <= 0:
                continue
            flips = [x for x in reversed(spare) if x not in self._locked][:need]
            for x in flips:
                self._decided[x] = bit
                self._locked.add(x)
            return bool(flips)
        return False


def _prefix(C: EnumSet, examine: int) -> list[Element]:
    head = []
    try:
        for x in itertools.islice(C.elements(), examine):
            head.append(x)
    except ProductivityViolation:
        logger.info("🛎️ %s stalled after %d elements", C.name, len(head))
    return head


def split_verdict(C: EnumSet, D: EnumSet, budget: int, examine: int) -> bool:
    """Whether D splits C to `budget` among the first `examine` elements of C."""
    inside = outside = 0
    try:
        for x in itertools.islice(C.elements(), examine):
            if D.member(x):
                inside += 1
            else:
                outside += 1
            if inside >= budget and outside >= budget:
                return True
    except ProductivityViolation:
        return False
    return False


def reap(
    family: Sequence[EnumSet],
    budget: int,
    forbidden: Element | None = None,
    ground: EnumSet | None = None,
    examine: int | None = None,
    name: str = "D",
    seed: int = 0,
) -> tuple[EnumSet, list[str]]:
    """A set avoiding `forbidden`, plus the names of the members it fails to split."""
    ground = ground or naturals()
    examine = examine or 4 * budget
    reaper = RoundRobinReaper(family, ground, budget, forbidden, examine, key=f"{seed}:{name}")
    D = ground.where(name, reaper.member)
    unsplit = [C.name for C in family if not split_verdict(C, D, budget, examine)]
    logger.debug("✅ %s decided %d elements for %d sets", name, reaper.decisions, len(family))
    return D, unsplit


def split_all(
    family: Sequence[EnumSet],
    budget: int,
    forbidden: Element | None = None,
    ground: EnumSet | None = None,
    examine: int | None = None,
    name: str = "D",
    seed: int = 0,
) -> EnumSet:
    """A set avoiding `forbidden` that splits every family member to `budget`."""
    D, unsplit = reap(family, budget, forbidden, ground, examine, name, seed)
    if unsplit:
        raise VerificationFailure(f"{name} does not split {', '.join(unsplit)} to budget {budget}.")
    return D


class StageVerdict(BaseModel):
    stage: int
    forbidden: str
    forbidden_excluded: bool
    family_size: int
    splits_all: bool
    unsplit: list[str] = []
    survivors: int


class ExtensionResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    ground: EnumSet
    I: EnumSet
    J: EnumSet
    pairs: list[tuple[Any, EnumSet]]
    base: list[EnumSet]
    ladders: list[EnumSet]
    families: list[int]
    family: list[list[EnumSet]]
    stages: list[StageVerdict]
    subbase: list[str]
    new_point: str
    budget: int

    @property
    def initial_family(self) -> list[EnumSet]:
        return self.family[0] if self.family else []


def _initial_family(
    I: EnumSet,
    J: EnumSet,
    pairs: Sequence[tuple[Element, EnumSet]],
    base: Sequence[EnumSet],
    budget: int,
) -> list[EnumSet]:
    candidates = [I, J, *base, *(A & B for _, A in pairs for B in base)]
    family = []
    for C in candidates:
        if C.is_productive(budget):
            family.append(C)
        else:
            logger.info("🛎️ Dropped %s from the initial family: finite to budget %d", C.name, budget)
    return family


def run_one_step(
    U: EnumSet,
    I: EnumSet,
    J: EnumSet,
    pairs: Sequence[tuple[Element, EnumSet]],
    stages: int,
    base: Sequence[EnumSet],
    budget: int = 16,
    new_point: str = "p",
    examine: int | None = None,
    seed: int = 0,
) -> ExtensionResult:
    for A in (I, J):
        head = A.take(budget)
        if not all(U.member(x) for x in head):
            raise ValueError(f"{A.name} is not a subset of {U.name}.")

    family = _initial_family(I, J, pairs, base, budget)
    ladders: list[EnumSet] = []
    families: list[list[EnumSet]] = []
    verdicts: list[StageVerdict] = []
    for m in range(stages):
        forbidden = U.nth(m)
        D, unsplit = reap(family, budget, forbidden, U, examine, name=f"D{m}", seed=seed)
        if unsplit:
            logger.warning("⚠️ D%d leaves %d of %d sets unsplit", m, len(unsplit), len(family))
        ladders.append(D)
        families.append(family)

        survivors = 0
        grown = list(family)
        if m < stages - 1:
            for C in family:
                inside, outside = C & D, C - D
                if inside.is_productive(budget) and outside.is_productive(budget):
                    grown += [inside, outside]
                    survivors += 1
        verdicts.append(
            StageVerdict(
                stage=m,
                forbidden=str(forbidden),
                forbidden_excluded=not D.member(forbidden),
                family_size=len(family),
                splits_all=not unsplit,
                unsplit=unsplit,
                survivors=survivors,
            )
        )
        logger.info("🪜 Stage %d: |C_%d| = %d, %d survivors", m, m, len(family), survivors)
        family = grown

    subbase = (
        ["τ"]
        + [f"X∖D{m}" for m in range(stages)]
        + [f"{{{new_point}}}∪D{m}" for m in range(stages)]
    )
    return ExtensionResult(
        ground=U,
        I=I,
        J=J,
        pairs=list(pairs),
        base=list(base),
        ladders=ladders,
        families=[len(f) for f in families],
        family=families,
        stages=verdicts,
        subbase=subbase,
        new_point=new_point,
        budget=budget,
    )


def _count_upto(A: EnumSet, test, t: int, scan: int) -> bool:
    if t <= 0:
        return True
    count = 0
    try:
        for x in itertools.islice(A.elements(), scan):
            if test(x):
                count += 1
                if count >= t:
                    return True
    except ProductivityViolation:
        pass
    return False


def closure_progress(r: ExtensionResult, A: EnumSet, t: int, scan: int) -> bool:
    """|A ∩ D_0 ∩ ... ∩ D_{n-1}| ≥ t among the first `scan` elements of A."""
    return _count_upto(A, lambda x: all(D.member(x) for D in r.ladders), t, scan)


def _trace_test(r: ExtensionResult, eps: Mapping[int, int]):
    for n in eps:
        if not 0 <= n < len(r.ladders):
            raise ValueError(f"Selector index {n} is outside the {len(r.ladders)} stages.")
    items = sorted(eps.items())
    return lambda x: all(r.ladders[n].member(x) == bool(bit) for n, bit in items)


def check_dense_trace(
    r: ExtensionResult,
    C: EnumSet,
    eps: Mapping[int, int],
    t: int,
    scan: int,
) -> bool:
    """|C ∩ D_eps| ≥ t among the first `scan` elements of C."""
    return _count_upto(C, _trace_test(r, eps), t, scan)


def selectors(stages: int, depth: int) -> Iterator[dict[int, int]]:
    """All selectors with domain inside range(stages) and at most `depth` entries."""
    for size in range(min(depth, stages) + 1):
        for dom in itertools.combinations(range(stages), size):
            for bits in itertools.product((0, 1), repeat=size):
                yield dict(zip(dom, bits))


def accumulation_progress(
    r: ExtensionResult,
    x: Element,
    A: EnumSet,
    depth: int,
    t: int,
    scan: int,
) -> bool:
    """Finite shadow of x remaining an accumulation point of A after the extension.

    Off the ground set the old and new topologies agree, so only points of U
    need checking: every base set B containing x must keep A ∩ B dense along
    every selector trace.
    """
    if not r.ground.member(x):
        return True
    for B in r.base:
        if not B.member(x):
            continue
        S = A & B
        if not S.is_productive(r.budget):
            continue
        for eps in selectors(len(r.ladders), depth):
            if not check_dense_trace(r, S, eps, t, scan):
                logger.info("⚠️ %s ∩ D%s stays below %d", S.name, eps, t)
                return False
    return True


def hausdorff_separator(r: ExtensionResult, x: Element) -> int | None:
    """Stage n whose pair X∖D_n, {p}∪D_n separates x from the new point."""
    if not r.ladders:
        return None
    if not r.ground.member(x):
        return 0
    for n, D in enumerate(r.ladders):
        if r.ground.nth(n) == x and not D.member(x):
            return n
    return None


def chain_extensions(
    U: EnumSet,
    steps: Sequence[tuple[EnumSet, EnumSet, Sequence[tuple[Element, EnumSet]]]],
    stages: int,
    base: Sequence[EnumSet],
    budget: int = 16,
    seed: int = 0,
) -> list[ExtensionResult]:
    """Compose one-step extensions, each adding a fresh point.

    Each step sees the ladders of the previous steps, and their complements,
    as additional base sets.
    """
    results: list[ExtensionResult] = []
    current_base = list(base)
    for k, (I, J, pairs) in enumerate(steps):
        result = run_one_step(U, I, J, pairs, stages, current_base, budget, new_point=f"p{k}", seed=seed)
        results.append(result)
        for D in result.ladders:
            current_base += [D, U - D]
    return results
