"""Fibers of the trace map x ↦ {A ∈ 𝒜 : x ∈ A} of a finite family."""
from __future__ import annotations

from collections import defaultdict
from collections.abc import Collection, Hashable, Iterable, Sequence

import numpy as np
from pydantic import BaseModel

from au.errors import IllFormedSelector
from au.star.fragment import Cell, StarFragment


class FiberReport(BaseModel):
    ground_size: int
    family_size: int
    fiber_count: int
    fiber_sizes: list[int]
    bound_holds: bool
    unsplit: bool

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.unsplit


def fibers(family: Sequence[Collection[Hashable]], X: Iterable[Hashable]) -> list[list[Hashable]]:
    grouped: dict[tuple[bool, ...], list[Hashable]] = defaultdict(list)
    for x in X:
        grouped[tuple(x in A for A in family)].append(x)
    return list(grouped.values())


def splitting_fiber_map(family: Sequence[Collection[Hashable]], X: Iterable[Hashable]) -> FiberReport:
    ground = list(dict.fromkeys(X))
    groups = fibers(family, ground)
    unsplit = all(
        len({x in A for x in fiber}) == 1 for fiber in groups for A in family
    )
    return FiberReport(
        ground_size=len(ground),
        family_size=len(family),
        fiber_count=len(groups),
        fiber_sizes=sorted((len(fiber) for fiber in groups), reverse=True),
        bound_holds=len(groups) <= 2 ** len(family),
        unsplit=unsplit,
    )


def tail_splitting_fibers(f: StarFragment, cells: Iterable[Cell], alphas: Sequence[int]) -> FiberReport:
    """Fibers of {A⁰_α : α ∈ alphas} traced on a cell set below every α."""
    cells = sorted(set(cells))
    if alphas and cells and max(c[0] for c in cells) >= min(alphas):
        raise IllFormedSelector(f"Cells must lie below every index of {list(alphas)}.")
    family = [frozenset(c for c in cells if f.table[alpha, c[0], c[1]]) for alpha in alphas]
    return splitting_fiber_map(family, cells)


def random_family(rng: np.random.Generator, ground_size: int, size: int) -> list[frozenset[int]]:
    """`size` independent uniformly random subsets of range(ground_size)."""
    draws = rng.integers(0, 2, size=(size, ground_size), dtype=np.uint8).astype(bool)
    return [frozenset(int(x) for x in np.flatnonzero(row)) for row in draws]
