"""Strongification of ⊛-fragments.

Case 1 (M = 1) edits single indices: at each scheduled α = f(ζ, ξ, η) the
cell ζ is moved into A⁰_α and ξ out of it, so α separates the pair.

Case 2 (M ≥ 2) quotients the cells below a cutoff γ by agreement on every
index in [γ, K), picks the least cell of each class as a transversal X and
transports each column of the fragment along a bijection onto X's trace in
that column. Columns where X is too thin for a bijection pass through
unchanged and are reported.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping

import numpy as np
from pydantic import BaseModel

from au.errors import BadSchedule, SamePoint, TransversalDeficit
from au.logger import standard_logger
from au.star.fragment import Cell, StarFragment

logger = standard_logger(__name__)

Triple = tuple[int, int, int]


def _check_schedule(f: StarFragment, schedule: Mapping[Triple, int]) -> None:
    if f.M != 1:
        raise BadSchedule(f"Case 1 needs M = 1. Got M={f.M}.")
    used: dict[int, Triple] = {}
    for triple, alpha in schedule.items():
        zeta, xi, _ = triple
        if zeta == xi:
            raise BadSchedule(f"{triple} pairs a point with itself.")
        if not max(zeta, xi) < alpha < f.K:
            raise BadSchedule(f"{triple}↦{alpha} needs max(ζ,ξ) < α < {f.K}.")
        if alpha in used:
            raise BadSchedule(f"α={alpha} is scheduled for both {used[alpha]} and {triple}.")
        used[alpha] = triple


def strongify_case1(f: StarFragment, schedule: Mapping[Triple, int]) -> StarFragment:
    """A⁰_α = (B⁰_α ∪ {ζ}) ∖ {ξ} at every scheduled α = f(ζ, ξ, η)."""
    _check_schedule(f, schedule)
    table = f.table.copy()
    for (zeta, xi, _), alpha in schedule.items():
        table[alpha, zeta, 0] = True
        table[alpha, xi, 0] = False
    return f.replace(table)


def cofinal_schedule(
    K: int,
    pairs: Iterable[tuple[int, int]],
    copies: int = 1,
    floor: int = 0,
) -> dict[Triple, int]:
    """Injective schedule giving each pair `copies` distinct indices, the least free ones."""
    schedule: dict[Triple, int] = {}
    used: set[int] = set()
    for zeta, xi in pairs:
        alpha = max(floor, zeta + 1, xi + 1)
        for eta in range(copies):
            while alpha in used:
                alpha += 1
            if alpha >= K:
                raise BadSchedule(f"Ran out of indices below {K} for pair {(zeta, xi)}.")
            schedule[(zeta, xi, eta)] = alpha
            used.add(alpha)
    return schedule


def symmetric_difference(f: StarFragment, g: StarFragment, alpha: int) -> int:
    """|A⁰_α(f) △ A⁰_α(g)|, which equals |A¹_α(f) △ A¹_α(g)|."""
    return int((f.table[alpha] != g.table[alpha]).sum())


def separation_check(f: StarFragment, x: Cell, y: Cell, beta: int) -> int | None:
    """Least α in [β, K) with exactly one of x, y in A⁰_α."""
    if x == y:
        raise SamePoint(f"Cannot separate {x} from itself.")
    if x[0] >= beta or y[0] >= beta:
        raise ValueError(f"Cells {x} and {y} must both lie below β={beta}.")
    differs = f.table[beta:, x[0], x[1]] != f.table[beta:, y[0], y[1]]
    hits = np.flatnonzero(differs)
    return int(beta + hits[0]) if hits.size else None


class Case2Report(BaseModel):
    gamma: int
    classes: int
    class_sizes: dict[str, int]
    max_class_size: int
    transversal: list[Cell]
    deficit_columns: list[int]


def shadow_classes(f: StarFragment, gamma: int) -> list[list[Cell]]:
    """Cells of γ×M grouped by agreement on every index in [γ, K), least cell first."""
    groups: dict[bytes, list[Cell]] = defaultdict(list)
    for cell in f.cells(gamma):
        groups[f.table[gamma:, cell[0], cell[1]].tobytes()].append(cell)
    return sorted(groups.values())


def strongify_case2(
    f: StarFragment,
    gamma: int,
    strict: bool = False,
) -> tuple[StarFragment, Case2Report]:
    """Case-2 strongification below the cutoff γ.

    The transversal takes the least cell of each shadow class. A column below γ
    is either filled by the transversal, where the transport onto it is the
    identity, or reported as a deficit. So at finite M the returned table
    equals the input and the report carries the result.
    """
    if f.M < 2:
        raise ValueError(f"Case 2 needs M ≥ 2. Got M={f.M}.")
    if not 0 <= gamma < f.K:
        raise ValueError(f"Cutoff γ={gamma} is outside [0,{f.K}).")

    classes = shadow_classes(f, gamma)
    transversal = sorted(members[0] for members in classes)
    per_column = Counter(xi for xi, _ in transversal)
    deficit = [xi for xi in range(gamma) if per_column[xi] < f.M]

    sizes = Counter(len(members) for members in classes)
    report = Case2Report(
        gamma=gamma,
        classes=len(classes),
        class_sizes={str(size): count for size, count in sorted(sizes.items())},
        max_class_size=max(sizes, default=0),
        transversal=transversal,
        deficit_columns=deficit,
    )
    if deficit:
        if strict:
            raise TransversalDeficit(deficit)
        logger.warning("⚠️ Transversal deficit in %d of %d columns below γ=%d", len(deficit), gamma, gamma)
    return f.replace(f.table.copy()), report


def inequivalent_on_shadow(f: StarFragment, gamma: int, cells: list[Cell]) -> bool:
    signatures = {f.table[gamma:, xi, m].tobytes() for xi, m in cells}
    return len(signatures) == len(cells)
