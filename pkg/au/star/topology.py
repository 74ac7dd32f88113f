"""Tail closure of the topology generated by a ⊛-fragment.

The subbase is {A⁰_α, A¹_α : α < K} together with a crowded base living on
one designated column. A cell c = (γ, ζ) has basic neighbourhoods A[ε] with
c ∈ A[ε]; since c ∈ α×M only for α > γ, the selector domain lies in (γ, K)
and the bits are read off c itself. S ⊆ β×M is dense toward the tail when
every such neighbourhood of every cell at or past β meets S.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable

import numpy as np
from pydantic import BaseModel

from au.logger import standard_logger
from au.star.fragment import Cell, StarFragment

logger = standard_logger(__name__)


class ClosureFailure(BaseModel):
    cell: Cell
    selector: list[tuple[int, int]]


class ClosureReport(BaseModel):
    beta: int
    depth: int
    sample_size: int
    checked: int
    failing: list[Cell]
    least_failing: ClosureFailure | None
    base_slice: int
    base_slice_failing: list[Cell]

    @property
    def passed(self) -> bool:
        return not self.failing


def _first_unmet(agree: np.ndarray, depth: int) -> tuple[int, ...] | None:
    """Least row set R, |R| ≤ depth, such that no column agrees on all of R.

    ``agree[i, s]`` says sample point s lies on the same side as the cell at
    the i-th index. Sets are searched by size, then lexicographically.
    """
    n, width = agree.shape
    if width == 0:
        return ()
    if depth == 0:
        return None
    lonely = np.flatnonzero(~agree.any(axis=1))
    if lonely.size:
        return (int(lonely[0]),)
    as_int = agree.astype(np.int32)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for size in range(2, min(depth, n) + 1):
        for prefix in itertools.combinations(range(n), size - 2):
            start = prefix[-1] + 1 if prefix else 0
            w = agree[list(prefix)].all(axis=0) if prefix else np.ones(width, dtype=bool)
            counts = (as_int * w) @ as_int.T
            unmet = (counts == 0) & upper
            unmet[:start, :] = False
            hits = np.argwhere(unmet)
            if hits.size:
                i, j = hits[0]
                return (*prefix, int(i), int(j))
    return None


def _tail_failures(
    f: StarFragment,
    sample: list[Cell],
    beta: int,
    depth: int,
) -> list[tuple[Cell, list[tuple[int, int]]]]:
    xs = np.array([c[0] for c in sample], dtype=np.intp)
    ms = np.array([c[1] for c in sample], dtype=np.intp)
    sides = f.table[:, xs, ms]
    failures = []
    for gamma in range(beta, f.K):
        for zeta in range(f.M):
            alphas = np.arange(gamma + 1, f.K)
            own = f.table[alphas, gamma, zeta]
            agree = sides[alphas] == own[:, None]
            unmet = _first_unmet(agree, depth)
            if unmet is not None:
                selector = [(int(alphas[i]), 0 if own[i] else 1) for i in unmet]
                failures.append(((gamma, zeta), selector))
    return failures


def star_topology_closure(
    f: StarFragment,
    q: int,
    S: Iterable[Cell],
    beta: int,
    depth: int,
) -> ClosureReport:
    sample = sorted(set(S))
    for xi, m in sample:
        if not (0 <= xi < beta and 0 <= m < f.M):
            raise ValueError(f"Cell {(xi, m)} is not in {beta}×{f.M}.")
    if not 0 <= q < f.M:
        raise ValueError(f"Base column {q} is outside [0,{f.M}).")

    failures = _tail_failures(f, sample, beta, depth)
    base = [(xi, q) for xi in range(beta)]
    base_failures = _tail_failures(f, base, beta, depth)

    least = None
    if failures:
        cell, selector = failures[0]
        least = ClosureFailure(cell=cell, selector=selector)
        logger.info("⚠️ %d tail cells escape the closure of S, first %s", len(failures), cell)
    return ClosureReport(
        beta=beta,
        depth=depth,
        sample_size=len(sample),
        checked=(f.K - beta) * f.M if beta < f.K else 0,
        failing=[cell for cell, _ in failures],
        least_failing=least,
        base_slice=q,
        base_slice_failing=[cell for cell, _ in base_failures],
    )
