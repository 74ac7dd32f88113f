"""Finite fragments of ⊛-sequences.

A fragment with index bound K and fiber bound M holds, for every α < K, a
partition ⟨A⁰_α, A¹_α⟩ of the cells α×M. It is stored as one boolean table
``zero[α, ξ, m]`` (cell (ξ, m) lies in A⁰_α); entries with ξ ≥ α are outside
α×M and are kept False.

Cells are ``(ξ, m)`` pairs ordered lexicographically.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from au.errors import IllFormedSelector, MalformedFragment
from au.logger import standard_logger
from au.seeding import generator

logger = standard_logger(__name__)

Cell = tuple[int, int]

COHEN_STREAM = 0xC0


def _below_diagonal(K: int) -> np.ndarray:
    # mask[α, ξ] is True exactly when ξ < α
    return np.tri(K, K, -1, dtype=bool)


class StarFragment(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: int
    M: int
    seed: int | None = None
    table: np.ndarray

    @model_validator(mode="after")
    def check_table(self) -> StarFragment:
        if self.K < 1 or self.M < 1:
            raise ValueError(f"Need K ≥ 1 and M ≥ 1. Got K={self.K}, M={self.M}.")
        if self.table.shape != (self.K, self.K, self.M) or self.table.dtype != np.bool_:
            raise ValueError(f"Expected a boolean table of shape {(self.K, self.K, self.M)}.")
        if not self.partition_holds():
            raise ValueError("A⁰_α must lie inside α×M for every α.")
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StarFragment):
            return NotImplemented
        return (self.K, self.M, self.seed) == (other.K, other.M, other.seed) and bool(
            np.array_equal(self.table, other.table)
        )

    def partition_holds(self) -> bool:
        outside = ~_below_diagonal(self.K)
        return not bool(self.table[outside].any())

    def replace(self, table: np.ndarray) -> StarFragment:
        return StarFragment(K=self.K, M=self.M, seed=self.seed, table=table)

    def zero(self, alpha: int, cell: Cell) -> bool:
        xi, m = cell
        if not (0 <= xi < alpha < self.K and 0 <= m < self.M):
            raise IllFormedSelector(f"Cell {cell} is not in {alpha}×{self.M}.")
        return bool(self.table[alpha, xi, m])

    def part(self, alpha: int, bit: int) -> list[Cell]:
        """A^bit_α as a sorted cell list."""
        inside = self.table[alpha, :alpha] if bit == 0 else ~self.table[alpha, :alpha]
        return [(int(xi), int(m)) for xi, m in zip(*np.nonzero(inside))]

    def cells(self, beta: int) -> list[Cell]:
        return [(xi, m) for xi in range(min(beta, self.K)) for m in range(self.M)]

    def signature(self, cell: Cell, alphas: Iterable[int]) -> np.ndarray:
        xi, m = cell
        return self.table[list(alphas), xi, m]


class EpsSelector(BaseModel):
    """A finite map ε from indices to bits, naming A[ε] = ⋂ A^{ε(ζ)}_ζ."""

    model_config = ConfigDict(frozen=True)

    items: tuple[tuple[int, int], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def normalize(cls, data: Any) -> Any:
        if isinstance(data, Mapping) and "items" not in data:
            data = {"items": data}
        if isinstance(data, dict):
            raw = data.get("items", ())
            pairs = raw.items() if isinstance(raw, Mapping) else raw
            items = tuple(sorted((int(k), int(v)) for k, v in pairs))
            for zeta, bit in items:
                if zeta < 0 or bit not in (0, 1):
                    raise IllFormedSelector(f"Bad selector entry {zeta}↦{bit}.")
            if len({zeta for zeta, _ in items}) != len(items):
                raise IllFormedSelector(f"Selector repeats an index: {items}.")
            return {"items": items}
        return data

    @classmethod
    def of(cls, mapping: Mapping[int, int] | None = None) -> EpsSelector:
        return cls(items=dict(mapping or {}))

    def __str__(self) -> str:
        return "{" + ",".join(f"{zeta}:{bit}" for zeta, bit in self.items) + "}"

    @property
    def domain(self) -> list[int]:
        return [zeta for zeta, _ in self.items]


def cohen_fragment(K: int, M: int, seed: int) -> StarFragment:
    """Fragment whose table g(β, ξ, m) is drawn from the seeded bit generator."""
    rng = generator(seed, COHEN_STREAM, K, M)
    bits = rng.integers(0, 2, size=(K, K, M), dtype=np.uint8).astype(bool)
    bits &= _below_diagonal(K)[:, :, None]
    logger.debug("🎲 Cohen table K=%d M=%d seed=%d", K, M, seed)
    return StarFragment(K=K, M=M, seed=seed, table=bits)


def constant_fragment(K: int, M: int, bit: int = 0) -> StarFragment:
    """The degenerate table g ≡ bit."""
    table = np.zeros((K, K, M), dtype=bool)
    if bit == 0:
        table |= _below_diagonal(K)[:, :, None]
    return StarFragment(K=K, M=M, table=table)


def selection_mask(f: StarFragment, cells: list[Cell], eps: EpsSelector) -> np.ndarray:
    """Boolean mask over `cells`: membership in A[eps]."""
    if not cells:
        return np.zeros(0, dtype=bool)
    for zeta in eps.domain:
        if zeta >= f.K:
            raise IllFormedSelector(f"Selector index {zeta} is outside [0,{f.K}).")
    if eps.items:
        floor = min(eps.domain)
        late = [c for c in cells if c[0] >= floor]
        if late:
            raise IllFormedSelector(
                f"Cell {late[0]} is not below every selector index of {eps}."
            )
    xs = np.array([c[0] for c in cells])
    ms = np.array([c[1] for c in cells])
    mask = np.ones(len(cells), dtype=bool)
    for zeta, bit in eps.items:
        in_zero = f.table[zeta, xs, ms]
        mask &= in_zero if bit == 0 else ~in_zero
    return mask


def dyadicity_check(
    f: StarFragment,
    S: Iterable[Cell],
    eps: EpsSelector | Mapping[int, int],
    t: int,
) -> tuple[int, bool]:
    """|S ∩ A[eps]| and whether it reaches the threshold t."""
    if not isinstance(eps, EpsSelector):
        eps = EpsSelector.of(eps)
    cells = sorted(set(S))
    count = int(selection_mask(f, cells, eps).sum())
    return count, count >= t


def random_cells(rng: np.random.Generator, beta: int, M: int, size: int) -> list[Cell]:
    """`size` distinct cells of beta×M, sorted."""
    picks = rng.choice(beta * M, size=size, replace=False)
    return sorted((int(i) // M, int(i) % M) for i in picks)


def random_selector(rng: np.random.Generator, lo: int, K: int, depth: int) -> EpsSelector:
    size = int(rng.integers(0, min(depth, K - lo) + 1))
    domain = rng.choice(np.arange(lo, K), size=size, replace=False)
    bits = rng.integers(0, 2, size=size)
    return EpsSelector.of({int(z): int(b) for z, b in zip(domain, bits)})


def _row_hex(row: np.ndarray, width: int) -> str:
    packed = np.packbits(row.ravel(), bitorder="little").tobytes()
    return packed[::-1].hex().rjust(width, "0")


def fragment_dump(f: StarFragment) -> str:
    """Header ``K M seed`` then one hex row per α; bit ξ·M+m is cell (ξ, m) of A⁰_α."""
    width = 2 * math.ceil(f.K * f.M / 8)
    seed = "-" if f.seed is None else str(f.seed)
    lines = [f"{f.K} {f.M} {seed}"]
    lines += [_row_hex(f.table[alpha], width) for alpha in range(f.K)]
    return "\n".join(lines) + "\n"


def fragment_load(text: str) -> StarFragment:
    lines = text.split()
    try:
        K, M = int(lines[0]), int(lines[1])
        seed = None if lines[2] == "-" else int(lines[2])
    except (IndexError, ValueError) as e:
        raise MalformedFragment("Expected a `K M seed` header.") from e
    rows = lines[3:]
    if len(rows) != K:
        raise MalformedFragment(f"Expected {K} rows. Got {len(rows)}.")
    table = np.zeros((K, K, M), dtype=bool)
    for alpha, row in enumerate(rows):
        try:
            raw = bytes.fromhex(row)[::-1]
        except ValueError as e:
            raise MalformedFragment(f"Row {alpha} is not hex: {row!r}.") from e
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        if len(bits) < K * M or bits[K * M :].any():
            raise MalformedFragment(f"Row {alpha} does not fit {K}×{M} cells.")
        table[alpha] = bits[: K * M].reshape(K, M).astype(bool)
    try:
        return StarFragment(K=K, M=M, seed=seed, table=table)
    except ValueError as e:
        raise MalformedFragment(str(e)) from e
