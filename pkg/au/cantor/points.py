"""Cantor-cube points and clopen boxes at κ = ω.

A point is a finite prefix of bits followed by a periodic tail. Two tails are
supported:

- ``zero``: 0, 0, 0, ...
- ``alt``: 0, 1, 0, 1, ... where the first 0 sits at the first index past
  the prefix.

Points are kept in canonical form (shortest prefix yielding the same bit
sequence), so equality of models is equality of sequences.

The dense set Y is the set of ``alt``-tailed points; ``zero``-tailed nonzero
points form the compact sets K_α = {x : x(α) = 1 and x(β) = 0 for β > α}.
"""
from __future__ import annotations

import itertools
import re
from collections.abc import Iterator, Mapping
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from au.errors import MalformedPoint

Tail = Literal["zero", "alt"]

_POINT_RE = re.compile(r"^\s*([01]*)\s*\+\s*(zero|alt)\s*$")
_BOX_ITEM_RE = re.compile(r"^\s*(\d+)\s*:\s*([01])\s*$")


def _canonical_prefix(prefix: tuple[int, ...], tail: Tail) -> tuple[int, ...]:
    bits = list(prefix)
    if tail == "zero":
        while bits and bits[-1] == 0:
            bits.pop()
    else:
        # The alt tail restarts its phase right after the prefix, so only
        # whole "01" periods can be absorbed into it.
        while len(bits) >= 2 and bits[-2] == 0 and bits[-1] == 1:
            del bits[-2:]
    return tuple(bits)


class CubePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    prefix: tuple[int, ...] = ()
    tail: Tail = "alt"

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict):
            prefix = tuple(int(b) for b in data.get("prefix", ()))
            if any(b not in (0, 1) for b in prefix):
                raise MalformedPoint(f"Prefix bits must be 0 or 1. Got {prefix}.")
            tail = data.get("tail", "alt")
            return {"prefix": _canonical_prefix(prefix, tail), "tail": tail}
        return data

    @classmethod
    def parse(cls, text: str) -> CubePoint:
        match = _POINT_RE.match(text)
        if match is None:
            raise MalformedPoint(f"Expected `<bits>+zero` or `<bits>+alt`. Got {text!r}.")
        bits, tail = match.groups()
        return cls(prefix=tuple(int(b) for b in bits), tail=tail)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.prefix) + "+" + self.tail

    def __getitem__(self, i: int) -> int:
        return eval_point(self, i)

    def bits(self, n: int) -> list[int]:
        """The first `n` bits of the sequence."""
        return [eval_point(self, i) for i in range(n)]


class Box(BaseModel):
    """A finite partial map from indices to bits, i.e. a basic clopen set.

    Stored as sorted ``(index, bit)`` pairs so the model is hashable.
    """

    model_config = ConfigDict(frozen=True)

    items: tuple[tuple[int, int], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict):
            raw = data.get("items", ())
            if isinstance(raw, Mapping):
                raw = raw.items()
            items = tuple(sorted((int(i), int(b)) for i, b in raw))
            seen: dict[int, int] = {}
            for i, b in items:
                if i < 0 or b not in (0, 1):
                    raise MalformedPoint(f"Bad box assignment {i}:{b}.")
                if seen.get(i, b) != b:
                    raise MalformedPoint(f"Index {i} is assigned both bits.")
                seen[i] = b
            return {"items": tuple(seen.items())}
        return data

    @classmethod
    def of(cls, assignments: Mapping[int, int] | None = None) -> Box:
        return cls(items=dict(assignments or {}))

    @classmethod
    def parse(cls, text: str) -> Box:
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise MalformedPoint(f"Expected `{{i:b,...}}`. Got {text!r}.")
        body = body[1:-1].strip()
        assignments = {}
        if body:
            for item in body.split(","):
                match = _BOX_ITEM_RE.match(item)
                if match is None:
                    raise MalformedPoint(f"Bad box item {item!r} in {text!r}.")
                assignments[int(match.group(1))] = int(match.group(2))
        return cls.of(assignments)

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}:{b}" for i, b in self.items) + "}"

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.items)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def get(self, i: int) -> int | None:
        return self.mapping.get(i)

    def merge(self, other: Box) -> Box | None:
        """The box denoting the intersection, or None if it is empty."""
        merged = self.mapping
        for i, b in other.items:
            if merged.setdefault(i, b) != b:
                return None
        return Box.of(merged)


class Classification(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["Y", "K", "zero"]
    alpha: int | None = None


def eval_point(p: CubePoint, i: int) -> int:
    if i < len(p.prefix):
        return p.prefix[i]
    if p.tail == "zero":
        return 0
    return (i - len(p.prefix)) % 2


def box_contains(b: Box, p: CubePoint) -> bool:
    return all(eval_point(p, i) == bit for i, bit in b.items)


def compatible(e1: Mapping[int, int], e2: Mapping[int, int]) -> bool:
    if len(e2) < len(e1):
        e1, e2 = e2, e1
    return all(e2.get(i, b) == b for i, b in e1.items())


def boxes_compatible(b1: Box, b2: Box) -> bool:
    return compatible(b1.mapping, b2.mapping)


def classify(p: CubePoint) -> Classification:
    if p.tail == "alt":
        return Classification(kind="Y")
    if not p.prefix:
        return Classification(kind="zero")
    # canonical zero-tailed prefixes end in their last 1
    return Classification(kind="K", alpha=len(p.prefix) - 1)


def dense_extend(b: Box) -> CubePoint:
    """A point of Y inside the box: unassigned prefix slots are filled with 0."""
    if not b.items:
        return CubePoint(prefix=(), tail="alt")
    mapping = b.mapping
    length = max(mapping) + 1
    return CubePoint(prefix=tuple(mapping.get(i, 0) for i in range(length)), tail="alt")


def k_alpha_members(alpha: int) -> Iterator[CubePoint]:
    """Enumerate the 2^alpha points of K_alpha."""
    for head in itertools.product((0, 1), repeat=alpha):
        yield CubePoint(prefix=(*head, 1), tail="zero")


def random_box(
    rng: np.random.Generator,
    index_bound: int,
    max_size: int | None = None,
    min_size: int = 0,
) -> Box:
    max_size = index_bound if max_size is None else min(max_size, index_bound)
    size = int(rng.integers(min_size, max_size + 1))
    indices = rng.choice(index_bound, size=size, replace=False)
    bits = rng.integers(0, 2, size=size)
    return Box.of({int(i): int(b) for i, b in zip(indices, bits)})


def random_y_point(rng: np.random.Generator, length: int) -> CubePoint:
    bits = rng.integers(0, 2, size=length)
    return CubePoint(prefix=tuple(int(b) for b in bits), tail="alt")
