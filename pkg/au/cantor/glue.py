"""The glued space Z = Y ∪ ω built from the Cantor cube.

Each compact set K_α is collapsed to a single glued point α. Neighbourhoods
of a Y point are clopen boxes traced on Y; the canonical neighbourhoods of a
glued point α are ``A(α;m) = {α} ∪ (Box(α;m) ∩ Y)`` where ``Box(α;m)`` pins
x(α) = 1 and x(β) = 0 for α < β ≤ m. Finitely generated opens are unions of
such generators, which makes closure membership decidable.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from au.cantor.points import (
    Box,
    CubePoint,
    box_contains,
    classify,
    compatible,
    dense_extend,
    eval_point,
    random_box,
)
from au.errors import EmptyOpen, MalformedGenerator, MalformedPoint, SamePoint, VerificationFailure
from au.logger import standard_logger

logger = standard_logger(__name__)

_AGEN_RE = re.compile(r"^A\(\s*(\d+)\s*;\s*(\d+)\s*\)$")


def anchor_box(alpha: int, m: int) -> dict[int, int]:
    """Box(α;m) as a plain mapping."""
    return {alpha: 1, **{beta: 0 for beta in range(alpha + 1, m + 1)}}


class GluePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["Y", "G"]
    point: CubePoint | None = None
    alpha: int | None = None

    @model_validator(mode="after")
    def check_payload(self) -> GluePoint:
        if self.kind == "Y":
            if self.point is None or classify(self.point).kind != "Y":
                raise ValueError(f"Y points need an alt-tailed payload. Got {self.point}.")
        elif self.alpha is None or self.alpha < 0:
            raise ValueError(f"Glued points need a natural index. Got {self.alpha}.")
        return self

    @classmethod
    def y(cls, point: CubePoint | str) -> GluePoint:
        if isinstance(point, str):
            point = CubePoint.parse(point)
        return cls(kind="Y", point=point)

    @classmethod
    def glued(cls, alpha: int) -> GluePoint:
        return cls(kind="G", alpha=alpha)

    @classmethod
    def parse(cls, text: str) -> GluePoint:
        tag, _, body = text.strip().partition(":")
        if tag == "G" and body.isdigit():
            return cls.glued(int(body))
        if tag == "Y":
            return cls.y(body)
        raise MalformedPoint(f"Expected `G:<n>` or `Y:<point>`. Got {text!r}.")

    def __str__(self) -> str:
        return f"G:{self.alpha}" if self.kind == "G" else f"Y:{self.point}"


class YGen(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["Y"] = "Y"
    box: Box

    def __str__(self) -> str:
        return f"Y{self.box}"

    @property
    def anchor(self) -> dict[int, int]:
        return self.box.mapping


class AGen(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["A"] = "A"
    alpha: int
    m: int

    def __str__(self) -> str:
        return f"A({self.alpha};{self.m})"

    @property
    def anchor(self) -> dict[int, int]:
        return anchor_box(self.alpha, self.m)

    @property
    def box(self) -> Box:
        return Box.of(self.anchor)


Generator = Annotated[YGen | AGen, Field(discriminator="kind")]


class GlueOpen(BaseModel):
    """A finitely generated ρ-open set. Build these with :func:`mk_open`."""

    model_config = ConfigDict(frozen=True)

    generators: tuple[Generator, ...] = ()

    @model_validator(mode="after")
    def check_generators(self) -> GlueOpen:
        for gen in self.generators:
            if isinstance(gen, AGen) and gen.m <= gen.alpha:
                raise ValueError(f"{gen} needs m > alpha.")
        return self

    @classmethod
    def parse(cls, text: str) -> GlueOpen:
        body = text.strip()
        if body in ("", "∅"):
            return mk_open([])
        gens: list[YGen | AGen] = []
        for chunk in body.split("|"):
            chunk = chunk.strip()
            if chunk.startswith("Y{"):
                try:
                    gens.append(YGen(box=Box.parse(chunk[1:])))
                except ValueError as e:
                    raise MalformedGenerator(f"Bad generator {chunk!r}.") from e
                continue
            match = _AGEN_RE.match(chunk)
            if match is None:
                raise MalformedGenerator(f"Bad generator {chunk!r}.")
            gens.append(AGen(alpha=int(match.group(1)), m=int(match.group(2))))
        return mk_open(gens)

    def __str__(self) -> str:
        if not self.generators:
            return "∅"
        return " | ".join(str(gen) for gen in self.generators)

    @property
    def is_empty(self) -> bool:
        # A box is never empty on the dense set Y.
        return not self.generators

    @property
    def anchors(self) -> list[dict[int, int]]:
        """The contributing boxes whose union U carries the Y-trace."""
        return [gen.anchor for gen in self.generators]

    @property
    def glued(self) -> frozenset[int]:
        return frozenset(gen.alpha for gen in self.generators if isinstance(gen, AGen))


def mk_open(gens: Iterable[YGen | AGen | dict[str, Any]]) -> GlueOpen:
    validated: list[YGen | AGen] = []
    for gen in gens:
        if isinstance(gen, dict):
            gen = AGen(**gen) if gen.get("kind") == "A" else YGen(**gen)
        if isinstance(gen, AGen) and gen.m <= gen.alpha:
            raise MalformedGenerator(f"{gen} needs m > alpha (m={gen.m}, alpha={gen.alpha}).")
        if gen not in validated:
            validated.append(gen)
    return GlueOpen(generators=tuple(validated))


def contains(V: GlueOpen, p: GluePoint) -> bool:
    if p.kind == "G":
        return p.alpha in V.glued
    return any(box_contains(gen.box, p.point) for gen in V.generators)


def meets_k(anchor: dict[int, int], gamma: int) -> bool:
    """Whether the box meets K_γ."""
    if anchor.get(gamma, 1) != 1:
        return False
    return all(bit == 0 for beta, bit in anchor.items() if beta > gamma)


def closure_contains(V: GlueOpen, p: GluePoint) -> bool:
    if p.kind == "Y":
        # clopen boxes have clopen traces on Y
        return contains(V, p)
    if p.alpha in V.glued:
        return True
    return any(meets_k(anchor, p.alpha) for anchor in V.anchors)


def closure_tail_bound(V: GlueOpen) -> int:
    if V.is_empty:
        raise EmptyOpen("The empty open set has an empty closure.")
    return min(max(anchor, default=-1) + 1 for anchor in V.anchors)


def rc_intersection_witness(Vs: Sequence[GlueOpen]) -> GluePoint:
    """A glued point common to the closures of all the given opens."""
    if not Vs:
        raise EmptyOpen("Need at least one open set.")
    for V in Vs:
        if V.is_empty:
            raise EmptyOpen("Regular closed sets in the intersection must be non-empty.")
    gamma = max(closure_tail_bound(V) for V in Vs)
    witness = GluePoint.glued(gamma)
    for V in Vs:
        if not closure_contains(V, witness):
            raise VerificationFailure(f"{witness} escaped the closure of {V}.")
    return witness


def _first_difference(p: CubePoint, q: CubePoint) -> int:
    horizon = len(p.prefix) + len(q.prefix) + 2
    for i in range(horizon + 1):
        if eval_point(p, i) != eval_point(q, i):
            return i
    raise SamePoint(f"{p} and {q} denote the same point.")


def _restriction(p: CubePoint, upto: int) -> Box:
    return Box.of({i: eval_point(p, i) for i in range(upto + 1)})


def _separate_y_from_glued(y: CubePoint, alpha: int) -> tuple[GlueOpen, GlueOpen]:
    # an alt tail carries a 1 in every pair of consecutive indices
    beta = next(i for i in range(alpha + 1, alpha + len(y.prefix) + 4) if eval_point(y, i) == 1)
    return mk_open([YGen(box=_restriction(y, beta))]), mk_open([AGen(alpha=alpha, m=beta)])


def hausdorff_witness(p: GluePoint, q: GluePoint) -> tuple[GlueOpen, GlueOpen]:
    if p == q:
        raise SamePoint(f"Cannot separate {p} from itself.")
    if p.kind == "G" and q.kind == "G":
        m = max(p.alpha, q.alpha) + 1
        return mk_open([AGen(alpha=p.alpha, m=m)]), mk_open([AGen(alpha=q.alpha, m=m)])
    if p.kind == "Y" and q.kind == "Y":
        i = _first_difference(p.point, q.point)
        return (
            mk_open([YGen(box=_restriction(p.point, i))]),
            mk_open([YGen(box=_restriction(q.point, i))]),
        )
    if p.kind == "Y":
        return _separate_y_from_glued(p.point, q.alpha)
    y_side, glued_side = _separate_y_from_glued(q.point, p.alpha)
    return glued_side, y_side


def certify_disjoint(V1: GlueOpen, V2: GlueOpen) -> bool:
    """Symbolic disjointness: no shared glued point, no compatible box pair."""
    if V1.glued & V2.glued:
        return False
    return not any(compatible(a, b) for a in V1.anchors for b in V2.anchors)


def closure_oracle(V: GlueOpen, gamma: int, horizon: int) -> bool:
    """Brute-force closure membership of the glued point γ.

    Checks that every canonical neighbourhood A(γ;m), γ < m ≤ horizon, meets V
    by exhibiting a common Y point built with :func:`dense_extend`.
    """
    if gamma in V.glued:
        return True
    for m in range(gamma + 1, horizon + 1):
        nbhd = mk_open([AGen(alpha=gamma, m=m)])
        if not _meets(nbhd, V):
            return False
    return True


def _meets(V1: GlueOpen, V2: GlueOpen) -> bool:
    if V1.glued & V2.glued:
        return True
    for a in V1.anchors:
        for b in V2.anchors:
            merged = Box.of(a).merge(Box.of(b))
            if merged is None:
                continue
            y = GluePoint.y(dense_extend(merged))
            if contains(V1, y) and contains(V2, y):
                return True
    return False


def glued_in_closure_set(V: GlueOpen, limit: int) -> list[int]:
    return [gamma for gamma in range(limit) if closure_contains(V, GluePoint.glued(gamma))]


def cofinal_density_check(box: Box, alphas: Iterable[int]) -> bool:
    """Every box meets K_α for all α past its domain, by explicit members of K_α."""
    bound = max(box.domain, default=-1) + 1
    mapping = box.mapping
    for alpha in alphas:
        if alpha < bound:
            continue
        member = CubePoint(
            prefix=tuple(mapping.get(i, 0) for i in range(alpha)) + (1,),
            tail="zero",
        )
        cls = classify(member)
        if not box_contains(box, member) or cls.kind != "K" or cls.alpha != alpha:
            logger.warning("⚠️ %s has no member of K_%d past its domain", box, alpha)
            return False
    return True


def random_open(rng: np.random.Generator, index_bound: int, max_generators: int = 3) -> GlueOpen:
    """A non-empty open with every anchor inside [0, index_bound]."""
    gens: list[YGen | AGen] = []
    for _ in range(int(rng.integers(1, max_generators + 1))):
        if rng.random() < 0.5:
            gens.append(YGen(box=random_box(rng, index_bound, max_size=4)))
        else:
            alpha = int(rng.integers(0, index_bound))
            gens.append(AGen(alpha=alpha, m=int(rng.integers(alpha + 1, index_bound + 1))))
    return mk_open(gens)


def random_point_inside(rng: np.random.Generator, V: GlueOpen, length: int) -> GluePoint:
    """A Y point of V: a random point overwritten by one of V's anchors."""
    anchor = V.anchors[int(rng.integers(0, len(V.anchors)))]
    bits = [int(b) for b in rng.integers(0, 2, size=max(length, max(anchor, default=-1) + 1))]
    for i, bit in anchor.items():
        bits[i] = bit
    return GluePoint.y(CubePoint(prefix=tuple(bits), tail="alt"))
