from pathlib import Path
from typing import Any, Literal

import orjson
from pydantic import BaseModel, ConfigDict, Field, field_validator

from au.config import AU__RNG_ALGORITHM, REPORT_SCHEMA_VERSION
from au.reaping.enumsets import named_set, naturals

Subcommand = Literal["cantor", "bing", "extend", "star", "splitting"]


class RunConfig(BaseModel):
    """Everything a subcommand run depends on.

    Bounds have defaults for every subcommand; each run reads only its own.
    """

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    seed: int = Field(0, ge=0)
    output_format: Literal["text", "json"] = "json"
    output: Path | None = None
    verdict_log: Path | None = None

    # cantor
    pairs: int = Field(100, ge=0)
    arity: int = Field(5, ge=2)
    index_bound: int = Field(16, ge=1)
    tail_limit: int = Field(128, ge=1)
    oracle_limit: int = Field(20, ge=1)
    points: int = Field(8, ge=0)
    samples: int = Field(200, ge=0)

    # bing
    grid_denominator: int = Field(50, ge=1)

    # extend
    stages: int = Field(4, ge=0)
    budget: int = Field(16, ge=1)
    scan: int = Field(512, ge=1)
    depth: int = Field(3, ge=0)
    progress: int = Field(8, ge=0)
    sweeps: int = Field(2, ge=0)
    universe: Literal["naturals", "rationals"] = "naturals"
    sets: tuple[str, str] | None = None
    base: tuple[str, ...] = ()

    # star
    K: int = Field(64, ge=1)
    M: int = Field(8, ge=1)
    t: int = Field(1, ge=0)
    trials: int = Field(100, ge=0)
    fragment: Path | None = None
    dump: Path | None = None

    # splitting
    families: int = Field(100, ge=0)
    ground: int = Field(256, ge=1)

    @field_validator("sets", "base")
    @classmethod
    def known_sets(cls, names: tuple[str, ...] | None) -> tuple[str, ...] | None:
        for name in names or ():
            named_set(naturals(), name)
        return names

    def report_fields(self) -> dict[str, Any]:
        """The fields that determine report contents."""
        return self.model_dump(mode="json", exclude={"output", "output_format", "verdict_log", "dump"})


class Check(BaseModel):
    name: str
    passed: bool
    detail: dict[str, Any] = {}


class RunReport(BaseModel):
    subcommand: Subcommand
    config: dict[str, Any]
    checks: list[Check] = []
    summary: dict[str, Any] = {}

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def to_json(self) -> bytes:
        payload = {
            "schema": REPORT_SCHEMA_VERSION,
            "rng": AU__RNG_ALGORITHM,
            "passed": self.passed,
            **self.model_dump(mode="json"),
        }
        return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS) + b"\n"

    def to_text(self) -> str:
        lines = [f"{self.subcommand}: {'ok' if self.passed else 'FAILED'}"]
        lines += [f"  {key} = {value}" for key, value in sorted(self.summary.items())]
        for check in self.failures:
            lines.append(f"  ✗ {check.name} {orjson.dumps(check.detail).decode()}")
        passed = sum(check.passed for check in self.checks)
        lines.append(f"  {passed}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"
