"""Result models: displacement tables, pumps, oracle results and verdicts."""

from __future__ import annotations

import math
from enum import StrEnum
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from pvas_bound.models.flowtree import Certificate
from pvas_bound.models.grammar import ParseTree


def _coerce_ext_int(value: object) -> int | float:
    if value in ("-inf", "+inf", "inf"):
        return -math.inf if value == "-inf" else math.inf
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"expected an integer, '-inf' or '+inf', got {value!r}")
    return value


def _dump_ext_int(value: int | float) -> int | str:
    if value == math.inf:
        return "+inf"
    if value == -math.inf:
        return "-inf"
    return int(value)


# An integer, -inf or +inf.
ExtInt = Annotated[
    int | float,
    BeforeValidator(_coerce_ext_int),
    PlainSerializer(_dump_ext_int, when_used="json"),
]


class DisplacementTable(BaseModel):
    """Best achievable yield sum per nonterminal."""

    model_config = ConfigDict(frozen=True)

    values: dict[str, ExtInt]
    rounds: int = 0

    def __getitem__(self, nonterminal: str) -> int | float:
        return self.values[nonterminal]

    def is_infinite(self, nonterminal: str) -> bool:
        return self.values[nonterminal] == math.inf


class PumpWitness(BaseModel):
    """A tree ``X =>* u X v`` with a positive sum of ``u v`` and a context reaching X."""

    model_config = ConfigDict(frozen=True)

    anchor: str
    pump_tree: ParseTree
    context_tree: ParseTree
    gain: int


class OracleResult(BaseModel):
    """Exact reachability set under a value budget."""

    model_config = ConfigDict(frozen=True)

    closed: bool
    values: tuple[int, ...] = ()
    capped_at: int

    @property
    def max_value(self) -> int | None:
        return max(self.values) if self.values else None

    def to_json(self) -> dict[str, Any]:
        return {
            "closed": self.closed,
            "values": list(self.values),
            "max": self.max_value,
            "capped_at": None if self.closed else self.capped_at,
        }


class VerdictKind(StrEnum):
    UNBOUNDED = "unbounded"
    BOUNDED = "bounded"
    INCONCLUSIVE = "inconclusive"


class BoundedProof(StrEnum):
    ORACLE_CLOSURE = "oracle-closure"
    CAP_EXHAUSTED = "cap-exhausted"


class Verdict(BaseModel):
    """Outcome of the boundedness decision."""

    model_config = ConfigDict(frozen=True)

    kind: VerdictKind
    proof: BoundedProof | None = None
    certificate: Certificate | None = None
    reach_set: tuple[int, ...] | None = None
    cap: int | None = None
    budgets: dict[str, list[int]] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)

    @property
    def is_definitive(self) -> bool:
        return self.kind is not VerdictKind.INCONCLUSIVE

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"verdict": self.kind.value, "budgets": self.budgets}
        if self.proof is not None:
            doc["proof"] = self.proof.value
        if self.certificate is not None:
            doc["certificate"] = self.certificate.model_dump(mode="json")
        if self.reach_set is not None:
            doc["reach_set"] = list(self.reach_set)
        if self.cap is not None:
            doc["cap"] = self.cap
        if self.warnings:
            doc["warnings"] = self.warnings
        return doc
