"""The boundedness decision loop."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field, field_validator

from pvas_bound.core.certsearch import find_certificate, theoretical_cap
from pvas_bound.core.errors import CapOverflowError, PvasBoundError
from pvas_bound.core.flowtree import validate_certificate
from pvas_bound.core.grammar import prefix_closure_violations
from pvas_bound.core.normalize import normalize
from pvas_bound.core.oracle import reachability_set
from pvas_bound.models.verdict import BoundedProof, Verdict, VerdictKind

if TYPE_CHECKING:
    from pvas_bound.models.grammar import Gvas, NormalizedGvas

logger = logging.getLogger(__name__)


class DecideOptions(BaseModel):
    """Budgets and switches for :func:`decide`."""

    model_config = ConfigDict(frozen=True)

    cap_schedule: tuple[int, ...] = (16, 64, 256)
    oracle_schedule: tuple[int, ...] = (64, 256, 1024)
    complete: bool = False
    pruning: bool = True
    check_prefix_closed: int = Field(default=0, ge=0)

    @field_validator("cap_schedule", "oracle_schedule")
    @classmethod
    def _positive(cls, schedule: tuple[int, ...]) -> tuple[int, ...]:
        if any(value <= 0 for value in schedule):
            raise ValueError("budgets must be positive")
        return schedule


def _full_cap(gvas: NormalizedGvas, required: bool) -> int | None:
    try:
        return theoretical_cap(gvas)
    except CapOverflowError:
        if required:
            raise
        return None


def _prefix_warnings(gvas: Gvas, normalized: NormalizedGvas, max_len: int) -> list[str]:
    # Ladder expansion splits a large action into unit steps, so its words are not
    # comparable with the source language.
    if any(isinstance(s, int) and abs(s) > 1 for rule in gvas.rules for s in rule.rhs):
        message = "prefix-closure check skipped: actions outside {-1, 0, 1}"
        logger.warning(message)
        return [message]
    found: list[str] = []
    for word in prefix_closure_violations(normalized, max_len):
        message = f"prefix-closure check: {list(word)} is derivable but a prefix is not"
        logger.warning(message)
        found.append(message)
    return found


class _Decision:
    def __init__(self, gvas: NormalizedGvas, options: DecideOptions, warnings: list[str]) -> None:
        self.gvas = gvas
        self.options = options
        self.warnings = warnings
        self.caps: list[int] = []
        self.budgets: list[int] = []
        self.full_cap = _full_cap(gvas, options.complete)

    def spent(self) -> dict[str, list[int]]:
        return {"caps": list(self.caps), "oracle": list(self.budgets)}

    def search(self, cap: int) -> Verdict | None:
        cap = max(cap, self.gvas.c_init)
        if self.full_cap is not None:
            cap = min(cap, self.full_cap)
        if cap in self.caps:
            return None
        self.caps.append(cap)
        cert = find_certificate(self.gvas, cap, pruning=self.options.pruning)
        if cert is not None:
            violations = validate_certificate(self.gvas, cert)
            if violations:
                raise PvasBoundError(
                    f"certificate search produced an invalid certificate: {violations[0].message}"
                )
            return Verdict(
                kind=VerdictKind.UNBOUNDED,
                certificate=cert,
                cap=cap,
                budgets=self.spent(),
                warnings=self.warnings,
            )
        if cap == self.full_cap:
            return Verdict(
                kind=VerdictKind.BOUNDED,
                proof=BoundedProof.CAP_EXHAUSTED,
                cap=cap,
                budgets=self.spent(),
                warnings=self.warnings,
            )
        return None

    def oracle(self, budget: int) -> Verdict | None:
        self.budgets.append(budget)
        result = reachability_set(self.gvas, budget)
        if not result.closed:
            return None
        return Verdict(
            kind=VerdictKind.BOUNDED,
            proof=BoundedProof.ORACLE_CLOSURE,
            reach_set=result.values,
            budgets=self.spent(),
            warnings=self.warnings,
        )

    def run(self) -> Verdict:
        caps, budgets = self.options.cap_schedule, self.options.oracle_schedule
        for index in range(max(len(caps), len(budgets))):
            if index < len(caps) and (verdict := self.search(caps[index])) is not None:
                return verdict
            if index < len(budgets) and (verdict := self.oracle(budgets[index])) is not None:
                return verdict
        if self.options.complete and self.full_cap is not None:
            cap = max(self.caps, default=16)
            while True:
                cap = min(4 * cap, self.full_cap)
                if (verdict := self.search(cap)) is not None:
                    return verdict
        return Verdict(
            kind=VerdictKind.INCONCLUSIVE,
            budgets=self.spent(),
            warnings=self.warnings,
        )


def decide(gvas: Gvas, options: DecideOptions | None = None) -> Verdict:
    """Unbounded with a checked certificate, Bounded by oracle closure or by an exhausted
    full cap, or Inconclusive with the budgets spent.

    The language of ``gvas`` is assumed prefix-closed; ``check_prefix_closed`` samples
    words up to that length and reports failures as warnings.
    """
    options = options or DecideOptions()
    normalized = normalize(gvas)
    logger.info(
        "decide: %d nonterminals, %d rules after normalization",
        normalized.size,
        len(normalized.rules),
    )
    warnings = (
        _prefix_warnings(gvas, normalized, options.check_prefix_closed)
        if options.check_prefix_closed
        else []
    )
    verdict = _Decision(normalized, options, warnings).run()
    logger.info("verdict: %s", verdict.kind.value)
    return verdict
