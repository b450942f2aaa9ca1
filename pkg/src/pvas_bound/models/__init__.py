"""Data models for pvas-bound."""

from pvas_bound.models.flowtree import NEG_INF, Certificate, FlowTree, Rank, Violation
from pvas_bound.models.grammar import Grammar, Gvas, NormalizedGvas, ParseTree, Rule
from pvas_bound.models.pvas import Config, Pvas, ReachResult, StackOp, Transition, Truncation
from pvas_bound.models.verdict import (
    BoundedProof,
    DisplacementTable,
    OracleResult,
    PumpWitness,
    Verdict,
    VerdictKind,
)

__all__ = [
    "NEG_INF",
    "BoundedProof",
    "Certificate",
    "Config",
    "DisplacementTable",
    "FlowTree",
    "Grammar",
    "Gvas",
    "NormalizedGvas",
    "OracleResult",
    "ParseTree",
    "PumpWitness",
    "Pvas",
    "Rank",
    "ReachResult",
    "Rule",
    "StackOp",
    "Transition",
    "Truncation",
    "Verdict",
    "VerdictKind",
    "Violation",
]
