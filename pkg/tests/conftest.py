"""Shared test fixtures for pvas-bound."""

from __future__ import annotations

import pytest

from pvas_bound.core.normalize import normalize
from pvas_bound.fixtures import ackermann_gvas, fixture_gvas
from pvas_bound.models.grammar import Grammar, Gvas, NormalizedGvas, Rule


def make_gvas(rules: list[tuple[str, tuple[str | int, ...]]], start: str, c_init: int = 0) -> Gvas:
    """Small grammars from ``(lhs, rhs)`` pairs; nonterminals in first-appearance order."""
    names: dict[str, None] = {start: None}
    for lhs, rhs in rules:
        names.setdefault(lhs)
        for sym in rhs:
            if isinstance(sym, str):
                names.setdefault(sym)
    actions = sorted({s for _, rhs in rules for s in rhs if isinstance(s, int)})
    grammar = Grammar(
        nonterminals=tuple(names),
        actions=tuple(actions),
        rules=tuple(Rule(lhs=lhs, rhs=rhs) for lhs, rhs in rules),
        start=start,
    )
    return Gvas(grammar=grammar, c_init=c_init)


@pytest.fixture
def g1() -> Gvas:
    return fixture_gvas("g1")


@pytest.fixture
def g1_normalized(g1: Gvas) -> NormalizedGvas:
    return normalize(g1)


@pytest.fixture
def decreasing() -> NormalizedGvas:
    return normalize(fixture_gvas("decreasing"))


@pytest.fixture
def ackermann1() -> NormalizedGvas:
    return normalize(ackermann_gvas(1))


@pytest.fixture
def ackermann2() -> NormalizedGvas:
    return normalize(ackermann_gvas(2))


@pytest.fixture
def ackermann1_init5() -> Gvas:
    return fixture_gvas("ackermann1_init5")
