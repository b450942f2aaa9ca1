"""Tests for weak-CNF normalization."""

from __future__ import annotations

import itertools

import pytest

from pvas_bound.core.errors import EmptyLanguageError, GrammarError
from pvas_bound.core.grammar import member
from pvas_bound.core.normalize import expand_actions, normalize, to_weak_cnf
from pvas_bound.core.oracle import reachability_set
from pvas_bound.fixtures import ackermann_gvas, fixture_gvas
from pvas_bound.models.grammar import NormalizedGvas
from tests.conftest import make_gvas


class TestWeakCnf:
    def test_g1(self, g1_normalized: NormalizedGvas) -> None:
        assert g1_normalized.nonterminals == ("S", "@U")
        assert [str(r) for r in g1_normalized.rules] == ["S -> @U S", "S ->", "@U -> 1"]

    def test_binarizes_long_rules(self, ackermann1: NormalizedGvas) -> None:
        assert ackermann1.nonterminals == ("X_1", "X_0", "@N", "@P1", "@U")
        assert "X_1 -> @N @P1" in [str(r) for r in ackermann1.rules]
        assert "@P1 -> X_1 X_0" in [str(r) for r in ackermann1.rules]

    def test_unit_rules_inlined(self) -> None:
        gvas = normalize(make_gvas([("S", ("A",)), ("A", (1,)), ("A", ())], start="S"))
        assert [str(r) for r in gvas.rules if r.lhs == "S"] == ["S -> 1", "S ->"]
        assert gvas.grammar.is_weak_cnf

    def test_unit_cycle(self) -> None:
        gvas = normalize(make_gvas([("S", ("A",)), ("A", ("S",)), ("A", (0,))], start="S"))
        assert [str(r) for r in gvas.rules if r.lhs == "S"] == ["S -> 0"]

    def test_fresh_names_avoid_user_names(self) -> None:
        gvas = normalize(make_gvas([("S", (1, "@U")), ("@U", ())], start="S"))
        assert "@U.2" in gvas.nonterminals

    def test_rejects_large_actions(self) -> None:
        with pytest.raises(GrammarError):
            to_weak_cnf(make_gvas([("S", (3,))], start="S"))

    def test_empty_language(self) -> None:
        with pytest.raises(EmptyLanguageError):
            normalize(make_gvas([("S", ("S", "S"))], start="S"))

    def test_idempotent(self, ackermann2: NormalizedGvas) -> None:
        assert normalize(ackermann2) is ackermann2

    def test_size_is_linear(self) -> None:
        gvas = ackermann_gvas(4)
        normalized = normalize(gvas)
        assert normalized.size <= 4 * sum(len(r.rhs) + 1 for r in gvas.rules)


class TestExpandActions:
    def test_ladder(self) -> None:
        expanded = expand_actions(make_gvas([("S", (5,))], start="S"))
        rules = {str(r) for r in expanded.rules}
        assert "S -> @X+5" in rules
        assert "@X+5 -> @B+3 @B+1" in rules
        assert "@B+3 -> @B+2 @B+2" in rules
        assert "@B+1 -> 1" in rules

    def test_no_large_actions_is_identity(self, g1_normalized: NormalizedGvas) -> None:
        assert expand_actions(g1_normalized) is g1_normalized

    def test_negative_ladder(self) -> None:
        normalized = normalize(make_gvas([("S", (-2, 7))], start="S", c_init=4))
        assert set(normalized.grammar.actions) <= {-1, 0, 1}
        assert reachability_set(normalized, 32).values == (9,)


class TestPreservation:
    def test_languages_agree_on_short_words(self) -> None:
        raw = make_gvas([("S", (1, "S", -1)), ("S", ("A",)), ("A", (0,)), ("A", ())], start="S")
        normalized = normalize(raw)
        in_language = {(), (0,), (1, -1), (1, 0, -1), (1, 1, -1, -1)}
        for length in range(5):
            for word in itertools.product((-1, 0, 1), repeat=length):
                assert member(normalized, "S", word) == (word in in_language)

    def test_reachability_agrees_with_fixture(self) -> None:
        assert reachability_set(fixture_gvas("decreasing"), 16).values == (0, 1, 2, 3, 4, 5)
