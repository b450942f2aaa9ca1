"""Tests for grammar models, yields, productivity and membership."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from pvas_bound.core.errors import EmptyLanguageError, IncompleteTreeError, NotNormalizedError
from pvas_bound.core.grammar import (
    derivable_set,
    member,
    parse_word,
    prefix_closure_violations,
    productive_set,
    prune_nonproductive,
    shortest_tree,
    sum_of,
    yield_of,
)
from pvas_bound.core.normalize import normalize
from pvas_bound.models.grammar import Grammar, Gvas, NormalizedGvas, ParseTree, Rule
from tests.conftest import make_gvas


def _g1_tree(copies: int) -> ParseTree:
    tree = ParseTree(symbol="S", children=(ParseTree(symbol=None),))
    for _ in range(copies):
        tree = ParseTree(symbol="S", children=(ParseTree(symbol=1), tree))
    return tree


class TestRule:
    def test_shapes(self) -> None:
        assert Rule(lhs="S").is_epsilon
        assert Rule(lhs="S", rhs=("A", "B")).is_binary
        assert Rule(lhs="S", rhs=(-1,)).is_terminal
        assert not Rule(lhs="S", rhs=(1, "S")).is_binary

    def test_str(self) -> None:
        assert str(Rule(lhs="S", rhs=(1, "S"))) == "S -> 1 S"
        assert str(Rule(lhs="S")) == "S ->"


class TestGrammarValidation:
    def test_unknown_start(self) -> None:
        with pytest.raises(ValidationError):
            Grammar(nonterminals=("S",), start="T")

    def test_unknown_symbol(self) -> None:
        with pytest.raises(ValidationError):
            Grammar(nonterminals=("S",), rules=(Rule(lhs="S", rhs=("T",)),), start="S")

    def test_undeclared_action(self) -> None:
        with pytest.raises(ValidationError):
            Grammar(nonterminals=("S",), actions=(1,), rules=(Rule(lhs="S", rhs=(2,)),), start="S")

    def test_duplicate_nonterminal(self) -> None:
        with pytest.raises(ValidationError):
            Grammar(nonterminals=("S", "S"), start="S")

    def test_negative_c_init(self) -> None:
        grammar = Grammar(nonterminals=("S",), rules=(Rule(lhs="S"),), start="S")
        with pytest.raises(ValidationError):
            Gvas(grammar=grammar, c_init=-1)

    def test_normalized_rejects_long_rules(self, g1: Gvas) -> None:
        with pytest.raises(ValidationError):
            NormalizedGvas(grammar=g1.grammar, c_init=0)

    def test_rules_for_keeps_index_order(self) -> None:
        gvas = make_gvas([("S", (1,)), ("A", ()), ("S", ())], start="S")
        assert [index for index, _ in gvas.grammar.rules_for("S")] == [0, 2]


class TestYield:
    def test_g1_tree(self) -> None:
        assert yield_of(_g1_tree(3)) == (1, 1, 1)

    def test_epsilon_contributes_nothing(self) -> None:
        assert yield_of(_g1_tree(0)) == ()

    def test_incomplete_tree(self) -> None:
        tree = ParseTree(symbol="S", children=(ParseTree(symbol=1), ParseTree(symbol="S")))
        with pytest.raises(IncompleteTreeError) as info:
            yield_of(tree)
        assert info.value.path == (1,)

    @given(st.integers(min_value=0, max_value=30))
    def test_sum_counts_copies(self, copies: int) -> None:
        assert sum_of(yield_of(_g1_tree(copies))) == copies

    def test_tree_helpers(self) -> None:
        tree = _g1_tree(2)
        assert tree.height() == 4
        assert tree.is_complete
        hole = tree.replace((1, 1), ParseTree(symbol="S"))
        assert hole.nonterminal_leaves() == [(1, 1)]


class TestProductivity:
    def test_prune_drops_dead_symbols(self) -> None:
        gvas = make_gvas([("S", ("A",)), ("S", (1,)), ("A", ("A", 1))], start="S")
        assert productive_set(gvas) == {"S"}
        pruned = prune_nonproductive(gvas)
        assert pruned.nonterminals == ("S",)
        assert [str(r) for r in pruned.rules] == ["S -> 1"]

    def test_empty_language(self) -> None:
        gvas = make_gvas([("S", ("S", 1))], start="S")
        with pytest.raises(EmptyLanguageError):
            prune_nonproductive(gvas)

    def test_derivable_set(self) -> None:
        gvas = make_gvas([("S", (1,)), ("A", ("S",))], start="S")
        assert derivable_set(gvas) == {"S"}
        assert derivable_set(gvas.with_start("A")) == {"A", "S"}

    def test_shortest_tree_is_complete(self, ackermann2: NormalizedGvas) -> None:
        for name in ackermann2.nonterminals:
            tree = shortest_tree(ackermann2, name)
            assert tree.symbol == name
            assert tree.is_complete


class TestMembership:
    def test_member(self, g1_normalized: NormalizedGvas) -> None:
        assert member(g1_normalized, "S", (1, 1, 1))
        assert member(g1_normalized, "S", ())
        assert not member(g1_normalized, "S", (-1,))

    def test_parse_word_yields_the_word(self, ackermann1: NormalizedGvas) -> None:
        tree = parse_word(ackermann1, "X_1", (-1, 1, 1, 1))
        assert tree is not None
        assert yield_of(tree) == (-1, 1, 1, 1)
        assert parse_word(ackermann1, "X_1", (1,)) is None

    def test_needs_weak_cnf(self, g1: Gvas) -> None:
        with pytest.raises(NotNormalizedError):
            member(g1, "S", (1,))

    def test_prefix_closed_language(self, g1_normalized: NormalizedGvas) -> None:
        assert prefix_closure_violations(g1_normalized, 4) == []

    def test_prefix_violation(self) -> None:
        gvas = normalize(make_gvas([("S", (1, 1))], start="S"))
        assert prefix_closure_violations(gvas, 2) == [(1, 1)]
