"""Tests for the budgeted reachability oracle."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvas_bound.adapters.generators import random_normalized
from pvas_bound.core.flowtree import validate_flow_tree
from pvas_bound.core.grammar import yield_of
from pvas_bound.core.normalize import normalize
from pvas_bound.core.oracle import ReachTable, max_reachable, reachability_set, replay
from pvas_bound.fixtures import ackermann, ackermann_gvas
from pvas_bound.models.grammar import Gvas, NormalizedGvas
from tests.conftest import make_gvas

# Module level: hypothesis does not mix with function-scoped fixtures.
_ACKERMANN1 = normalize(ackermann_gvas(1))
_ACKERMANN2 = normalize(ackermann_gvas(2))


class TestMaxReachable:
    def test_ackermann1(self, ackermann1: NormalizedGvas) -> None:
        assert max_reachable(ackermann1, "X_1", 5, 64) == 7

    def test_ackermann2(self, ackermann2: NormalizedGvas) -> None:
        assert max_reachable(ackermann2, "X_2", 2, 64) == 7
        assert max_reachable(ackermann2, "X_2", 3, 64) == 9

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=6))
    def test_ackermann_family(self, value: int) -> None:
        assert max_reachable(_ACKERMANN1, "X_1", value, 64) == ackermann(1, value)
        assert max_reachable(_ACKERMANN2, "X_2", value, 64) == ackermann(2, value)

    def test_capped(self, g1_normalized: NormalizedGvas) -> None:
        assert max_reachable(g1_normalized, "S", 0, 16) == "capped"

    def test_no_output(self) -> None:
        gvas = normalize(make_gvas([("S", (-1,))], start="S"))
        assert max_reachable(gvas, "S", 0, 8) == -math.inf


class TestReachabilitySet:
    def test_decreasing_closes(self) -> None:
        result = reachability_set(
            make_gvas([("S", (-1, "S")), ("S", ())], start="S", c_init=5), 64
        )
        assert result.closed
        assert result.values == (0, 1, 2, 3, 4, 5)
        assert result.to_json() == {
            "closed": True,
            "values": [0, 1, 2, 3, 4, 5],
            "max": 5,
            "capped_at": None,
        }

    def test_g1_is_capped(self, g1: Gvas) -> None:
        result = reachability_set(g1, 16)
        assert not result.closed
        assert result.values == tuple(range(17))
        assert result.to_json()["capped_at"] == 16

    def test_c_init_above_budget(self, decreasing: NormalizedGvas) -> None:
        result = reachability_set(decreasing, 3)
        assert not result.closed
        assert result.values == ()

    def test_budget_growth_is_monotone(self, ackermann2: NormalizedGvas) -> None:
        small = set(reachability_set(ackermann2.with_start("X_2", c_init=3), 6).values)
        large = set(reachability_set(ackermann2.with_start("X_2", c_init=3), 64).values)
        assert small <= large


class TestReachTable:
    def test_fixpoint(self, ackermann2: NormalizedGvas) -> None:
        table = ReachTable(ackermann2, 32, c_init=3)
        assert not table.capped
        assert table.is_fixpoint()
        assert max(table.reach_set) == 9

    def test_witness_realizes_pair(self, ackermann2: NormalizedGvas) -> None:
        table = ReachTable(ackermann2, 32, c_init=3)
        flow = table.witness("X_2", 3, 9)
        assert (flow.in_value, flow.out_value) == (3, 9)
        assert validate_flow_tree(ackermann2.with_start("X_2", c_init=3), flow) == []

    def test_outputs_of_unexplored_pair(self, ackermann1: NormalizedGvas) -> None:
        table = ReachTable(ackermann1, 8)
        assert table.outputs("X_0", 99) == frozenset()
        assert ("X_1", 0) in set(table.pairs())

    @pytest.mark.parametrize("seed", range(40))
    def test_witness_words_replay(self, seed: int) -> None:
        gvas = random_normalized(seed)
        table = ReachTable(gvas, 16)
        entries = [
            (name, value, out)
            for name, value in sorted(table.pairs())
            for out in sorted(table.outputs(name, value))
        ][:50]
        for name, value, out in entries:
            flow = table.witness(name, value, out)
            assert replay(value, yield_of(flow.parse_tree()), budget=16) == out
            assert validate_flow_tree(gvas.with_start(name, c_init=value), flow) == []


class TestReplay:
    def test_exact_semantics(self) -> None:
        assert replay(0, [1, 1, -1]) == 1
        assert replay(1, [-1, -1, 1]) is None

    def test_budget(self) -> None:
        assert replay(2, [1, 1], budget=3) is None
        assert replay(2, [1, -1], budget=3) == 2
