"""Seeded cross-checks between independent routines."""

from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvas_bound.adapters.generators import random_gvas, random_normalized, random_pvas
from pvas_bound.core.bruteforce import brute_force_certificate
from pvas_bound.core.certsearch import find_certificate
from pvas_bound.core.decide import DecideOptions, decide
from pvas_bound.core.displacement import derive_witness, displacement_table
from pvas_bound.core.flowtree import validate_certificate
from pvas_bound.core.grammar import member, prefix_closure_violations, sum_of, yield_of
from pvas_bound.core.normalize import normalize
from pvas_bound.core.oracle import reachability_set
from pvas_bound.core.pvas import bfs_reach, reduce_to_gvas
from pvas_bound.fixtures import fixture_gvas, fixture_pvas
from pvas_bound.models.grammar import Gvas, Word
from pvas_bound.models.verdict import BoundedProof, Verdict, VerdictKind

AGREEMENT_SEEDS = range(200)
PVAS_SEEDS = range(100)
MAX_WORD = 4


def _words_up_to(gvas: Gvas, max_len: int) -> set[Word]:
    """Every word of length <= max_len derivable from the start, by a bounded fixpoint."""
    lang: dict[str, set[Word]] = {name: set() for name in gvas.nonterminals}
    changed = True
    while changed:
        changed = False
        for rule in gvas.rules:
            words: set[Word] = {()}
            for sym in rule.rhs:
                part = {(sym,)} if isinstance(sym, int) else lang[sym]
                words = {u + v for u in words for v in part if len(u) + len(v) <= max_len}
            fresh = words - lang[rule.lhs]
            if fresh:
                lang[rule.lhs] |= fresh
                changed = True
    return lang[gvas.start]


class TestSearchAgreesWithBruteForce:
    @pytest.mark.parametrize("seed", AGREEMENT_SEEDS)
    def test_small_certificates_are_found(self, seed: int) -> None:
        gvas = random_normalized(seed, size=3)
        brute = brute_force_certificate(gvas, max_height=6, max_value=6)
        found = find_certificate(gvas, 6, pruning=False)
        if brute is not None:
            assert validate_certificate(gvas, brute) == []
            assert found is not None
        if found is not None:
            assert validate_certificate(gvas, found) == []

    @pytest.mark.parametrize("seed", AGREEMENT_SEEDS)
    @pytest.mark.parametrize("cap", [4, 6])
    def test_pruning_keeps_presence(self, seed: int, cap: int) -> None:
        gvas = random_normalized(seed, size=3)
        pruned = find_certificate(gvas, cap, pruning=True)
        full = find_certificate(gvas, cap, pruning=False)
        assert (pruned is None) == (full is None)
        if pruned is not None:
            assert validate_certificate(gvas, pruned) == []


class TestReductionAgreesWithSimulation:
    @pytest.mark.parametrize("seed", PVAS_SEEDS)
    def test_counter_values(self, seed: int) -> None:
        pvas = random_pvas(seed)
        result = reachability_set(reduce_to_gvas(pvas), 30)
        simulated = bfs_reach(pvas, max_counter=30, max_stack=12)
        values = simulated.counter_values()
        if simulated.truncated.stack or simulated.truncated.configs:
            assert values <= set(result.values)
        else:
            assert values == set(result.values)
        if result.closed:
            assert not simulated.truncated.counter

    @pytest.mark.parametrize("seed", PVAS_SEEDS)
    def test_reduced_grammar_is_prefix_closed(self, seed: int) -> None:
        normalized = normalize(reduce_to_gvas(random_pvas(seed)))
        assert prefix_closure_violations(normalized, 5) == []


class TestNormalizationPreservesWords:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=100_000))
    def test_short_words(self, seed: int) -> None:
        raw = random_gvas(seed, size=3, max_action=1, max_rhs=3)
        expected = _words_up_to(raw, MAX_WORD)
        normalized = normalize(raw)
        for length in range(MAX_WORD + 1):
            for word in itertools.product((-1, 0, 1), repeat=length):
                assert member(normalized, normalized.start, word) == (word in expected)


def _raw_reach(gvas: Gvas, budget: int) -> set[int]:
    """Reach set straight from the unnormalized rules, over runs that stay within the budget."""
    rel: dict[str, set[tuple[int, int]]] = {name: set() for name in gvas.nonterminals}
    changed = True
    while changed:
        changed = False
        for rule in gvas.rules:
            pairs = {(c, c) for c in range(budget + 1)}
            for sym in rule.rhs:
                if isinstance(sym, int):
                    pairs = {(c, d + sym) for c, d in pairs if 0 <= d + sym <= budget}
                else:
                    outputs: dict[int, list[int]] = {}
                    for d, e in rel[sym]:
                        outputs.setdefault(d, []).append(e)
                    pairs = {(c, e) for c, d in pairs for e in outputs.get(d, ())}
            if not pairs <= rel[rule.lhs]:
                rel[rule.lhs] |= pairs
                changed = True
    return {e for c, e in rel[gvas.start] if c == gvas.c_init}


class TestNormalizationPreservesReachability:
    @pytest.mark.parametrize("seed", range(50))
    def test_large_actions(self, seed: int) -> None:
        raw = random_gvas(seed, size=3, max_action=4, max_rhs=3)
        expected = _raw_reach(raw, 40)
        result = reachability_set(raw, 40)
        if result.closed:
            assert set(result.values) == expected


class TestDeriveWitness:
    @pytest.mark.parametrize("seed", range(100))
    def test_size_and_sign(self, seed: int) -> None:
        rng = random.Random(seed)
        gvas = random_normalized(seed, size=rng.randint(1, 4))
        starts = [rng.choice(gvas.nonterminals) for _ in range(rng.randint(1, 3))]
        table = displacement_table(gvas)
        trees = derive_witness(gvas, starts)
        assert [tree.symbol for tree in trees] == starts
        assert all(tree.is_complete for tree in trees)
        nodes = sum(tree.node_count() for tree in trees)
        assert nodes <= 3 * len(starts) * 4 ** (gvas.size + 1)
        total = sum(sum_of(yield_of(tree)) for tree in trees)
        expected = sum(table[name] for name in starts)
        if expected == math.inf:
            assert total > 0
        elif expected == 0:
            assert total == 0
        else:
            assert total == expected


CONSISTENCY_OPTIONS = DecideOptions(cap_schedule=(8,), oracle_schedule=(64,))


def _assert_consistent(gvas: Gvas, verdict: Verdict) -> None:
    """A verdict never contradicts a wider oracle run or its own certificate."""
    wide = reachability_set(gvas, 256)
    if verdict.kind is VerdictKind.UNBOUNDED:
        assert verdict.certificate is not None
        assert validate_certificate(normalize(gvas), verdict.certificate) == []
        assert not wide.closed
    elif verdict.proof is BoundedProof.ORACLE_CLOSURE:
        assert wide.closed
        assert verdict.reach_set == wide.values


class TestVerdictConsistency:
    @pytest.mark.parametrize("seed", PVAS_SEEDS)
    def test_reduced_pvas(self, seed: int) -> None:
        gvas = reduce_to_gvas(random_pvas(seed))
        verdict = decide(gvas, CONSISTENCY_OPTIONS)
        _assert_consistent(gvas, verdict)
        if verdict.kind is VerdictKind.UNBOUNDED:
            # prefix-closed, so every reached value is a reach-set member
            maxima = [max(reachability_set(gvas, n).values) for n in (10, 20, 40)]
            assert maxima[0] < maxima[1] < maxima[2]

    @pytest.mark.parametrize("seed", range(100))
    def test_random_normalized(self, seed: int) -> None:
        gvas = random_normalized(seed, size=3)
        _assert_consistent(gvas, decide(gvas, CONSISTENCY_OPTIONS))

    @pytest.mark.parametrize("seed", range(100))
    def test_random_gvas(self, seed: int) -> None:
        gvas = random_gvas(seed, size=3, max_action=2, max_rhs=3)
        _assert_consistent(gvas, decide(gvas, CONSISTENCY_OPTIONS))

    @pytest.mark.parametrize(
        "name", ["g1", "decreasing", "ackermann1", "ackermann2", "ackermann1_init5"]
    )
    def test_fixture_grammars(self, name: str) -> None:
        gvas = fixture_gvas(name)
        _assert_consistent(gvas, decide(gvas))

    @pytest.mark.parametrize("name", ["doubling", "ackermann0", "ackermann1"])
    def test_fixture_pvas(self, name: str) -> None:
        gvas = reduce_to_gvas(fixture_pvas(name))
        _assert_consistent(gvas, decide(gvas))
