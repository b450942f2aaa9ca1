"""Tests for the exhaustive certificate enumeration."""

from __future__ import annotations

import pytest

from pvas_bound.adapters.generators import random_normalized
from pvas_bound.core.bruteforce import MAX_BOUND, _Subtrees, brute_force_certificate
from pvas_bound.core.errors import GuardError
from pvas_bound.core.flowtree import validate_certificate, validate_flow_tree
from pvas_bound.core.normalize import normalize
from pvas_bound.models.flowtree import NEG_INF
from pvas_bound.models.grammar import NormalizedGvas
from tests.conftest import make_gvas


class TestGuards:
    def test_size_guard(self, ackermann1: NormalizedGvas) -> None:
        with pytest.raises(GuardError):
            brute_force_certificate(ackermann1, 4, 4)

    def test_bound_guard(self, g1_normalized: NormalizedGvas) -> None:
        with pytest.raises(GuardError):
            brute_force_certificate(g1_normalized, MAX_BOUND + 1, 4)
        with pytest.raises(GuardError):
            brute_force_certificate(g1_normalized, 4, MAX_BOUND + 1)


class TestEnumeration:
    def test_g1(self, g1_normalized: NormalizedGvas) -> None:
        cert = brute_force_certificate(g1_normalized, 4, 4)
        assert cert is not None
        assert validate_certificate(g1_normalized, cert) == []
        assert cert.s == ()
        assert cert.t == (1,)

    def test_decreasing(self, decreasing: NormalizedGvas) -> None:
        assert brute_force_certificate(decreasing.with_start("S", c_init=3), 6, 6) is None

    def test_c_init_out_of_range(self, g1_normalized: NormalizedGvas) -> None:
        assert brute_force_certificate(g1_normalized.with_start("S", c_init=7), 4, 4) is None

    def test_left_recursion(self) -> None:
        gvas = normalize(make_gvas([("S", ("S", "U")), ("S", ()), ("U", (1,))], start="S"))
        cert = brute_force_certificate(gvas, 5, 5)
        assert cert is not None
        assert validate_certificate(gvas, cert) == []

    def test_height_too_small(self, g1_normalized: NormalizedGvas) -> None:
        assert brute_force_certificate(g1_normalized, 1, 4) is None


class TestSubtreePairs:
    def test_every_lossy_pair_is_kept(self, g1_normalized: NormalizedGvas) -> None:
        pairs = _Subtrees(g1_normalized, 1, 4).at(1)["@U"]
        assert (2, 3) in pairs
        assert (2, 0) in pairs
        assert (2, NEG_INF) in pairs
        assert (2, 4) not in pairs
        assert (NEG_INF, NEG_INF) in pairs
        assert (NEG_INF, 0) not in pairs

    def test_witnesses_carry_their_pair(self, g1_normalized: NormalizedGvas) -> None:
        subtrees = _Subtrees(g1_normalized, 3, 4)
        for name, pairs in subtrees.at(3).items():
            for value, out in pairs:
                tree = subtrees.witness(name, (value, out))
                assert (tree.in_value, tree.out_value) == (value, out)
                if value != NEG_INF:
                    rooted = g1_normalized.with_start(name, c_init=int(value))
                    assert validate_flow_tree(rooted, tree) == []

    def test_heights_are_cumulative(self, g1_normalized: NormalizedGvas) -> None:
        subtrees = _Subtrees(g1_normalized, 4, 4)
        for height in range(1, 4):
            for name, pairs in subtrees.at(height).items():
                assert set(pairs) <= set(subtrees.at(height + 1)[name])


class TestExhaustive:
    def test_minus_infinity_ancestor(self) -> None:
        # below the root every S input is -inf
        gvas = normalize(make_gvas([("S", ("A", "S")), ("S", (1,)), ("A", (-1,))], start="S"))
        assert brute_force_certificate(gvas, 6, 6) is None

    @pytest.mark.parametrize("seed", range(30))
    def test_larger_bounds_keep_certificates(self, seed: int) -> None:
        gvas = random_normalized(seed, size=3)
        small = brute_force_certificate(gvas, 4, 4)
        large = brute_force_certificate(gvas, 6, 6)
        if small is not None:
            assert validate_certificate(gvas, small) == []
            assert large is not None
        if large is not None:
            assert validate_certificate(gvas, large) == []
