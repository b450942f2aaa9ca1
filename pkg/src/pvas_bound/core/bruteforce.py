"""Exhaustive certificate enumeration for tiny instances.

Every annotation ranges over {-inf} and 0..max_value. Subtrees hanging off the path
from the root to t are represented by the set of every (in, out) pair some annotated
subtree of bounded height can show at its root. Nodes on the path are enumerated
annotation by annotation.

Heights count nonterminal levels: a lone ``X -> a`` subtree has height 1.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import TYPE_CHECKING

from pvas_bound.core.errors import GuardError
from pvas_bound.models.flowtree import NEG_INF, Certificate, FlowTree

if TYPE_CHECKING:
    from collections.abc import Iterator

    from pvas_bound.models.grammar import NodePath, NormalizedGvas, Rule

logger = logging.getLogger(__name__)

MAX_SIZE = 3
MAX_BOUND = 8

Ext = int | float
Pair = tuple[Ext, Ext]
# (symbol, input, output, depth) of a node on the path from the root to t.
State = tuple[str, Ext, Ext, int]
# (rule index, position of the path child, annotation pair of its sibling)
Move = tuple[int, int, Pair]
# (rule index, leaf pair or left child pair, right child pair or None for a leaf)
_Origin = tuple[int, Pair, Pair | None]


class _Subtrees:
    """Every feasible root pair per nonterminal, for each height up to ``max_height``."""

    def __init__(self, gvas: NormalizedGvas, max_height: int, max_value: int) -> None:
        self.gvas = gvas
        self.domain: tuple[Ext, ...] = (NEG_INF, *range(max_value + 1))
        self.pairs: list[dict[str, list[Pair]]] = [{}]
        self.origin: dict[tuple[str, Pair], _Origin] = {}
        for _ in range(max_height):
            self._grow()

    def _widen(self, core: Pair) -> Iterator[Pair]:
        """Root pairs over a first-child input and last-child output."""
        low, high = core
        for value in self.domain:
            if low <= value:
                for out in self.domain:
                    if out <= high:
                        yield value, out

    def _cores(
        self, index: int, rule: Rule, below: dict[str, list[Pair]]
    ) -> Iterator[tuple[Pair, _Origin]]:
        if not rule.is_binary:
            shift = int(rule.rhs[0]) if rule.rhs else 0
            for leaf_in in self.domain:
                for leaf_out in self.domain:
                    if leaf_out <= leaf_in + shift:
                        yield (leaf_in, leaf_out), (index, (leaf_in, leaf_out), None)
            return
        left, right = str(rule.rhs[0]), str(rule.rhs[1])
        if left not in below or right not in below:
            return
        for first in below[left]:
            for second in below[right]:
                if second[0] <= first[1]:
                    yield (first[0], second[1]), (index, first, second)

    def _grow(self) -> None:
        below = self.pairs[-1]
        grown: dict[str, set[Pair]] = {name: set(pairs) for name, pairs in below.items()}
        for index, rule in enumerate(self.gvas.rules):
            found = grown.setdefault(rule.lhs, set())
            for core, origin in self._cores(index, rule, below):
                # found is closed under widening, so a known core adds nothing
                if core in found:
                    continue
                for pair in self._widen(core):
                    if pair not in found:
                        found.add(pair)
                        self.origin.setdefault((rule.lhs, pair), origin)
        self.pairs.append({name: sorted(pairs) for name, pairs in grown.items() if pairs})

    def at(self, height: int) -> dict[str, list[Pair]]:
        return self.pairs[min(height, len(self.pairs) - 1)] if height > 0 else {}

    def feasible(self, name: str, pair: Pair, height: int) -> bool:
        return pair in self.at(height).get(name, ())

    def witness(self, name: str, pair: Pair) -> FlowTree:
        index, first, second = self.origin[(name, pair)]
        rule = self.gvas.rules[index]
        value, out = pair
        if second is None:
            action = int(rule.rhs[0]) if rule.rhs else None
            leaf = FlowTree(symbol=action, in_value=first[0], out_value=first[1])
            return FlowTree(symbol=name, in_value=value, out_value=out, children=(leaf,))
        children = (self.witness(str(rule.rhs[0]), first), self.witness(str(rule.rhs[1]), second))
        return FlowTree(symbol=name, in_value=value, out_value=out, children=children)


class _Enumeration:
    def __init__(self, gvas: NormalizedGvas, max_height: int, max_value: int) -> None:
        self.gvas = gvas
        self.height = max_height
        self.subtrees = _Subtrees(gvas, max_height, max_value)
        self._siblings: dict[tuple[int, str, Ext, Ext], Pair | None] = {}
        self._below: dict[tuple[str, State], frozenset[Pair]] = {}

    def _sibling(self, height: int, name: str, most_in: Ext, least_out: Ext) -> Pair | None:
        """Some feasible pair with in <= most_in and out >= least_out."""
        key = (height, name, most_in, least_out)
        if key not in self._siblings:
            self._siblings[key] = next(
                (
                    pair
                    for pair in self.subtrees.at(height).get(name, ())
                    if pair[0] <= most_in and least_out <= pair[1]
                ),
                None,
            )
        return self._siblings[key]

    def moves(self, state: State) -> Iterator[tuple[State, Move]]:
        name, value, out, depth = state
        budget = self.height - depth - 1
        domain = self.subtrees.domain
        if budget < 1:
            return
        for index, rule in self.gvas.grammar.rules_for(name):
            if not rule.is_binary:
                continue
            left, right = str(rule.rhs[0]), str(rule.rhs[1])
            for child_in in domain:
                if child_in <= value:
                    for child_out in domain:
                        sibling = self._sibling(budget, right, child_out, out)
                        if sibling is not None:
                            yield (left, child_in, child_out, depth + 1), (index, 0, sibling)
            for child_out in domain:
                if out <= child_out:
                    for child_in in domain:
                        sibling = self._sibling(budget, left, value, child_in)
                        if sibling is not None:
                            yield (right, child_in, child_out, depth + 1), (index, 1, sibling)

    def _fits(self, target: str, state: State) -> bool:
        name, value, out, depth = state
        return name == target and self.subtrees.feasible(name, (value, out), self.height - depth)

    def below(self, target: str, state: State) -> frozenset[Pair]:
        """(in, out) of every completable ``target`` node strictly below ``state``."""
        key = (target, state)
        if key not in self._below:
            found: set[Pair] = set()
            for child, _ in self.moves(state):
                if self._fits(target, child):
                    found.add((child[1], child[2]))
                found |= self.below(target, child)
            self._below[key] = frozenset(found)
        return self._below[key]

    def upper(self) -> dict[State, tuple[State, Move] | None]:
        """Every path node reachable from a root annotation, with its parent link."""
        roots = [(self.gvas.start, self.gvas.c_init, out, 0) for out in self.subtrees.domain]
        parents: dict[State, tuple[State, Move] | None] = dict.fromkeys(roots)
        queue = deque(roots)
        while queue:
            state = queue.popleft()
            for child, move in self.moves(state):
                if child not in parents:
                    parents[child] = (state, move)
                    queue.append(child)
        return parents

    def lower_path(self, start: State, goal: Pair) -> tuple[list[tuple[State, Move]], State]:
        target = start[0]
        parents: dict[State, tuple[State, Move]] = {}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            for child, move in self.moves(state):
                if child in parents:
                    continue
                parents[child] = (state, move)
                if self._fits(target, child) and (child[1], child[2]) == goal:
                    path: list[tuple[State, Move]] = []
                    cursor = child
                    while cursor != start:
                        previous, step = parents[cursor]
                        path.append((previous, step))
                        cursor = previous
                    path.reverse()
                    return path, child
                queue.append(child)
        raise AssertionError("goal pair was reported reachable")

    def _attach(self, parent: State, move: Move, node: FlowTree) -> FlowTree:
        name, value, out, _ = parent
        index, position, sibling = move
        rule = self.gvas.rules[index]
        if position == 0:
            children = (node, self.subtrees.witness(str(rule.rhs[1]), sibling))
        else:
            children = (self.subtrees.witness(str(rule.rhs[0]), sibling), node)
        return FlowTree(symbol=name, in_value=value, out_value=out, children=children)

    def build(
        self,
        upper: dict[State, tuple[State, Move] | None],
        s_state: State,
        lower: list[tuple[State, Move]],
        t_state: State,
    ) -> Certificate:
        name, t_value, t_out, _ = t_state
        node = self.subtrees.witness(name, (t_value, t_out))
        for parent, move in reversed(lower):
            node = self._attach(parent, move, node)
        positions: list[int] = []
        cursor = s_state
        while (link := upper[cursor]) is not None:
            parent, move = link
            node = self._attach(parent, move, node)
            positions.append(move[1])
            cursor = parent
        s_path: NodePath = tuple(reversed(positions))
        t_path: NodePath = s_path + tuple(move[1] for _, move in lower)
        return Certificate(flow=node, s=s_path, t=t_path)

    def run(self) -> Certificate | None:
        if self.gvas.c_init > self.subtrees.domain[-1]:
            return None
        upper = self.upper()
        for s_state in upper:
            name, value, out, _ = s_state
            for t_value, t_out in sorted(self.below(name, s_state)):
                if value <= t_value and (value < t_value or t_out < out):
                    lower, t_state = self.lower_path(s_state, (t_value, t_out))
                    return self.build(upper, s_state, lower, t_state)
        return None


def brute_force_certificate(
    gvas: NormalizedGvas, max_height: int, max_value: int
) -> Certificate | None:
    """First certificate in a fixed enumeration order among trees of height <= max_height
    with every annotation in {-inf} and 0..max_value; None when there is none."""
    if gvas.size > MAX_SIZE:
        raise GuardError(f"brute force needs |V| <= {MAX_SIZE}, got {gvas.size}")
    if max_height > MAX_BOUND or max_value > MAX_BOUND:
        raise GuardError(f"brute force bounds must be <= {MAX_BOUND}")
    cert = _Enumeration(gvas, max_height, max_value).run()
    logger.debug(
        "brute force (height %d, values %d): %s",
        max_height,
        max_value,
        "found" if cert is not None else "absent",
    )
    return cert
