"""Displacements, elementary trees, positive pumps and small witnesses."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from pvas_bound.core.errors import (
    EmptyLanguageError,
    NotDerivableError,
    NotFiniteError,
    PvasBoundError,
)
from pvas_bound.core.grammar import derivable_set, leaf_tree, rule_node, shortest_tree
from pvas_bound.models.flowtree import NEG_INF
from pvas_bound.models.grammar import RESERVED_PREFIX, NodePath, ParseTree
from pvas_bound.models.verdict import DisplacementTable, PumpWitness

if TYPE_CHECKING:
    from collections.abc import Sequence

    from pvas_bound.models.grammar import Gvas, NormalizedGvas, Rule

logger = logging.getLogger(__name__)

ExtValue = int | float


def _plus(left: ExtValue, right: ExtValue) -> ExtValue:
    # -inf absorbs, including against +inf (an unproductive sibling blocks the rule).
    if left == NEG_INF or right == NEG_INF:
        return NEG_INF
    return left + right


def _rule_value(rule: Rule, values: dict[str, ExtValue]) -> ExtValue:
    total: ExtValue = 0
    for sym in rule.rhs:
        total = _plus(total, sym if isinstance(sym, int) else values[sym])
    return total


def _jacobi_round(gvas: Gvas, values: dict[str, ExtValue]) -> dict[str, tuple[ExtValue, int]]:
    """One application of the max-plus operator: best value and first rule achieving it."""
    best: dict[str, tuple[ExtValue, int]] = {name: (NEG_INF, -1) for name in gvas.nonterminals}
    for index, rule in enumerate(gvas.rules):
        value = _rule_value(rule, values)
        if value > best[rule.lhs][0]:
            best[rule.lhs] = (value, index)
    return best


@dataclass
class _Solution:
    values: dict[str, ExtValue]
    # Rule that produced each finite value in the round it became final.
    rules: dict[str, int]
    rounds: int


def _solve(gvas: NormalizedGvas) -> _Solution:
    size = gvas.size
    threshold = 2 ** (size + 1)
    values: dict[str, ExtValue] = {name: NEG_INF for name in gvas.nonterminals}
    rules: dict[str, int] = {}
    round_no = 0
    while True:
        round_no += 1
        best = _jacobi_round(gvas, values)
        changed = False
        for name, (value, index) in best.items():
            if value <= values[name]:
                continue
            # A finite displacement is reached within |V| rounds by an elementary tree.
            if value > threshold or round_no > size + 1:
                value = math.inf
            if value != values[name]:
                values[name] = value
                rules[name] = index
                changed = True
        if not changed:
            break
    logger.debug("displacement fixpoint after %d rounds", round_no)
    return _Solution(values=values, rules=rules, rounds=round_no)


def displacement_table(gvas: NormalizedGvas) -> DisplacementTable:
    """Best yield sum per nonterminal, +inf when unbounded."""
    solution = _solve(gvas)
    for name, value in solution.values.items():
        if value == NEG_INF:
            raise EmptyLanguageError(name)
    return DisplacementTable(values=solution.values, rounds=solution.rounds)


class _BoundedTables:
    """Per-round best values and rules without promotion, for height-bounded trees."""

    def __init__(self, gvas: Gvas) -> None:
        self.gvas = gvas
        self.values: list[dict[str, ExtValue]] = [{name: NEG_INF for name in gvas.nonterminals}]
        self.rules: list[dict[str, int]] = [{}]

    def extend(self, height: int) -> None:
        while len(self.values) <= height:
            best = _jacobi_round(self.gvas, self.values[-1])
            self.values.append({name: value for name, (value, _) in best.items()})
            self.rules.append({name: index for name, (_, index) in best.items() if index >= 0})

    def at(self, height: int) -> dict[str, ExtValue]:
        self.extend(height)
        return self.values[height]

    def tree(self, nonterminal: str, height: int) -> ParseTree:
        self.extend(height)
        rule = self.gvas.rules[self.rules[height][nonterminal]]
        children = [
            leaf_tree(s) if isinstance(s, int) else self.tree(s, height - 1) for s in rule.rhs
        ]
        return rule_node(rule, children)


def bounded_displacement(gvas: Gvas, height: int) -> dict[str, ExtValue]:
    """Best yield sum over complete trees with at most ``height`` nonterminal levels."""
    return dict(_BoundedTables(gvas).at(height))


def elementary_tree(gvas: NormalizedGvas, nonterminal: str) -> ParseTree:
    """Complete tree without repeated nonterminals on a branch whose sum is the displacement."""
    solution = _solve(gvas)
    value = solution.values[nonterminal]
    if value == math.inf:
        raise NotFiniteError(
            f"displacement of {nonterminal!r} is +inf; use find_positive_pump instead"
        )
    if value == NEG_INF:
        raise EmptyLanguageError(nonterminal)

    def build(name: str) -> ParseTree:
        rule = gvas.rules[solution.rules[name]]
        return rule_node(rule, [leaf_tree(s) if isinstance(s, int) else build(s) for s in rule.rhs])

    return build(nonterminal)


@dataclass(frozen=True)
class _Edge:
    source: str
    target: str
    weight: int
    rule: int
    # Position of the path child in the rule's right-hand side.
    position: int


def _context_edges(gvas: Gvas, weights: dict[str, ExtValue], nodes: frozenset[str]) -> list[_Edge]:
    edges: list[_Edge] = []
    for index, rule in enumerate(gvas.rules):
        if rule.lhs not in nodes:
            continue
        for position, sym in enumerate(rule.rhs):
            if not isinstance(sym, str):
                continue
            weight: ExtValue = 0
            for other, side in enumerate(rule.rhs):
                if other != position:
                    weight = _plus(weight, side if isinstance(side, int) else weights[side])
            if weight == NEG_INF:
                continue
            edges.append(_Edge(rule.lhs, sym, int(weight), index, position))
    return edges


def _name_key(name: str) -> tuple[bool, str]:
    # User names before generated ones.
    return (name.startswith(RESERVED_PREFIX), name)


def _trace_cycle(pred: dict[str, _Edge], start: str) -> list[_Edge] | None:
    order: list[str] = []
    index: dict[str, int] = {}
    node = start
    while node not in index:
        if node not in pred:
            return None
        index[node] = len(order)
        order.append(node)
        node = pred[node].source
    cycle = [pred[name] for name in order[index[node] :]]
    cycle.reverse()
    if sum(edge.weight for edge in cycle) <= 0:
        return None
    anchor = min(range(len(cycle)), key=lambda i: _name_key(cycle[i].source))
    return cycle[anchor:] + cycle[:anchor]


def _positive_cycle(nodes: Sequence[str], edges: list[_Edge]) -> list[_Edge] | None:
    """Bellman-Ford on the max-plus graph; a relaxation in round |nodes| closes a cycle."""
    dist: dict[str, int] = {name: 0 for name in nodes}
    pred: dict[str, _Edge] = {}
    updated: set[str] = set()
    for _ in range(len(nodes)):
        updated = set()
        for edge in edges:
            candidate = dist[edge.source] + edge.weight
            if candidate > dist[edge.target]:
                dist[edge.target] = candidate
                pred[edge.target] = edge
                updated.add(edge.target)
        if not updated:
            return None
    for start in [*sorted(updated), *nodes]:
        cycle = _trace_cycle(pred, start)
        if cycle is not None:
            return cycle
    return None


def _splice_cycle(
    gvas: Gvas, cycle: list[_Edge], tables: _BoundedTables, height: int
) -> ParseTree:
    current = ParseTree(symbol=cycle[0].source)
    for edge in reversed(cycle):
        rule = gvas.rules[edge.rule]
        children = [
            current
            if pos == edge.position
            else leaf_tree(sym)
            if isinstance(sym, int)
            else tables.tree(sym, height)
            for pos, sym in enumerate(rule.rhs)
        ]
        current = ParseTree(symbol=edge.source, children=tuple(children))
    return current


def _leaf_sum(tree: ParseTree) -> int:
    return sum(node.symbol for _, node in tree.walk() if isinstance(node.symbol, int))


def find_positive_pump(gvas: NormalizedGvas) -> PumpWitness | None:
    """A derivable ``X =>* u X v`` with positive sum, present iff the start is unbounded.

    Side trees are best trees of growing height; the first height whose context graph
    has a positive cycle gives the pump.
    """
    table = displacement_table(gvas)
    if not table.is_infinite(gvas.start):
        return None
    nodes = sorted(derivable_set(gvas))
    tables = _BoundedTables(gvas)
    limit = 4 ** (gvas.size + 1)
    for height in range(1, limit + 1):
        edges = _context_edges(gvas, tables.at(height), frozenset(nodes))
        cycle = _positive_cycle(nodes, edges)
        if cycle is None:
            continue
        pump_tree = _splice_cycle(gvas, cycle, tables, height)
        anchor = cycle[0].source
        logger.debug("positive pump at %s, side height %d", anchor, height)
        return PumpWitness(
            anchor=anchor,
            pump_tree=pump_tree,
            context_tree=derivability_witness(gvas, anchor),
            gain=_leaf_sum(pump_tree),
        )
    raise PvasBoundError(f"no positive pump found up to side height {limit}")


def derivability_witness(gvas: Gvas, nonterminal: str) -> ParseTree:
    """Tree from the start symbol whose only nonterminal leaf is ``nonterminal``."""
    start = gvas.start
    parent: dict[str, tuple[str, int, int]] = {}
    seen = {start}
    frontier = [start]
    while frontier and nonterminal not in seen:
        nxt: list[str] = []
        for name in frontier:
            for index, rule in gvas.grammar.rules_for(name):
                for position, sym in enumerate(rule.rhs):
                    if isinstance(sym, str) and sym not in seen:
                        seen.add(sym)
                        parent[sym] = (name, index, position)
                        nxt.append(sym)
        frontier = nxt
    if nonterminal not in seen:
        raise NotDerivableError(f"{nonterminal!r} is not derivable from {start!r}")

    current = ParseTree(symbol=nonterminal)
    name = nonterminal
    while name != start:
        source, index, position = parent[name]
        rule = gvas.rules[index]
        children = [
            current
            if pos == position
            else leaf_tree(sym)
            if isinstance(sym, int)
            else shortest_tree(gvas, sym)
            for pos, sym in enumerate(rule.rhs)
        ]
        current = ParseTree(symbol=source, children=tuple(children))
        name = source
    return current


def _only_leaf(tree: ParseTree) -> NodePath:
    (path,) = tree.nonterminal_leaves()
    return path


def derive_witness(gvas: NormalizedGvas, starts: Sequence[str]) -> list[ParseTree]:
    """Complete trees, one per start, whose total sum has the sign of the summed displacements.

    When some displacement is +inf the pump is iterated the fewest times that makes the
    total positive.
    """
    if not starts:
        raise ValueError("derive_witness needs at least one start symbol")
    table = displacement_table(gvas)
    infinite = [j for j, name in enumerate(starts) if table.is_infinite(name)]
    if not infinite:
        return [elementary_tree(gvas, name) for name in starts]

    trees = [
        shortest_tree(gvas, name) if table.is_infinite(name) else elementary_tree(gvas, name)
        for name in starts
    ]
    chosen = infinite[0]
    local = gvas.with_start(starts[chosen])
    pump = find_positive_pump(local)
    assert pump is not None
    completion = shortest_tree(gvas, pump.anchor)
    context = pump.context_tree
    base = (
        sum(_leaf_sum(tree) for j, tree in enumerate(trees) if j != chosen)
        + _leaf_sum(context)
        + _leaf_sum(completion)
    )
    copies = max(0, -(-(1 - base) // pump.gain))
    pump_leaf = _only_leaf(pump.pump_tree)
    current = completion
    for _ in range(copies):
        current = pump.pump_tree.replace(pump_leaf, current)
    trees[chosen] = context.replace(_only_leaf(context), current)
    logger.info("derive_witness: %d pump copies at %s", copies, pump.anchor)
    return trees
