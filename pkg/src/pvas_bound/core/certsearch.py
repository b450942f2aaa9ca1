"""Lossy max-output tables and the capped certificate search."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeVar

import numpy as np
import numpy.typing as npt

from pvas_bound.core.errors import CapOverflowError
from pvas_bound.core.grammar import shortest_tree
from pvas_bound.models.flowtree import NEG_INF, Certificate, FlowTree

if TYPE_CHECKING:
    from collections.abc import Iterator

    from pvas_bound.models.grammar import Gvas, NodePath, NormalizedGvas, ParseTree

logger = logging.getLogger(__name__)

Row = npt.NDArray[np.int64]

# -inf inside the dense tables.
BOTTOM = -1
MAX_CAP = 2**63 - 1


def _compose(row: Row, inputs: Row) -> Row:
    return np.where(inputs >= 0, row[np.maximum(inputs, 0)], BOTTOM)


def theoretical_cap(gvas: Gvas) -> int:
    """``c_init + 4^(4(|V|+1))``: certificates with values up to here suffice."""
    cap = gvas.c_init + 4 ** (4 * (gvas.size + 1))
    if cap > MAX_CAP:
        raise CapOverflowError(
            f"theoretical cap for |V|={gvas.size} exceeds 64-bit range; pass an explicit --cap"
        )
    return cap


class MaxOutTable:
    """``MO(X, c)``: the largest output of a flow subtree at X with input c, values <= cap.

    Computed as a Gauss-Seidel fixpoint, one rule application per clock tick. Each
    improvement is kept as a version ``(tick, value, rule)``, so a version only depends
    on strictly older versions of its children and realization terminates.
    """

    def __init__(self, gvas: NormalizedGvas, cap: int) -> None:
        if cap < gvas.c_init:
            raise ValueError(f"cap {cap} is below c_init {gvas.c_init}")
        self.gvas = gvas
        self.cap = cap
        self._rows: dict[str, Row] = {
            name: np.full(cap + 1, BOTTOM, dtype=np.int64) for name in gvas.nonterminals
        }
        self._history: dict[tuple[str, int], list[tuple[int, int, int]]] = {}
        self._bottoms: dict[str, ParseTree] = {}
        self._clock = 0
        self.sweeps = self._solve()
        for row in self._rows.values():
            row.flags.writeable = False

    def _solve(self) -> int:
        inputs = np.arange(self.cap + 1, dtype=np.int64)
        sweeps = 0
        changed = True
        while changed:
            changed = False
            sweeps += 1
            for index, rule in enumerate(self.gvas.rules):
                self._clock += 1
                if rule.is_epsilon:
                    candidate = inputs
                elif rule.is_terminal:
                    shifted = inputs + int(rule.rhs[0])
                    candidate = np.where(shifted >= 0, np.minimum(shifted, self.cap), BOTTOM)
                else:
                    left, right = str(rule.rhs[0]), str(rule.rhs[1])
                    candidate = _compose(self._rows[right], self._rows[left])
                row = self._rows[rule.lhs]
                better = np.flatnonzero(candidate > row)
                if better.size == 0:
                    continue
                row[better] = candidate[better]
                for pos, value in zip(better.tolist(), candidate[better].tolist(), strict=True):
                    self._history.setdefault((rule.lhs, pos), []).append(
                        (self._clock, value, index)
                    )
                changed = True
        logger.debug("max-output table at cap %d: %d sweeps", self.cap, sweeps)
        return sweeps

    def row(self, nonterminal: str) -> Row:
        """Read-only outputs for inputs 0..cap; -1 stands for -inf."""
        return self._rows[nonterminal]

    def value(self, nonterminal: str, value: int | float) -> int | float:
        if value == NEG_INF:
            return NEG_INF
        out = int(self._rows[nonterminal][int(value)])
        return NEG_INF if out == BOTTOM else out

    def inverse(self, nonterminal: str, required: int) -> int | None:
        """Least input whose output reaches ``required``; rows are monotone."""
        pos = int(np.searchsorted(self._rows[nonterminal], required, side="left"))
        return pos if pos <= self.cap else None

    def bottom_tree(self, nonterminal: str) -> ParseTree:
        if nonterminal not in self._bottoms:
            self._bottoms[nonterminal] = shortest_tree(self.gvas, nonterminal)
        return self._bottoms[nonterminal]

    def _version(self, name: str, value: int, limit: int) -> tuple[int, int, int] | None:
        for version in reversed(self._history.get((name, value), [])):
            if version[0] < limit:
                return version
        return None

    def realize(self, nonterminal: str, value: int) -> FlowTree:
        """A valid flow subtree at ``nonterminal`` with in = value and out = MO(X, value)."""
        rules = self.gvas.rules
        built: list[FlowTree] = []
        stack: list[tuple[str, int, int, bool]] = [(nonterminal, value, self._clock + 1, False)]
        while stack:
            name, c, limit, expanded = stack.pop()
            version = self._version(name, c, limit)
            if version is None:
                built.append(FlowTree.bottom(self.bottom_tree(name), in_value=c))
                continue
            tick, out, index = version
            rule = rules[index]
            if not rule.is_binary:
                action = int(rule.rhs[0]) if rule.rhs else None
                leaf = FlowTree(symbol=action, in_value=c, out_value=out)
                built.append(FlowTree(symbol=name, in_value=c, out_value=out, children=(leaf,)))
            elif not expanded:
                left, right = str(rule.rhs[0]), str(rule.rhs[1])
                mid = self._version(left, c, tick)
                assert mid is not None
                stack.append((name, c, limit, True))
                stack.append((right, mid[1], tick, False))
                stack.append((left, c, tick, False))
            else:
                second = built.pop()
                first = built.pop()
                built.append(
                    FlowTree(symbol=name, in_value=c, out_value=out, children=(first, second))
                )
        return built[0]


def maxout_table(gvas: NormalizedGvas, cap: int) -> MaxOutTable:
    return MaxOutTable(gvas, cap)


@dataclass(frozen=True)
class _Step:
    """One edge of a down-path: from ``parent`` (with input ``value``) into a child."""

    parent: str
    value: int
    rule: int
    # 0: the path continues into the left child, 1: into the right child.
    position: int


_State = tuple[str, int]
_Key = TypeVar("_Key")


def _path_to(parents: dict[_Key, tuple[_Key | None, _Step]], state: _Key) -> list[_Step]:
    steps: list[_Step] = []
    cursor: _Key | None = state
    while cursor is not None:
        cursor, step = parents[cursor]
        steps.append(step)
    steps.reverse()
    return steps


class _Search:
    def __init__(self, gvas: NormalizedGvas, cap: int, pruning: bool) -> None:
        self.gvas = gvas
        self.cap = cap
        self.table = MaxOutTable(gvas, cap)
        size = gvas.size
        self.depth_limit: int | None = size if pruning else None
        self.loop_limit: int | None = size + 1 if pruning else None
        self.drop_limit: int | None = None
        self.in_clip = self.out_clip = cap
        try:
            complete = pruning and cap >= theoretical_cap(gvas)
        except CapOverflowError:
            complete = False
        if complete:
            self.drop_limit = size + 1
            self.in_clip = min(cap, 7 * size * 4 ** (size + 1))
            self.out_clip = min(cap, 6 * size * 4 ** (size + 1))
        self.binary = [
            (index, rule.lhs, str(rule.rhs[0]), str(rule.rhs[1]))
            for index, rule in enumerate(gvas.rules)
            if rule.is_binary
        ]

    def successors(self, name: str, value: int) -> Iterator[tuple[_State, _Step]]:
        for index, rule in self.gvas.grammar.rules_for(name):
            if not rule.is_binary:
                continue
            left, right = str(rule.rhs[0]), str(rule.rhs[1])
            yield (left, value), _Step(name, value, index, 0)
            mid = int(self.table.row(left)[value])
            if mid != BOTTOM:
                yield (right, mid), _Step(name, value, index, 1)

    def phase_one(self) -> dict[str, tuple[int, list[_Step]]]:
        """Per nonterminal, the largest input bound at a non-root node, with a path to it.

        Outputs above s may all be -inf, so only left siblings constrain the path.
        """
        root = (self.gvas.start, self.gvas.c_init)
        parents: dict[_State, tuple[_State | None, _Step]] = {}
        queue = deque([(root, 0)])
        while queue:
            state, dist = queue.popleft()
            if self.depth_limit is not None and dist >= self.depth_limit:
                continue
            for child, step in self.successors(*state):
                if child in parents:
                    continue
                parents[child] = (None if state == root and not dist else state, step)
                queue.append((child, dist + 1))
        logger.debug("phase one: %d states", len(parents))
        best: dict[str, _State] = {}
        for name, value in parents:
            if name not in best or value > best[name][1]:
                best[name] = (name, value)
        return {name: (state[1], _path_to(parents, state)) for name, state in best.items()}

    def loop_gain(self, name: str) -> Row:
        """For every input c at ``name``, the largest input bound at ``name`` again below it."""
        rows = {n: np.full(self.cap + 1, BOTTOM, dtype=np.int64) for n in self.gvas.nonterminals}
        source = np.arange(self.cap + 1, dtype=np.int64)
        steps = 0
        while self.loop_limit is None or steps < self.loop_limit:
            steps += 1
            frontier = dict(rows)
            frontier[name] = np.maximum(frontier[name], source)
            fresh = {n: row.copy() for n, row in rows.items()}
            for _, lhs, left, right in self.binary:
                src = frontier[lhs]
                np.maximum(fresh[left], src, out=fresh[left])
                np.maximum(fresh[right], _compose(self.table.row(left), src), out=fresh[right])
            if all(np.array_equal(fresh[n], rows[n]) for n in rows):
                break
            rows = fresh
        return rows[name]

    def find_loop(self, name: str, value: int) -> tuple[list[_Step], int] | None:
        """Shortest nonempty down-path from (name, value) to name with a larger input."""
        start = (name, value)
        parents: dict[_State, tuple[_State | None, _Step]] = {}
        queue = deque([(start, 0)])
        while queue:
            state, dist = queue.popleft()
            if self.loop_limit is not None and dist >= self.loop_limit:
                continue
            for child, step in self.successors(*state):
                if child in parents or child == start:
                    continue
                parents[child] = (state if dist else None, step)
                if child[0] == name and child[1] > value:
                    return _path_to(parents, child), child[1]
                queue.append((child, dist + 1))
        return None

    def find_drop(self, name: str, value: int, out_t: int) -> tuple[list[_Step], int] | None:
        """Down-path from s = (name, value) to a node t of the same name with a smaller output.

        t keeps an input >= value and gets out(t) = out_t < out(s). The third state
        component is the least output the current node must still reach.
        """
        table = self.table
        start = (name, value, out_t + 1)
        parents: dict[tuple[str, int, int], tuple[tuple[str, int, int] | None, _Step]] = {}
        queue: deque[tuple[tuple[str, int, int], int]] = deque([(start, 0)])
        while queue:
            state, dist = queue.popleft()
            if self.drop_limit is not None and dist >= self.drop_limit:
                continue
            current, c, required = state
            for index, rule in self.gvas.grammar.rules_for(current):
                if not rule.is_binary:
                    continue
                left, right = str(rule.rhs[0]), str(rule.rhs[1])
                moves: list[tuple[tuple[str, int, int], _Step]] = []
                need = table.inverse(right, required)
                if need is not None:
                    moves.append(((left, c, need), _Step(current, c, index, 0)))
                mid = int(table.row(left)[c])
                if mid != BOTTOM:
                    moves.append(((right, mid, required), _Step(current, c, index, 1)))
                for child, step in moves:
                    if child in parents or child == start:
                        continue
                    parents[child] = (state if dist else None, step)
                    child_name, child_in, child_need = child
                    if (
                        child_name == name
                        and child_in >= value
                        and child_need <= out_t <= int(table.row(name)[child_in])
                    ):
                        return _path_to(parents, child), child_in
                    queue.append((child, dist + 1))
        return None

    def materialize(
        self,
        above: list[_Step],
        s_value: int,
        below: list[_Step],
        t_value: int,
        t_out: int | None,
    ) -> Certificate:
        """Annotate the skeleton; ``t_out`` None means every output on the path is -inf."""
        table = self.table
        rules = self.gvas.rules
        name = below[0].parent
        if t_out is None:
            node = FlowTree.bottom(table.bottom_tree(name), in_value=t_value)
        else:
            node = table.realize(name, t_value).relabel(t_value, t_out)

        for step in reversed(below):
            left, right = str(rules[step.rule].rhs[0]), str(rules[step.rule].rhs[1])
            out: int | float
            if step.position == 0:
                if t_out is None:
                    sibling = FlowTree.bottom(table.bottom_tree(right))
                    out = NEG_INF
                else:
                    sibling = table.realize(right, int(node.out_value))
                    out = sibling.out_value
                children = (node, sibling)
            else:
                sibling = table.realize(left, step.value)
                out = NEG_INF if t_out is None else node.out_value
                children = (sibling, node)
            node = FlowTree(
                symbol=step.parent, in_value=step.value, out_value=out, children=children
            )
        node = node.relabel(s_value, node.out_value)

        for step in reversed(above):
            left, right = str(rules[step.rule].rhs[0]), str(rules[step.rule].rhs[1])
            if step.position == 0:
                children = (node, FlowTree.bottom(table.bottom_tree(right)))
            else:
                children = (table.realize(left, step.value), node)
            node = FlowTree(
                symbol=step.parent, in_value=step.value, out_value=NEG_INF, children=children
            )

        s_path: NodePath = tuple(step.position for step in above)
        t_path: NodePath = s_path + tuple(step.position for step in below)
        return Certificate(flow=node, s=s_path, t=t_path)

    def candidates(self) -> list[tuple[str, int, list[_Step]]]:
        start, c_init = self.gvas.start, self.gvas.c_init
        found: list[tuple[str, int, list[_Step]]] = []
        if c_init <= self.in_clip:
            found.append((start, c_init, []))
        reached = self.phase_one()
        for name in self.gvas.nonterminals:
            if name not in reached:
                continue
            bound, path = reached[name]
            for value in range(min(bound, self.in_clip) + 1):
                if name == start and value == c_init:
                    continue
                found.append((name, value, path))
        return found

    def run(self) -> Certificate | None:
        candidates = self.candidates()
        gains: dict[str, Row] = {}
        for name, value, above in candidates:
            if name not in gains:
                gains[name] = self.loop_gain(name)
            if gains[name][value] <= value:
                continue
            loop = self.find_loop(name, value)
            if loop is not None:
                below, t_value = loop
                return self.materialize(above, value, below, t_value, None)
        for name, value, above in candidates:
            if gains[name][value] < value:
                continue
            top = min(int(self.table.row(name)[value]), self.out_clip)
            for out_t in range(top):
                drop = self.find_drop(name, value, out_t)
                if drop is not None:
                    below, t_value = drop
                    return self.materialize(above, value, below, t_value, out_t)
        return None


def find_certificate(gvas: NormalizedGvas, cap: int, pruning: bool = True) -> Certificate | None:
    """A certificate whose annotations are all <= ``cap``, if one exists.

    Candidates for s come from down-steps out of the root; below s, an increasing input is
    searched first, then a strictly smaller output with the input kept.
    """
    search = _Search(gvas, cap, pruning)
    cert = search.run()
    logger.info(
        "certificate search at cap %d (pruning %s): %s",
        cap,
        "on" if pruning else "off",
        "found" if cert is not None else "absent",
    )
    return cert
