"""Exact GVAS reachability under a value budget."""

from __future__ import annotations

import logging
from collections import deque
from typing import TYPE_CHECKING, Literal

from pvas_bound.models.flowtree import FlowTree
from pvas_bound.models.verdict import OracleResult

if TYPE_CHECKING:
    from collections.abc import Iterable

    from pvas_bound.models.grammar import Gvas, NormalizedGvas

logger = logging.getLogger(__name__)

Capped = Literal["capped"]

_Pair = tuple[str, int]


class ReachTable:
    """Least fixpoint of the exact step semantics, explored on demand.

    ``outputs(X, c)`` holds every d with ``c =>X d`` along a run whose counter stays in
    ``[0, budget]``. ``capped`` records that some step wanted to leave the budget.
    """

    def __init__(
        self,
        gvas: NormalizedGvas,
        budget: int,
        start: str | None = None,
        c_init: int | None = None,
    ) -> None:
        self.gvas = gvas
        self.budget = budget
        self.start = gvas.start if start is None else start
        self.c_init = gvas.c_init if c_init is None else c_init
        self.capped = False
        self._entries: dict[_Pair, set[int]] = {}
        self._back: dict[tuple[str, int, int], tuple[int, int]] = {}
        self._left_watch: dict[_Pair, list[tuple[int, str, int, str]]] = {}
        self._right_watch: dict[_Pair, list[tuple[int, str, int, int]]] = {}
        self._linked: set[tuple[int, int, int]] = set()
        self._tasks: deque[tuple[str, int, int | None]] = deque()
        if self.c_init <= budget:
            self._solve()
        else:
            self.capped = True

    def _request(self, name: str, value: int) -> None:
        if (name, value) not in self._entries:
            self._entries[(name, value)] = set()
            self._tasks.append((name, value, None))

    def _add(self, name: str, value: int, out: int, back: tuple[int, int]) -> None:
        outputs = self._entries[(name, value)]
        if out not in outputs:
            outputs.add(out)
            self._back[(name, value, out)] = back
            self._tasks.append((name, value, out))

    def _link(self, index: int, parent: str, value: int, right: str, mid: int) -> None:
        if (index, value, mid) in self._linked:
            return
        self._linked.add((index, value, mid))
        self._right_watch.setdefault((right, mid), []).append((index, parent, value, mid))
        self._request(right, mid)
        for out in list(self._entries[(right, mid)]):
            self._add(parent, value, out, (index, mid))

    def _init_pair(self, name: str, value: int) -> None:
        grammar = self.gvas.grammar
        for index, rule in grammar.rules_for(name):
            if rule.is_epsilon:
                self._add(name, value, value, (index, -1))
            elif rule.is_terminal:
                out = value + int(rule.rhs[0])
                if out > self.budget:
                    self.capped = True
                elif out >= 0:
                    self._add(name, value, out, (index, -1))
            else:
                left, right = str(rule.rhs[0]), str(rule.rhs[1])
                self._left_watch.setdefault((left, value), []).append((index, name, value, right))
                self._request(left, value)
                for mid in list(self._entries[(left, value)]):
                    self._link(index, name, value, right, mid)

    def _solve(self) -> None:
        self._request(self.start, self.c_init)
        while self._tasks:
            name, value, out = self._tasks.popleft()
            if out is None:
                self._init_pair(name, value)
                continue
            for index, parent, pvalue, right in self._left_watch.get((name, value), []):
                self._link(index, parent, pvalue, right, out)
            for index, parent, pvalue, mid in self._right_watch.get((name, value), []):
                self._add(parent, pvalue, out, (index, mid))
        logger.debug(
            "reach table: %d pairs, budget %d, capped=%s",
            len(self._entries),
            self.budget,
            self.capped,
        )

    def outputs(self, nonterminal: str, value: int) -> frozenset[int]:
        return frozenset(self._entries.get((nonterminal, value), set()))

    def pairs(self) -> Iterable[_Pair]:
        return self._entries.keys()

    @property
    def reach_set(self) -> frozenset[int]:
        return self.outputs(self.start, self.c_init)

    def witness(self, nonterminal: str, value: int, out: int) -> FlowTree:
        """Flow tree with exact annotations realizing ``value =>X out``."""
        rules = self.gvas.grammar.rules
        stack: list[tuple[str, int, int, bool]] = [(nonterminal, value, out, False)]
        built: list[FlowTree] = []
        while stack:
            name, c, d, expanded = stack.pop()
            index, mid = self._back[(name, c, d)]
            rule = rules[index]
            if mid < 0:
                action = int(rule.rhs[0]) if rule.rhs else None
                leaf = FlowTree(symbol=action, in_value=c, out_value=d)
                built.append(FlowTree(symbol=name, in_value=c, out_value=d, children=(leaf,)))
            elif not expanded:
                left, right = str(rule.rhs[0]), str(rule.rhs[1])
                stack.append((name, c, d, True))
                stack.append((right, mid, d, False))
                stack.append((left, c, mid, False))
            else:
                second = built.pop()
                first = built.pop()
                built.append(
                    FlowTree(symbol=name, in_value=c, out_value=d, children=(first, second))
                )
        return built[0]

    def is_fixpoint(self) -> bool:
        """Re-apply every rule to every explored pair and report whether anything is new."""
        grammar = self.gvas.grammar
        for (name, value), outputs in self._entries.items():
            for _, rule in grammar.rules_for(name):
                if rule.is_epsilon:
                    derived = {value}
                elif rule.is_terminal:
                    out = value + int(rule.rhs[0])
                    derived = {out} if 0 <= out <= self.budget else set()
                else:
                    left, right = str(rule.rhs[0]), str(rule.rhs[1])
                    derived = {
                        e
                        for d in self._entries.get((left, value), set())
                        for e in self._entries.get((right, d), set())
                    }
                if not derived <= outputs:
                    return False
        return True


def replay(value: int, word: Iterable[int], budget: int | None = None) -> int | None:
    """Run ``word`` from ``value`` under exact semantics; None if it leaves the range."""
    current = value
    for action in word:
        current += action
        if current < 0 or (budget is not None and current > budget):
            return None
    return current


def reach_table(
    gvas: NormalizedGvas,
    budget: int,
    start: str | None = None,
    c_init: int | None = None,
) -> ReachTable:
    return ReachTable(gvas, budget, start=start, c_init=c_init)


def reachability_set(gvas: Gvas, budget: int) -> OracleResult:
    """The exact reachability set when the budget suffices; a partial set otherwise."""
    from pvas_bound.core.normalize import normalize

    table = ReachTable(normalize(gvas), budget)
    result = OracleResult(
        closed=not table.capped,
        values=tuple(sorted(table.reach_set)),
        capped_at=budget,
    )
    logger.info(
        "oracle budget %d: %s, %d values",
        budget,
        "closed" if result.closed else "capped",
        len(result.values),
    )
    return result


def max_reachable(
    gvas: NormalizedGvas, nonterminal: str, value: int, budget: int
) -> int | float | Capped:
    """Largest d with ``value =>X d``; -inf when there is none."""
    table = ReachTable(gvas, budget, start=nonterminal, c_init=value)
    if table.capped:
        return "capped"
    outputs = table.reach_set
    return max(outputs) if outputs else float("-inf")
