"""PVAS simulation and the reduction to a prefix-closed GVAS."""

from __future__ import annotations

import logging
from collections import deque

from pvas_bound.core.errors import DimensionError
from pvas_bound.models.grammar import Grammar, Gvas, Rule, Symbol
from pvas_bound.models.pvas import (
    Config,
    Pvas,
    ReachResult,
    StackOpKind,
    Transition,
    Truncation,
)

logger = logging.getLogger(__name__)


def _fire(tr: Transition, config: Config) -> Config | None:
    counters = tuple(c + d for c, d in zip(config.counters, tr.delta, strict=True))
    if any(c < 0 for c in counters):
        return None
    stack = config.stack
    if tr.op.kind is StackOpKind.PUSH:
        assert tr.op.symbol is not None
        stack = (*stack, tr.op.symbol)
    elif tr.op.kind is StackOpKind.POP:
        if not stack or stack[-1] != tr.op.symbol:
            return None
        stack = stack[:-1]
    return Config(state=tr.target, counters=counters, stack=stack)


def step(pvas: Pvas, config: Config) -> set[Config]:
    """All one-step successors of ``config``."""
    successors: set[Config] = set()
    for tr in pvas.outgoing(config.state):
        nxt = _fire(tr, config)
        if nxt is not None:
            successors.add(nxt)
    return successors


def bfs_reach(
    pvas: Pvas,
    max_counter: int,
    max_stack: int,
    max_configs: int = 100_000,
) -> ReachResult:
    """Breadth-first closure from the initial configuration under three budgets.

    Successors over a budget are discarded and the matching flag is set.
    """
    by_state: dict[str, list[Transition]] = {}
    for tr in pvas.transitions:
        by_state.setdefault(tr.source, []).append(tr)

    counter_hit = stack_hit = configs_hit = False
    initial = pvas.initial
    visited = {initial}
    queue = deque([initial])
    while queue:
        config = queue.popleft()
        for tr in by_state.get(config.state, []):
            nxt = _fire(tr, config)
            if nxt is None or nxt in visited:
                continue
            if max(nxt.counters) > max_counter:
                counter_hit = True
                continue
            if len(nxt.stack) > max_stack:
                stack_hit = True
                continue
            if len(visited) >= max_configs:
                configs_hit = True
                continue
            visited.add(nxt)
            queue.append(nxt)
    truncated = Truncation(counter=counter_hit, stack=stack_hit, configs=configs_hit)
    logger.debug("bfs_reach: %d configurations, truncated=%s", len(visited), truncated.hit)
    return ReachResult(configs=frozenset(visited), truncated=truncated)


class _Reduction:
    """Builds the run-prefix grammar on demand, starting from the initial run symbol."""

    def __init__(self, pvas: Pvas) -> None:
        self.pvas = pvas
        self.by_state: dict[str, list[Transition]] = {q: [] for q in pvas.states}
        for tr in pvas.transitions:
            self.by_state[tr.source].append(tr)
        self.nonterminals: list[str] = []
        self.rules: list[Rule] = []
        self.pending: deque[tuple[str, tuple[str, ...]]] = deque()
        self.seen: set[str] = set()

    def _need(self, kind: str, *args: str) -> str:
        name = f"@{kind}[{','.join(args)}]"
        if name not in self.seen:
            self.seen.add(name)
            self.nonterminals.append(name)
            self.pending.append((kind, args))
        return name

    def trip(self, p: str, gamma: str, q: str) -> str:
        return self._need("Trip", p, gamma, q)

    def live(self, p: str, gamma: str) -> str:
        return self._need("Live", p, gamma)

    def run(self, p: str, depth: int) -> str:
        return self._need("Run", p, str(depth))

    def _emit(self, lhs: str, *rhs: Symbol) -> None:
        self.rules.append(Rule(lhs=lhs, rhs=rhs))

    def _expand(self, kind: str, args: tuple[str, ...]) -> None:
        states = self.pvas.states
        if kind == "Trip":
            p, gamma, q = args
            lhs = self.trip(p, gamma, q)
            for tr in self.by_state[p]:
                a, target, op = tr.delta[0], tr.target, tr.op
                if op.kind is StackOpKind.NOP:
                    self._emit(lhs, a, self.trip(target, gamma, q))
                elif op.kind is StackOpKind.PUSH:
                    assert op.symbol is not None
                    for r in states:
                        self._emit(lhs, a, self.trip(target, op.symbol, r), self.trip(r, gamma, q))
                elif op.symbol == gamma and target == q:
                    self._emit(lhs, a)
        elif kind == "Live":
            p, gamma = args
            lhs = self.live(p, gamma)
            self._emit(lhs)
            for tr in self.by_state[p]:
                a, target, op = tr.delta[0], tr.target, tr.op
                if op.kind is StackOpKind.NOP:
                    self._emit(lhs, a, self.live(target, gamma))
                elif op.kind is StackOpKind.PUSH:
                    assert op.symbol is not None
                    self._emit(lhs, a, self.live(target, op.symbol))
                    for r in states:
                        self._emit(lhs, a, self.trip(target, op.symbol, r), self.live(r, gamma))
        else:
            p, depth_text = args
            depth = int(depth_text)
            lhs = self.run(p, depth)
            if depth > 0:
                gamma = self.pvas.w_init[depth - 1]
                for q in states:
                    self._emit(lhs, self.trip(p, gamma, q), self.run(q, depth - 1))
                self._emit(lhs, self.live(p, gamma))
                return
            self._emit(lhs)
            for tr in self.by_state[p]:
                a, target, op = tr.delta[0], tr.target, tr.op
                if op.kind is StackOpKind.NOP:
                    self._emit(lhs, a, self.run(target, 0))
                elif op.kind is StackOpKind.PUSH:
                    assert op.symbol is not None
                    self._emit(lhs, a, self.live(target, op.symbol))
                    for r in states:
                        self._emit(lhs, a, self.trip(target, op.symbol, r), self.run(r, 0))

    def build(self) -> Gvas:
        start = self.run(self.pvas.q_init, len(self.pvas.w_init))
        while self.pending:
            kind, args = self.pending.popleft()
            self._expand(kind, args)
        actions = sorted({s for r in self.rules for s in r.rhs if isinstance(s, int)})
        grammar = Grammar(
            nonterminals=tuple(self.nonterminals),
            actions=tuple(actions),
            rules=tuple(self.rules),
            start=start,
        )
        logger.info(
            "reduced PVAS to %d nonterminals and %d rules", len(self.nonterminals), len(self.rules)
        )
        return Gvas(grammar=grammar, c_init=self.pvas.c_init[0])


def reduce_to_gvas(pvas: Pvas) -> Gvas:
    """GVAS whose words are the counter deltas along all run prefixes of ``pvas``.

    Nonterminals: ``@Trip[p,g,q]`` runs from p that end by popping g in q,
    ``@Live[p,g]`` runs from p that never pop g, ``@Run[p,i]`` runs from p over the
    bottom i symbols of the initial stack.
    """
    if pvas.dimension != 1:
        raise DimensionError("decision pipeline is 1-dimensional")
    return _Reduction(pvas).build()
