"""Rewrite a one-counter GVAS into weak CNF over the actions -1, 0 and 1."""

from __future__ import annotations

import logging
from collections import deque
from typing import TYPE_CHECKING

from pvas_bound.core.errors import GrammarError
from pvas_bound.core.grammar import prune_nonproductive
from pvas_bound.models.grammar import (
    RESERVED_PREFIX,
    Grammar,
    Gvas,
    NormalizedGvas,
    Rule,
    Symbol,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)

_UNIT_ACTIONS = (-1, 0, 1)
_TERMINAL_NAMES = {1: "U", -1: "N", 0: "Z"}


class _FreshNames:
    """Deterministic generator of reserved-prefix names that avoid existing ones."""

    def __init__(self, taken: Iterable[str]) -> None:
        self._taken = set(taken)
        self._counters: dict[str, int] = {}

    def fresh(self, base: str) -> str:
        name = f"{RESERVED_PREFIX}{base}"
        while name in self._taken:
            count = self._counters.get(base, 1) + 1
            self._counters[base] = count
            name = f"{RESERVED_PREFIX}{base}.{count}"
        self._taken.add(name)
        return name

    def indexed(self, base: str) -> str:
        while True:
            count = self._counters.get(base, 0) + 1
            self._counters[base] = count
            name = f"{RESERVED_PREFIX}{base}{count}"
            if name not in self._taken:
                self._taken.add(name)
                return name


def _rebuild(gvas: Gvas, nonterminals: list[str], rules: list[Rule]) -> Gvas:
    actions = sorted({s for r in rules for s in r.rhs if isinstance(s, int)})
    grammar = Grammar(
        nonterminals=tuple(nonterminals),
        actions=tuple(actions),
        rules=tuple(rules),
        start=gvas.grammar.start,
    )
    return Gvas(grammar=grammar, c_init=gvas.c_init)


def expand_actions(gvas: Gvas) -> Gvas:
    """Replace every action with |a| > 1 by a doubling-ladder nonterminal.

    ``B1 -> 1`` and ``Bm -> B(m-1) B(m-1)`` (and the negative ladder), with
    ``Xa -> Bn^bn ... B1^b1`` following the binary digits of |a|.
    """
    grammar = gvas.grammar
    large = sorted({s for r in grammar.rules for s in r.rhs if isinstance(s, int) and abs(s) > 1})
    if not large:
        return gvas
    names = _FreshNames(grammar.nonterminals)
    ladders: dict[int, list[str]] = {1: [], -1: []}
    ladder_rules: list[Rule] = []

    def rung(sign: int, m: int) -> str:
        ladder = ladders[sign]
        while len(ladder) < m:
            level = len(ladder) + 1
            name = names.fresh(f"B{'+' if sign > 0 else '-'}{level}")
            rhs: tuple[Symbol, ...] = (sign,) if level == 1 else (ladder[-1], ladder[-1])
            ladder.append(name)
            ladder_rules.append(Rule(lhs=name, rhs=rhs))
        return ladder[m - 1]

    replacement: dict[int, str] = {}
    action_rules: list[Rule] = []
    for action in large:
        sign = 1 if action > 0 else -1
        digits = bin(abs(action))[2:]
        width = len(digits)
        rhs = tuple(rung(sign, width - pos) for pos, bit in enumerate(digits) if bit == "1")
        name = names.fresh(f"X{action:+d}")
        replacement[action] = name
        action_rules.append(Rule(lhs=name, rhs=rhs))

    rules = [
        Rule(
            lhs=r.lhs,
            rhs=tuple(replacement.get(s, s) if isinstance(s, int) else s for s in r.rhs),
        )
        for r in grammar.rules
    ]
    rules += action_rules + ladder_rules
    nonterminals = [*grammar.nonterminals, *(r.lhs for r in action_rules + ladder_rules)]
    logger.debug("expanded %d large actions into %d ladder rules", len(large), len(ladder_rules))
    return _rebuild(gvas, nonterminals, rules)


def _inline_units(rules: list[Rule]) -> list[Rule]:
    """Remove ``X -> Y`` rules by copying the non-unit rules of everything Y reaches by units."""

    def is_unit(rule: Rule) -> bool:
        return len(rule.rhs) == 1 and isinstance(rule.rhs[0], str)

    units: dict[str, list[str]] = {}
    own: dict[str, list[Rule]] = {}
    for rule in rules:
        if is_unit(rule):
            units.setdefault(rule.lhs, []).append(str(rule.rhs[0]))
        else:
            own.setdefault(rule.lhs, []).append(rule)

    def closure(name: str) -> list[str]:
        order = [name]
        seen = {name}
        queue = deque([name])
        while queue:
            for nxt in units.get(queue.popleft(), []):
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
        return order

    out: list[Rule] = []
    seen_rules: set[tuple[str, tuple[Symbol, ...]]] = set()

    def emit(lhs: str, rhs: tuple[Symbol, ...]) -> None:
        if (lhs, rhs) not in seen_rules:
            seen_rules.add((lhs, rhs))
            out.append(Rule(lhs=lhs, rhs=rhs))

    for rule in rules:
        if not is_unit(rule):
            emit(rule.lhs, rule.rhs)
            continue
        for reached in closure(str(rule.rhs[0])):
            for inlined in own.get(reached, []):
                emit(rule.lhs, inlined.rhs)
    return out


def to_weak_cnf(gvas: Gvas) -> NormalizedGvas:
    """Lift terminals out of long rules, binarize, inline unit rules and prune."""
    grammar = gvas.grammar
    stray = sorted(
        {s for r in grammar.rules for s in r.rhs if isinstance(s, int) and s not in _UNIT_ACTIONS}
    )
    if stray:
        raise GrammarError(f"actions {stray} are outside {{-1, 0, 1}}; expand actions first")
    names = _FreshNames(grammar.nonterminals)
    nonterminals = list(grammar.nonterminals)
    lifted: dict[int, str] = {}
    extra: list[Rule] = []

    def lift(action: int) -> str:
        if action not in lifted:
            name = names.fresh(_TERMINAL_NAMES[action])
            lifted[action] = name
            nonterminals.append(name)
            extra.append(Rule(lhs=name, rhs=(action,)))
        return lifted[action]

    rules: list[Rule] = []
    for rule in grammar.rules:
        rhs: list[str | int] = list(rule.rhs)
        if len(rhs) >= 2:
            rhs = [lift(s) if isinstance(s, int) else s for s in rhs]
        lhs = rule.lhs
        while len(rhs) > 2:
            chain = names.indexed("P")
            nonterminals.append(chain)
            rules.append(Rule(lhs=lhs, rhs=(rhs[0], chain)))
            lhs, rhs = chain, rhs[1:]
        rules.append(Rule(lhs=lhs, rhs=tuple(rhs)))
    rules = _inline_units(rules + extra)

    plain = prune_nonproductive(_rebuild(gvas, nonterminals, rules))
    logger.info(
        "weak CNF: %d nonterminals, %d rules", len(plain.nonterminals), len(plain.rules)
    )
    return NormalizedGvas(grammar=plain.grammar, c_init=plain.c_init)


def normalize(gvas: Gvas) -> NormalizedGvas:
    """Expand large actions, rewrite into weak CNF and prune non-productive symbols."""
    if isinstance(gvas, NormalizedGvas):
        return gvas
    return to_weak_cnf(expand_actions(prune_nonproductive(gvas)))
