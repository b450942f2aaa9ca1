"""Seeded random instances for the property suites and ``pvas-bound gen``."""

from __future__ import annotations

import random

from pvas_bound.core.errors import GuardError
from pvas_bound.core.grammar import productive_set, prune_nonproductive
from pvas_bound.models.grammar import Grammar, Gvas, NormalizedGvas, Rule, Symbol
from pvas_bound.models.pvas import NOP, Pvas, StackOp, Transition, pop, push

_NAMES = ("S", "A", "B", "C", "D", "E", "F", "G")
MAX_ATTEMPTS = 1000


def _check(size: int, limit: int, what: str) -> None:
    if not 1 <= size <= limit:
        raise GuardError(f"{what} must lie in 1..{limit}, got {size}")


def _gvas(names: tuple[str, ...], rules: list[Rule], c_init: int) -> Gvas:
    actions = sorted({s for r in rules for s in r.rhs if isinstance(s, int)})
    grammar = Grammar(
        nonterminals=names, actions=tuple(actions), rules=tuple(rules), start=names[0]
    )
    return Gvas(grammar=grammar, c_init=c_init)


def random_gvas(
    seed: int,
    size: int = 3,
    max_action: int = 4,
    max_rhs: int = 3,
    max_c_init: int = 3,
) -> Gvas:
    """Arbitrary rule shapes; regenerated until the start symbol is productive."""
    _check(size, len(_NAMES), "size")
    rng = random.Random(seed)
    names = _NAMES[:size]
    for _ in range(MAX_ATTEMPTS):
        rules: list[Rule] = []
        for name in names:
            for _ in range(rng.randint(1, 3)):
                rhs: list[Symbol] = []
                for _ in range(rng.randint(0, max_rhs)):
                    if rng.random() < 0.5:
                        rhs.append(rng.choice(names))
                    else:
                        rhs.append(rng.randint(-max_action, max_action))
                rules.append(Rule(lhs=name, rhs=tuple(rhs)))
        gvas = _gvas(names, rules, rng.randint(0, max_c_init))
        if gvas.start in productive_set(gvas):
            return gvas
    raise GuardError(f"no productive grammar after {MAX_ATTEMPTS} attempts (seed {seed})")


def random_normalized(seed: int, size: int = 3, max_c_init: int = 3) -> NormalizedGvas:
    """Weak-CNF rules only, with non-productive symbols pruned."""
    _check(size, len(_NAMES), "size")
    rng = random.Random(seed)
    names = _NAMES[:size]
    for _ in range(MAX_ATTEMPTS):
        rules: list[Rule] = []
        for name in names:
            for _ in range(rng.randint(1, 3)):
                roll = rng.random()
                if roll < 0.5:
                    rhs: tuple[Symbol, ...] = (rng.choice(names), rng.choice(names))
                elif roll < 0.85:
                    rhs = (rng.choice((-1, 0, 1)),)
                else:
                    rhs = ()
                rules.append(Rule(lhs=name, rhs=rhs))
        gvas = _gvas(names, rules, rng.randint(0, max_c_init))
        if gvas.start in productive_set(gvas):
            pruned = prune_nonproductive(gvas)
            return NormalizedGvas(grammar=pruned.grammar, c_init=pruned.c_init)
    raise GuardError(f"no productive grammar after {MAX_ATTEMPTS} attempts (seed {seed})")


def random_pvas(
    seed: int,
    states: int = 3,
    stack_symbols: int = 2,
    max_transitions: int = 6,
    max_c_init: int = 2,
) -> Pvas:
    """One counter, unit deltas and an initial stack of at most one symbol."""
    _check(states, 8, "states")
    if not 0 <= stack_symbols <= 4:
        raise GuardError(f"stack_symbols must lie in 0..4, got {stack_symbols}")
    rng = random.Random(seed)
    names = tuple(f"q{i}" for i in range(states))
    alphabet = tuple("ABCD"[:stack_symbols])
    transitions: list[Transition] = []
    for _ in range(rng.randint(1, max_transitions)):
        op: StackOp = NOP
        if alphabet:
            roll = rng.random()
            if roll < 0.3:
                op = push(rng.choice(alphabet))
            elif roll < 0.6:
                op = pop(rng.choice(alphabet))
        transitions.append(
            Transition(
                source=rng.choice(names),
                delta=(rng.choice((-1, 0, 1)),),
                op=op,
                target=rng.choice(names),
            )
        )
    w_init = (rng.choice(alphabet),) if alphabet and rng.random() < 0.5 else ()
    return Pvas(
        states=names,
        stack_alphabet=alphabet,
        q_init=names[0],
        c_init=(rng.randint(0, max_c_init),),
        w_init=w_init,
        transitions=tuple(transitions),
    )
