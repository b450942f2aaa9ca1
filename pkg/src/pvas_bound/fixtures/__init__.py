"""Example systems shipped with the package, and builders for their families."""

from __future__ import annotations

from functools import cache
from importlib.resources import files

from pvas_bound.adapters.json_codec import load_certificate, load_flow_tree
from pvas_bound.adapters.text_format import parse_gvas, parse_pvas
from pvas_bound.models.flowtree import Certificate, FlowTree
from pvas_bound.models.grammar import Grammar, Gvas, Rule
from pvas_bound.models.pvas import NOP, Pvas, Transition, pop, push

FIXTURES = (
    "g1.gvas",
    "decreasing.gvas",
    "ackermann1.gvas",
    "ackermann2.gvas",
    "ackermann1_init5.gvas",
    "ackermann1_init5.json",
    "g1_certificate.json",
    "doubling.pvas",
    "ackermann0.pvas",
    "ackermann1.pvas",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return files(__name__).joinpath(name).read_text(encoding="utf-8")


def fixture_gvas(name: str) -> Gvas:
    return parse_gvas(fixture_text(name if name.endswith(".gvas") else f"{name}.gvas"))


def fixture_pvas(name: str) -> Pvas:
    return parse_pvas(fixture_text(name if name.endswith(".pvas") else f"{name}.pvas"))


def fixture_flow_tree(name: str) -> FlowTree:
    return load_flow_tree(fixture_text(name if name.endswith(".json") else f"{name}.json"))


def fixture_certificate(name: str) -> Certificate:
    return load_certificate(fixture_text(name if name.endswith(".json") else f"{name}.json"))


@cache
def ackermann(m: int, n: int) -> int:
    """A_0(n) = n + 1 and A_m(n) = A_(m-1) applied n + 1 times to 1."""
    if m == 0:
        return n + 1
    value = 1
    for _ in range(n + 1):
        value = ackermann(m - 1, value)
    return value


def ackermann_gvas(m: int, c_init: int = 0) -> Gvas:
    """``X_0 -> 1`` and ``X_i -> -1 X_i X_(i-1) | 1 X_(i-1)``, start X_m."""
    rules: list[Rule] = []
    for i in range(m, 0, -1):
        rules.append(Rule(lhs=f"X_{i}", rhs=(-1, f"X_{i}", f"X_{i - 1}")))
        rules.append(Rule(lhs=f"X_{i}", rhs=(1, f"X_{i - 1}")))
    rules.append(Rule(lhs="X_0", rhs=(1,)))
    grammar = Grammar(
        nonterminals=tuple(f"X_{i}" for i in range(m, -1, -1)),
        actions=(-1, 1) if m else (1,),
        rules=tuple(rules),
        start=f"X_{m}",
    )
    return Gvas(grammar=grammar, c_init=c_init)


def ackermann_pvas(m: int, n: int) -> Pvas:
    """States bot, 0..m; from (bot, n, g_m) the largest counter on an empty stack is A_m(n)."""
    transitions = [
        Transition(source="bot", delta=(0,), op=pop("g0"), target="0"),
        Transition(source="0", delta=(1,), op=NOP, target="bot"),
    ]
    for i in range(1, m + 1):
        transitions += [
            Transition(source="bot", delta=(0,), op=pop(f"g{i}"), target=str(i)),
            Transition(source=str(i), delta=(1,), op=push(f"g{i - 1}"), target="bot"),
            Transition(source=str(i), delta=(-1,), op=push(f"g{i - 1}"), target=str(i)),
        ]
    return Pvas(
        states=("bot", *(str(i) for i in range(m + 1))),
        stack_alphabet=tuple(f"g{i}" for i in range(m + 1)),
        q_init="bot",
        c_init=(n,),
        w_init=(f"g{m}",),
        transitions=tuple(transitions),
    )
