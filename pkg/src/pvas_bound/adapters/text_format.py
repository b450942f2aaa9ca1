"""Line-oriented text formats for GVAS and PVAS documents.

GVAS::

    gvas
    counter_init 0
    start S
    S -> 1 S
    S ->

PVAS::

    pvas
    dim 1
    init q0 2 A,B
    q0 -> q1 : add=-1 push=A

``#`` starts a comment. Optional ``nonterminals`` (GVAS) and ``states`` / ``stack``
(PVAS) lines fix declaration order and keep unused names.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from pydantic import ValidationError

from pvas_bound.core.errors import FormatError
from pvas_bound.models.grammar import Grammar, Gvas, Rule, Symbol
from pvas_bound.models.pvas import NOP, Pvas, StackOp, Transition, pop, push

if TYPE_CHECKING:
    from collections.abc import Iterator

_INT = re.compile(r"[+-]?\d+")
_OP = re.compile(r"(add|push|pop)=(\S*)")


def _lines(text: str) -> Iterator[tuple[int, str, int]]:
    """(line number, content without comment, column of the first token)."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if content.strip():
            yield number, content.strip(), len(content) - len(content.lstrip()) + 1


def _expect_header(lines: list[tuple[int, str, int]], keyword: str) -> None:
    if not lines:
        raise FormatError(f"empty document, expected {keyword!r}", 1, 1)
    number, content, column = lines[0]
    if content != keyword:
        raise FormatError(f"expected {keyword!r}, got {content.split()[0]!r}", number, column)


def _natural(token: str, what: str, number: int, column: int) -> int:
    if not token.isdigit():
        raise FormatError(f"{what} must be a natural number, got {token!r}", number, column)
    return int(token)


def parse_gvas(text: str) -> Gvas:
    lines = list(_lines(text))
    _expect_header(lines, "gvas")
    c_init = 0
    start: str | None = None
    declared: list[str] = []
    rules: list[Rule] = []
    for number, content, column in lines[1:]:
        head, _, rest = content.partition(" ")
        if "->" in content.split():
            tokens = content.split()
            if tokens.index("->") != 1:
                raise FormatError("a rule needs exactly one name before '->'", number, column)
            rhs: list[Symbol] = [int(t) if _INT.fullmatch(t) else t for t in tokens[2:]]
            rules.append(Rule(lhs=tokens[0], rhs=tuple(rhs)))
        elif head == "counter_init":
            c_init = _natural(rest.strip(), "counter_init", number, column)
        elif head == "start":
            if len(rest.split()) != 1:
                raise FormatError("start takes one name", number, column)
            start = rest.strip()
        elif head == "nonterminals":
            declared = rest.split()
        else:
            raise FormatError(f"unknown declaration {head!r}", number, column)
    if start is None:
        raise FormatError("missing 'start' declaration", lines[-1][0], 1)

    names: dict[str, None] = dict.fromkeys(declared)
    names.setdefault(start)
    for rule in rules:
        names.setdefault(rule.lhs)
        for sym in rule.rhs:
            if isinstance(sym, str):
                names.setdefault(sym)
    actions = sorted({s for r in rules for s in r.rhs if isinstance(s, int)})
    try:
        grammar = Grammar(
            nonterminals=tuple(names), actions=tuple(actions), rules=tuple(rules), start=start
        )
        return Gvas(grammar=grammar, c_init=c_init)
    except ValidationError as exc:
        raise FormatError(exc.errors()[0]["msg"], lines[0][0], 1) from exc


def format_gvas(gvas: Gvas) -> str:
    out = ["gvas", f"counter_init {gvas.c_init}", f"start {gvas.start}"]
    implied: dict[str, None] = {gvas.start: None}
    for rule in gvas.rules:
        implied.setdefault(rule.lhs)
        for sym in rule.rhs:
            if isinstance(sym, str):
                implied.setdefault(sym)
    if tuple(implied) != gvas.nonterminals:
        out.append("nonterminals " + " ".join(gvas.nonterminals))
    out.extend(str(rule) for rule in gvas.rules)
    return "\n".join(out) + "\n"


def _parse_transition(content: str, number: int, column: int, dim: int) -> Transition:
    arrow, _, ops = content.partition(":")
    ends = arrow.split("->")
    if len(ends) != 2 or not ends[0].strip() or not ends[1].strip():
        raise FormatError("expected 'P -> Q : add=...'", number, column)
    delta: tuple[int, ...] | None = None
    op: StackOp = NOP
    for token in ops.split():
        match = _OP.fullmatch(token)
        if match is None:
            raise FormatError(f"unknown transition field {token!r}", number, column)
        key, value = match.groups()
        if key == "add":
            parts = value.split(",")
            if not all(_INT.fullmatch(p) for p in parts):
                raise FormatError(f"bad delta {value!r}", number, column)
            delta = tuple(int(p) for p in parts)
        elif not value:
            raise FormatError(f"{key} needs a stack symbol", number, column)
        else:
            op = push(value) if key == "push" else pop(value)
    if delta is None:
        delta = (0,) * dim
    if len(delta) != dim:
        raise FormatError(f"delta has {len(delta)} entries, dim is {dim}", number, column)
    return Transition(source=ends[0].strip(), delta=delta, op=op, target=ends[1].strip())


def parse_pvas(text: str) -> Pvas:
    lines = list(_lines(text))
    _expect_header(lines, "pvas")
    dim = 1
    init: tuple[str, tuple[int, ...], tuple[str, ...]] | None = None
    states: dict[str, None] = {}
    stack: dict[str, None] = {}
    transitions: list[Transition] = []
    for number, content, column in lines[1:]:
        head, _, rest = content.partition(" ")
        if "->" in content:
            tr = _parse_transition(content, number, column, dim)
            transitions.append(tr)
            states.setdefault(tr.source)
            states.setdefault(tr.target)
            if tr.op.symbol is not None:
                stack.setdefault(tr.op.symbol)
        elif head == "dim":
            dim = _natural(rest.strip(), "dim", number, column)
            if dim < 1:
                raise FormatError("dim must be at least 1", number, column)
        elif head == "init":
            tokens = rest.split()
            if len(tokens) != dim + 2:
                raise FormatError(
                    f"init takes a state, {dim} counter value(s) and a stack word", number, column
                )
            counters = tuple(_natural(t, "counter", number, column) for t in tokens[1:-1])
            word = () if tokens[-1] == "-" else tuple(tokens[-1].split(","))
            init = (tokens[0], counters, word)
            states.setdefault(tokens[0])
            for gamma in word:
                stack.setdefault(gamma)
        elif head == "states":
            for name in rest.split():
                states.setdefault(name)
        elif head == "stack":
            for name in rest.split():
                stack.setdefault(name)
        else:
            raise FormatError(f"unknown declaration {head!r}", number, column)
    if init is None:
        raise FormatError("missing 'init' declaration", lines[-1][0], 1)
    q_init, c_init, w_init = init
    try:
        return Pvas(
            states=tuple(states),
            stack_alphabet=tuple(stack),
            q_init=q_init,
            c_init=c_init,
            w_init=w_init,
            transitions=tuple(transitions),
        )
    except ValidationError as exc:
        raise FormatError(exc.errors()[0]["msg"], lines[0][0], 1) from exc


def _format_transition(tr: Transition) -> str:
    fields = [f"add={','.join(str(d) for d in tr.delta)}"]
    if tr.op.symbol is not None:
        fields.append(str(tr.op))
    return f"{tr.source} -> {tr.target} : {' '.join(fields)}"


def format_pvas(pvas: Pvas) -> str:
    word = ",".join(pvas.w_init) or "-"
    counters = " ".join(str(c) for c in pvas.c_init)
    out = [
        "pvas",
        f"dim {pvas.dimension}",
        f"states {' '.join(pvas.states)}",
    ]
    if pvas.stack_alphabet:
        out.append(f"stack {' '.join(pvas.stack_alphabet)}")
    out.append(f"init {pvas.q_init} {counters} {word}")
    out.extend(_format_transition(tr) for tr in pvas.transitions)
    return "\n".join(out) + "\n"
