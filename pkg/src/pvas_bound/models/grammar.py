"""Grammar, GVAS and parse-tree data models."""

from __future__ import annotations

from collections.abc import Iterator
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

Symbol = str | int
Word = tuple[int, ...]
NodePath = tuple[int, ...]

# Generated names (normalization, reduction) start with this prefix.
RESERVED_PREFIX = "@"


class Rule(BaseModel):
    """A production ``lhs -> rhs``; an empty rhs is an epsilon rule."""

    model_config = ConfigDict(frozen=True)

    lhs: str
    rhs: tuple[Symbol, ...] = ()

    @property
    def is_epsilon(self) -> bool:
        return not self.rhs

    @property
    def is_binary(self) -> bool:
        return len(self.rhs) == 2 and all(isinstance(s, str) for s in self.rhs)

    @property
    def is_terminal(self) -> bool:
        return len(self.rhs) == 1 and isinstance(self.rhs[0], int)

    def __str__(self) -> str:
        return " ".join([self.lhs, "->", *(str(s) for s in self.rhs)])


class Grammar(BaseModel):
    """Context-free grammar whose terminals are integer counter actions.

    Rules keep their position in ``rules`` as a stable index; every iteration in the
    package walks rules in index order.
    """

    model_config = ConfigDict(frozen=True)

    nonterminals: tuple[str, ...]
    actions: tuple[int, ...] = ()
    rules: tuple[Rule, ...] = ()
    start: str

    _by_lhs: dict[str, tuple[int, ...]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_symbols(self) -> Self:
        names = set(self.nonterminals)
        if len(names) != len(self.nonterminals):
            raise ValueError("duplicate nonterminal names")
        if self.start not in names:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        actions = set(self.actions)
        for index, rule in enumerate(self.rules):
            if rule.lhs not in names:
                raise ValueError(f"rule {index}: unknown lhs {rule.lhs!r}")
            for sym in rule.rhs:
                if isinstance(sym, int):
                    if sym not in actions:
                        raise ValueError(f"rule {index}: undeclared action {sym}")
                elif sym not in names:
                    raise ValueError(f"rule {index}: unknown symbol {sym!r}")
        return self

    def model_post_init(self, __context: object) -> None:
        by_lhs: dict[str, list[int]] = {name: [] for name in self.nonterminals}
        for index, rule in enumerate(self.rules):
            by_lhs[rule.lhs].append(index)
        self._by_lhs = {name: tuple(ix) for name, ix in by_lhs.items()}

    def rule_indices(self, nonterminal: str) -> tuple[int, ...]:
        """Indices of the rules with the given left-hand side, in index order."""
        return self._by_lhs.get(nonterminal, ())

    def rules_for(self, nonterminal: str) -> Iterator[tuple[int, Rule]]:
        for index in self.rule_indices(nonterminal):
            yield index, self.rules[index]

    def with_start(self, start: str) -> Grammar:
        return Grammar(
            nonterminals=self.nonterminals,
            actions=self.actions,
            rules=self.rules,
            start=start,
        )

    @property
    def is_weak_cnf(self) -> bool:
        """Every rule is ``X -> Y Z``, ``X -> a`` with a in {-1, 0, 1}, or ``X -> eps``."""
        for rule in self.rules:
            if rule.is_epsilon or rule.is_binary:
                continue
            if rule.is_terminal and rule.rhs[0] in (-1, 0, 1):
                continue
            return False
        return True


class Gvas(BaseModel):
    """Grammar-controlled one-counter VAS: a grammar plus an initial counter value."""

    model_config = ConfigDict(frozen=True)

    grammar: Grammar
    c_init: int = Field(default=0, ge=0)

    @property
    def start(self) -> str:
        return self.grammar.start

    @property
    def nonterminals(self) -> tuple[str, ...]:
        return self.grammar.nonterminals

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.grammar.rules

    @property
    def size(self) -> int:
        """Number of nonterminals, the |V| of every bound in the package."""
        return len(self.grammar.nonterminals)

    def with_start(self, start: str, c_init: int | None = None) -> Self:
        return type(self)(
            grammar=self.grammar.with_start(start),
            c_init=self.c_init if c_init is None else c_init,
        )


class NormalizedGvas(Gvas):
    """A GVAS in weak CNF whose nonterminals are all productive."""

    @model_validator(mode="after")
    def _check_normalized(self) -> Self:
        if not self.grammar.is_weak_cnf:
            raise ValueError("grammar is not in weak CNF (X -> Y Z | a | eps, a in {-1,0,1})")
        from pvas_bound.core.grammar import productive_set

        dead = set(self.grammar.nonterminals) - productive_set(self.grammar)
        if dead:
            raise ValueError(f"non-productive nonterminals: {sorted(dead)}")
        return self


class ParseTree(BaseModel):
    """Ordered tree labelled by nonterminals, actions, or ``None`` for an epsilon leaf."""

    model_config = ConfigDict(frozen=True)

    symbol: Symbol | None = None
    children: tuple[ParseTree, ...] = ()

    @property
    def is_epsilon(self) -> bool:
        return self.symbol is None

    @property
    def is_action(self) -> bool:
        return isinstance(self.symbol, int)

    @property
    def is_nonterminal(self) -> bool:
        return isinstance(self.symbol, str)

    def walk(self) -> Iterator[tuple[NodePath, ParseTree]]:
        """Pre-order traversal yielding ``(path, node)``."""
        stack: list[tuple[NodePath, ParseTree]] = [((), self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for index in range(len(node.children) - 1, -1, -1):
                stack.append(((*path, index), node.children[index]))

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self) -> int:
        """Number of levels; a lone leaf has height 1."""
        return max(len(path) for path, _ in self.walk()) + 1

    def subtree(self, path: NodePath) -> ParseTree:
        node = self
        for index in path:
            node = node.children[index]
        return node

    def nonterminal_leaves(self) -> list[NodePath]:
        return [p for p, n in self.walk() if n.is_nonterminal and not n.children]

    @property
    def is_complete(self) -> bool:
        return not self.nonterminal_leaves()

    def replace(self, path: NodePath, new: ParseTree) -> ParseTree:
        """Return a copy with the subtree at ``path`` swapped for ``new``."""
        if not path:
            return new
        head, rest = path[0], path[1:]
        children = list(self.children)
        children[head] = children[head].replace(rest, new)
        return ParseTree(symbol=self.symbol, children=tuple(children))
