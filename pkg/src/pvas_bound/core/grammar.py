"""Yields, productivity, derivability and tabular membership."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from typing import TYPE_CHECKING

from pvas_bound.core.errors import EmptyLanguageError, IncompleteTreeError, NotNormalizedError
from pvas_bound.models.grammar import Grammar, Gvas, ParseTree, Rule, Word

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)

# Recognition backpointer: (rule index, split point) for binary rules, (rule index, -1)
# for leaf and epsilon rules.
_Back = tuple[int, int]


def _as_grammar(source: Grammar | Gvas) -> Grammar:
    return source.grammar if isinstance(source, Gvas) else source


def yield_of(tree: ParseTree) -> Word:
    """Leaf actions from left to right; raises on the first nonterminal leaf."""
    word: list[int] = []
    for path, node in tree.walk():
        if node.children:
            continue
        if isinstance(node.symbol, str):
            raise IncompleteTreeError(path, node.symbol)
        if node.symbol is not None:
            word.append(node.symbol)
    return tuple(word)


def sum_of(word: Iterable[int]) -> int:
    return sum(word)


def leaf_tree(symbol: int | None) -> ParseTree:
    return ParseTree(symbol=symbol)


def rule_node(rule: Rule, children: list[ParseTree]) -> ParseTree:
    """Node for ``rule``; an epsilon rule gets its single epsilon leaf."""
    if rule.is_epsilon:
        return ParseTree(symbol=rule.lhs, children=(leaf_tree(None),))
    return ParseTree(symbol=rule.lhs, children=tuple(children))


def productive_rounds(source: Grammar | Gvas) -> dict[str, tuple[int, int]]:
    """For each productive nonterminal, the round it became productive and the rule used.

    Rounds are Jacobi rounds, so the rule's nonterminal children became productive in an
    earlier round.
    """
    grammar = _as_grammar(source)
    found: dict[str, tuple[int, int]] = {}
    round_no = 0
    while True:
        round_no += 1
        fresh: dict[str, tuple[int, int]] = {}
        for index, rule in enumerate(grammar.rules):
            if rule.lhs in found or rule.lhs in fresh:
                continue
            if all(isinstance(s, int) or s in found for s in rule.rhs):
                fresh[rule.lhs] = (round_no, index)
        if not fresh:
            return found
        found.update(fresh)


def productive_set(source: Grammar | Gvas) -> frozenset[str]:
    return frozenset(productive_rounds(source))


def prune_nonproductive(gvas: Gvas) -> Gvas:
    """Drop non-productive nonterminals and every rule that mentions one."""
    grammar = gvas.grammar
    alive = productive_set(grammar)
    if grammar.start not in alive:
        raise EmptyLanguageError(grammar.start)
    rules = tuple(
        rule
        for rule in grammar.rules
        if rule.lhs in alive and all(isinstance(s, int) or s in alive for s in rule.rhs)
    )
    used = {s for rule in rules for s in rule.rhs if isinstance(s, int)}
    pruned = Grammar(
        nonterminals=tuple(n for n in grammar.nonterminals if n in alive),
        actions=tuple(sorted(used)),
        rules=rules,
        start=grammar.start,
    )
    dropped = len(grammar.nonterminals) - len(pruned.nonterminals)
    if dropped:
        logger.debug("pruned %d non-productive nonterminals", dropped)
    return type(gvas)(grammar=pruned, c_init=gvas.c_init)


def derivable_set(source: Grammar | Gvas) -> frozenset[str]:
    """Nonterminals occurring in some sentential form of the start symbol."""
    grammar = _as_grammar(source)
    seen = {grammar.start}
    queue = deque([grammar.start])
    while queue:
        current = queue.popleft()
        for _, rule in grammar.rules_for(current):
            for sym in rule.rhs:
                if isinstance(sym, str) and sym not in seen:
                    seen.add(sym)
                    queue.append(sym)
    return frozenset(seen)


def shortest_tree(source: Grammar | Gvas, nonterminal: str) -> ParseTree:
    """A complete tree of minimal height for ``nonterminal``; it is elementary."""
    grammar = _as_grammar(source)
    rounds = productive_rounds(grammar)
    if nonterminal not in rounds:
        raise EmptyLanguageError(nonterminal)

    def build(name: str) -> ParseTree:
        rule = grammar.rules[rounds[name][1]]
        children = [leaf_tree(s) if isinstance(s, int) else build(s) for s in rule.rhs]
        return rule_node(rule, children)

    return build(nonterminal)


class _Recognizer:
    """CYK-style table over a weak-CNF grammar, epsilon rules included."""

    def __init__(self, grammar: Grammar, word: Word) -> None:
        if not grammar.is_weak_cnf:
            raise NotNormalizedError("membership needs a grammar in weak CNF; normalize first")
        self.grammar = grammar
        self.word = word
        self.table: dict[tuple[int, int], dict[str, _Back]] = {}
        n = len(word)
        for length in range(n + 1):
            for i in range(n - length + 1):
                self._fill(i, i + length)

    def _fill(self, i: int, j: int) -> None:
        cell: dict[str, _Back] = {}
        self.table[(i, j)] = cell
        binary: list[tuple[int, Rule]] = []
        for index, rule in enumerate(self.grammar.rules):
            if rule.is_epsilon:
                if i == j:
                    cell.setdefault(rule.lhs, (index, -1))
            elif rule.is_terminal:
                if j == i + 1 and self.word[i] == rule.rhs[0]:
                    cell.setdefault(rule.lhs, (index, -1))
            else:
                binary.append((index, rule))
        changed = True
        while changed:
            changed = False
            for index, rule in binary:
                if rule.lhs in cell:
                    continue
                left, right = rule.rhs
                for k in range(i, j + 1):
                    if left in self.table[(i, k)] and right in self.table[(k, j)]:
                        cell[rule.lhs] = (index, k)
                        changed = True
                        break

    def accepts(self, nonterminal: str, i: int = 0, j: int | None = None) -> bool:
        return nonterminal in self.table[(i, len(self.word) if j is None else j)]

    def tree(self, nonterminal: str, i: int, j: int) -> ParseTree:
        index, split = self.table[(i, j)][nonterminal]
        rule = self.grammar.rules[index]
        if split < 0:
            children = [leaf_tree(s) for s in rule.rhs if isinstance(s, int)]
            return rule_node(rule, children)
        left, right = rule.rhs
        assert isinstance(left, str) and isinstance(right, str)
        return rule_node(rule, [self.tree(left, i, split), self.tree(right, split, j)])


def member(source: Grammar | Gvas, nonterminal: str, word: Word) -> bool:
    """Whether ``word`` is derivable from ``nonterminal``."""
    return _Recognizer(_as_grammar(source), tuple(word)).accepts(nonterminal)


def parse_word(source: Grammar | Gvas, nonterminal: str, word: Word) -> ParseTree | None:
    """A complete parse tree for ``word`` rooted at ``nonterminal``, if one exists."""
    recognizer = _Recognizer(_as_grammar(source), tuple(word))
    if not recognizer.accepts(nonterminal):
        return None
    return recognizer.tree(nonterminal, 0, len(word))


def prefix_closure_violations(source: Grammar | Gvas, max_len: int) -> list[Word]:
    """Member words up to ``max_len`` with a prefix outside the language of the start symbol."""
    grammar = _as_grammar(source)
    alphabet = sorted({s for r in grammar.rules for s in r.rhs if isinstance(s, int)})
    bad: set[Word] = set()
    if not alphabet:
        return []
    for letters in itertools.product(alphabet, repeat=max_len):
        word = tuple(letters)
        recognizer = _Recognizer(grammar, word)
        accepted = [recognizer.accepts(grammar.start, 0, k) for k in range(max_len + 1)]
        for k in range(max_len + 1):
            if accepted[k] and not all(accepted[:k]):
                bad.add(word[:k])
    return sorted(bad, key=lambda w: (len(w), w))
