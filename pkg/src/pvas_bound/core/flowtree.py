"""Flow-condition checking, good trees, certificates and ranks.

The checks here read nothing but the grammar and the annotated tree; every producer in
the package is validated against them.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from pvas_bound.core.errors import AnnotationError, UnreachablePairError
from pvas_bound.models.flowtree import NEG_INF, Certificate, FlowTree, Rank, Violation, format_ext

if TYPE_CHECKING:
    from pvas_bound.models.grammar import Gvas, NodePath, NormalizedGvas, Symbol

logger = logging.getLogger(__name__)


def _check_node(
    productions: set[tuple[str, tuple[Symbol | None, ...]]],
    path: NodePath,
    node: FlowTree,
) -> list[Violation]:
    found: list[Violation] = []
    if not node.children:
        if isinstance(node.symbol, str):
            found.append(Violation(path=path, message=f"nonterminal leaf {node.symbol!r}"))
        elif node.symbol is None:
            if not node.out_value <= node.in_value:
                found.append(
                    Violation(
                        path=path,
                        message=f"epsilon-leaf out <= in fails: "
                        f"{format_ext(node.out_value)} > {format_ext(node.in_value)}",
                    )
                )
        elif not node.out_value <= node.in_value + node.symbol:
            found.append(
                Violation(
                    path=path,
                    message=f"leaf out <= in + a fails: {format_ext(node.out_value)} > "
                    f"{format_ext(node.in_value)} + ({node.symbol})",
                )
            )
        return found

    if not isinstance(node.symbol, str):
        found.append(Violation(path=path, message=f"inner node labelled {node.symbol!r}"))
        return found
    shape = tuple(child.symbol for child in node.children)
    if (node.symbol, shape) not in productions:
        rhs = " ".join("eps" if s is None else str(s) for s in shape)
        found.append(Violation(path=path, message=f"no rule {node.symbol} -> {rhs}"))
    first, last = node.children[0], node.children[-1]
    if not first.in_value <= node.in_value:
        found.append(
            Violation(
                path=path,
                message=f"first child in <= parent in fails: "
                f"{format_ext(first.in_value)} > {format_ext(node.in_value)}",
            )
        )
    if not node.out_value <= last.out_value:
        found.append(
            Violation(
                path=path,
                message=f"parent out <= last child out fails: "
                f"{format_ext(node.out_value)} > {format_ext(last.out_value)}",
            )
        )
    for index in range(1, len(node.children)):
        previous, current = node.children[index - 1], node.children[index]
        if not current.in_value <= previous.out_value:
            found.append(
                Violation(
                    path=(*path, index),
                    message=f"child in <= previous sibling out fails: "
                    f"{format_ext(current.in_value)} > {format_ext(previous.out_value)}",
                )
            )
    return found


def validate_flow_tree(gvas: Gvas, flow: FlowTree) -> list[Violation]:
    """Every violated condition, in pre-order; an empty list means the tree is valid.

    Rules of any arity are accepted. An epsilon rule is matched by a single epsilon leaf.
    """
    productions: set[tuple[str, tuple[Symbol | None, ...]]] = {
        (rule.lhs, rule.rhs if rule.rhs else (None,)) for rule in gvas.rules
    }
    violations: list[Violation] = []
    if flow.symbol != gvas.start:
        violations.append(
            Violation(path=(), message=f"root symbol {flow.symbol!r} is not {gvas.start!r}")
        )
    if flow.in_value != gvas.c_init:
        violations.append(
            Violation(
                path=(),
                message=f"root in = c_init fails: {format_ext(flow.in_value)} != {gvas.c_init}",
            )
        )
    for path, node in flow.walk():
        violations.extend(_check_node(productions, path, node))
    return violations


def good_witness(flow: FlowTree) -> tuple[NodePath, NodePath] | None:
    """First ancestor pair (s, t) with equal symbols and in(s) <= in(t).

    t runs in pre-order, s from the root down.
    """
    stack: list[tuple[NodePath, FlowTree, tuple[tuple[NodePath, FlowTree], ...]]] = [
        ((), flow, ())
    ]
    while stack:
        path, node, ancestors = stack.pop()
        for anc_path, anc in ancestors:
            if anc.symbol == node.symbol and anc.in_value <= node.in_value:
                return anc_path, path
        below = (*ancestors, (path, node))
        for index in range(len(node.children) - 1, -1, -1):
            stack.append(((*path, index), node.children[index], below))
    return None


def is_good(flow: FlowTree) -> bool:
    return good_witness(flow) is not None


def validate_certificate(gvas: Gvas, cert: Certificate) -> list[Violation]:
    """Flow-tree violations plus the certificate conditions on ``s`` and ``t``."""
    violations = validate_flow_tree(gvas, cert.flow)
    s, t = cert.s, cert.t
    if not (len(s) < len(t) and t[: len(s)] == s):
        violations.append(Violation(path=t, message="s is not a strict prefix of t"))
        return violations
    node_s, node_t = cert.flow.node(s), cert.flow.node(t)
    if node_s.symbol != node_t.symbol:
        violations.append(
            Violation(
                path=t,
                message=f"symbol mismatch: {node_s.symbol!r} at s, {node_t.symbol!r} at t",
            )
        )
    if not node_s.in_value <= node_t.in_value:
        violations.append(
            Violation(
                path=t,
                message=f"in(s) <= in(t) fails: "
                f"{format_ext(node_s.in_value)} > {format_ext(node_t.in_value)}",
            )
        )
    elif not (node_s.in_value < node_t.in_value or node_t.out_value < node_s.out_value):
        violations.append(
            Violation(
                path=t,
                message="neither strict condition holds: in(s) < in(t) or out(t) < out(s)",
            )
        )
    return violations


def rank_of(flow: FlowTree) -> Rank:
    """(finite annotation count, their sum).

    A finite output under a -inf input raises ``AnnotationError``; no valid tree has one.
    """
    count = 0
    total = 0
    for path, node in flow.walk():
        if node.in_value == NEG_INF:
            if node.out_value != NEG_INF:
                raise AnnotationError(
                    f"node {list(path)}: out = {format_ext(node.out_value)} under in = -inf"
                )
            continue
        count += 1
        total += int(node.in_value)
        if node.out_value != NEG_INF:
            count += 1
            total += int(node.out_value)
    return Rank(count, total)


def build_flow_tree(
    gvas: NormalizedGvas,
    nonterminal: str,
    value: int,
    out: int,
    max_budget: int = 1024,
) -> FlowTree:
    """A flow tree rooted at ``nonterminal`` with in = ``value`` and out = ``out`` exactly.

    The oracle budget grows from the larger endpoint until the pair shows up or the
    table closes without it.
    """
    from pvas_bound.core.oracle import ReachTable

    budget = max(16, value, out)
    while True:
        table = ReachTable(gvas, budget, start=nonterminal, c_init=value)
        if out in table.reach_set:
            logger.debug("flow tree for %s: %d => %d at budget %d", nonterminal, value, out, budget)
            return table.witness(nonterminal, value, out)
        if not table.capped or budget >= max_budget:
            break
        budget = min(2 * budget, max_budget)
    raise UnreachablePairError(
        f"{value} =>{nonterminal} {out} does not hold"
        + ("" if not table.capped else f" within budget {budget}")
    )
