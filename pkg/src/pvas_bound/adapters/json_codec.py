"""JSON documents for flow trees, certificates and parse trees, plus Graphviz output."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

from pvas_bound.core.errors import FormatError
from pvas_bound.models.flowtree import Certificate, FlowTree, format_ext

if TYPE_CHECKING:
    from pvas_bound.models.grammar import NodePath, ParseTree


def _decode(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from exc


def load_flow_tree(text: str) -> FlowTree:
    """A bare tree document, or the ``tree`` member of a certificate document."""
    data = _decode(text)
    if isinstance(data, dict) and "tree" in data:
        data = data["tree"]
    return FlowTree.model_validate(data)


def load_certificate(
    text: str, s: NodePath | None = None, t: NodePath | None = None
) -> Certificate:
    """``{tree, s, t}``; explicit paths override the embedded ones."""
    data = _decode(text)
    if not isinstance(data, dict) or "tree" not in data:
        data = {"tree": data}
    if s is not None:
        data["s"] = list(s)
    if t is not None:
        data["t"] = list(t)
    if "s" not in data or "t" not in data:
        raise FormatError("certificate needs paths s and t (embedded or given explicitly)")
    return Certificate.model_validate(data)


def dump_json(document: Any) -> str:
    return json.dumps(document, indent=2) + "\n"


def flow_tree_document(flow: FlowTree) -> dict[str, Any]:
    return flow.model_dump(mode="json")


def certificate_document(cert: Certificate) -> dict[str, Any]:
    return cert.model_dump(mode="json")


def parse_tree_document(tree: ParseTree) -> dict[str, Any]:
    """Same node shape as flow trees, without annotations."""
    return {
        "sym": tree.symbol,
        "children": [parse_tree_document(child) for child in tree.children],
    }


def parse_path(text: str) -> NodePath:
    """``0.1.1`` -> (0, 1, 1); the empty string and ``root`` name the root."""
    if text in ("", "root"):
        return ()
    try:
        return tuple(int(part) for part in text.split("."))
    except ValueError as exc:
        raise FormatError(f"bad node path {text!r}") from exc


def _label(node: FlowTree) -> str:
    if node.symbol is None:
        name = "eps"
    else:
        name = str(node.symbol)
    return f"{name}\\n{format_ext(node.in_value)} | {format_ext(node.out_value)}"


def to_dot(flow: FlowTree, marked: tuple[NodePath, ...] = ()) -> str:
    """Graphviz digraph of ``flow``; ``marked`` nodes are drawn doubled."""
    ids: dict[NodePath, str] = {}
    out = ["digraph flow {", "  node [shape=box, fontname=monospace];"]
    for path, node in flow.walk():
        ident = f"n{len(ids)}"
        ids[path] = ident
        shape = ", peripheries=2" if path in marked else ""
        label = _label(node).replace('"', '\\"')
        out.append(f'  {ident} [label="{label}"{shape}];')
        if path:
            out.append(f"  {ids[path[:-1]]} -> {ident};")
    out.append("}")
    return "\n".join(out) + "\n"
