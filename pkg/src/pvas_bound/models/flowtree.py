"""Flow trees, certificates and ranks."""

from __future__ import annotations

import math
from collections.abc import Iterator
from typing import Annotated, NamedTuple, Self

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    model_validator,
)

from pvas_bound.models.grammar import NodePath, ParseTree, Symbol

NEG_INF = -math.inf


def _coerce_ext_nat(value: object) -> int | float:
    if value == "-inf" or (isinstance(value, float) and value == NEG_INF):
        return NEG_INF
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"expected a natural number or '-inf', got {value!r}")
    if value < 0:
        raise ValueError(f"annotations are natural numbers or '-inf', got {value}")
    return value


def _dump_ext_nat(value: int | float) -> int | str:
    return "-inf" if value == NEG_INF else int(value)


# A natural number or -inf. -inf is the float, so ordinary comparisons order it below
# every natural and -inf < -inf is false.
ExtNat = Annotated[
    int | float,
    BeforeValidator(_coerce_ext_nat),
    PlainSerializer(_dump_ext_nat, when_used="json"),
]


def format_ext(value: int | float) -> str:
    if value == math.inf:
        return "+inf"
    if value == NEG_INF:
        return "-inf"
    return str(int(value))


class FlowTree(BaseModel):
    """A parse tree whose nodes carry input and output values."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, serialize_by_alias=True)

    symbol: Symbol | None = Field(default=None, alias="sym")
    in_value: ExtNat = Field(default=NEG_INF, alias="in")
    out_value: ExtNat = Field(default=NEG_INF, alias="out")
    children: tuple[FlowTree, ...] = ()

    def walk(self) -> Iterator[tuple[NodePath, FlowTree]]:
        stack: list[tuple[NodePath, FlowTree]] = [((), self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for index in range(len(node.children) - 1, -1, -1):
                stack.append(((*path, index), node.children[index]))

    def node(self, path: NodePath) -> FlowTree:
        node = self
        for index in path:
            node = node.children[index]
        return node

    def has_node(self, path: NodePath) -> bool:
        node = self
        for index in path:
            if not 0 <= index < len(node.children):
                return False
            node = node.children[index]
        return True

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def parse_tree(self) -> ParseTree:
        """The underlying parse tree, annotations dropped."""
        return ParseTree(
            symbol=self.symbol,
            children=tuple(child.parse_tree() for child in self.children),
        )

    def relabel(self, in_value: int | float, out_value: int | float) -> FlowTree:
        return self.model_copy(update={"in_value": in_value, "out_value": out_value})

    @classmethod
    def bottom(cls, tree: ParseTree, in_value: int | float = NEG_INF) -> FlowTree:
        """Annotate ``tree`` with -inf everywhere except the root input."""
        return cls(
            symbol=tree.symbol,
            in_value=in_value,
            out_value=NEG_INF,
            children=tuple(cls.bottom(child) for child in tree.children),
        )


class Certificate(BaseModel):
    """A flow tree with two marked nodes ``s`` strictly above ``t``."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, serialize_by_alias=True)

    flow: FlowTree = Field(alias="tree")
    s: NodePath
    t: NodePath

    @model_validator(mode="after")
    def _check_paths(self) -> Self:
        for name, path in (("s", self.s), ("t", self.t)):
            if not self.flow.has_node(path):
                raise ValueError(f"path {name}={list(path)} addresses no node")
        return self


class Rank(NamedTuple):
    """(number of finite annotations, their sum); compared lexicographically."""

    first: int
    second: int


class Violation(BaseModel):
    """One failed condition at one node."""

    model_config = ConfigDict(frozen=True)

    path: NodePath
    message: str

    def __str__(self) -> str:
        where = ".".join(str(i) for i in self.path) or "root"
        return f"{where}: {self.message}"
