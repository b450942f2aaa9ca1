"""Pushdown VAS data models."""

from __future__ import annotations

from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StackOpKind(StrEnum):
    PUSH = "push"
    POP = "pop"
    NOP = "nop"


class StackOp(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: StackOpKind = StackOpKind.NOP
    symbol: str | None = None

    @model_validator(mode="after")
    def _check_symbol(self) -> Self:
        if (self.kind is StackOpKind.NOP) != (self.symbol is None):
            raise ValueError("a stack symbol is required exactly for push and pop")
        return self

    def __str__(self) -> str:
        return "nop" if self.symbol is None else f"{self.kind.value}={self.symbol}"


NOP = StackOp()


def push(symbol: str) -> StackOp:
    return StackOp(kind=StackOpKind.PUSH, symbol=symbol)


def pop(symbol: str) -> StackOp:
    return StackOp(kind=StackOpKind.POP, symbol=symbol)


class Transition(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    delta: tuple[int, ...]
    op: StackOp = NOP
    target: str


class Config(BaseModel):
    """A configuration; the top of the stack is the rightmost symbol."""

    model_config = ConfigDict(frozen=True)

    state: str
    counters: tuple[int, ...]
    stack: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_counters(self) -> Self:
        if any(c < 0 for c in self.counters):
            raise ValueError("counters must be nonnegative")
        return self

    def __str__(self) -> str:
        stack = ",".join(self.stack) or "-"
        return f"({self.state}, {' '.join(map(str, self.counters))}, {stack})"


class Pvas(BaseModel):
    """States, stack alphabet, initial configuration and transitions."""

    model_config = ConfigDict(frozen=True)

    states: tuple[str, ...]
    stack_alphabet: tuple[str, ...] = ()
    q_init: str
    c_init: tuple[int, ...] = Field(min_length=1)
    w_init: tuple[str, ...] = ()
    transitions: tuple[Transition, ...] = ()

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        states = set(self.states)
        alphabet = set(self.stack_alphabet)
        if self.q_init not in states:
            raise ValueError(f"initial state {self.q_init!r} is not a state")
        if any(c < 0 for c in self.c_init):
            raise ValueError("initial counters must be nonnegative")
        if any(g not in alphabet for g in self.w_init):
            raise ValueError("initial stack uses an undeclared symbol")
        for index, tr in enumerate(self.transitions):
            if tr.source not in states or tr.target not in states:
                raise ValueError(f"transition {index}: unknown state")
            if len(tr.delta) != self.dimension:
                raise ValueError(f"transition {index}: delta length differs from dimension")
            if tr.op.symbol is not None and tr.op.symbol not in alphabet:
                raise ValueError(f"transition {index}: unknown stack symbol {tr.op.symbol!r}")
        return self

    @property
    def dimension(self) -> int:
        return len(self.c_init)

    @property
    def initial(self) -> Config:
        return Config(state=self.q_init, counters=self.c_init, stack=self.w_init)

    def outgoing(self, state: str) -> list[Transition]:
        return [tr for tr in self.transitions if tr.source == state]


class Truncation(BaseModel):
    """Which budgets a bounded exploration ran into."""

    model_config = ConfigDict(frozen=True)

    counter: bool = False
    stack: bool = False
    configs: bool = False

    @property
    def hit(self) -> bool:
        return self.counter or self.stack or self.configs


class ReachResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    configs: frozenset[Config]
    truncated: Truncation = Field(default_factory=Truncation)

    def counter_values(self, index: int = 0) -> set[int]:
        return {config.counters[index] for config in self.configs}
