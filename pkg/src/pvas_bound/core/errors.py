"""Exception hierarchy for pvas-bound."""

from __future__ import annotations


class PvasBoundError(Exception):
    """Base class for every error raised by pvas-bound."""


class GrammarError(PvasBoundError, ValueError):
    """A grammar is malformed or unsuitable for the requested operation."""


class EmptyLanguageError(GrammarError):
    """The start symbol derives no terminal word."""

    def __init__(self, start: str) -> None:
        super().__init__(f"empty language: start symbol {start!r} is not productive")
        self.start = start


class NotNormalizedError(GrammarError):
    """An operation that needs weak CNF was given another grammar."""


class IncompleteTreeError(PvasBoundError, ValueError):
    """A parse tree still has a nonterminal leaf."""

    def __init__(self, path: tuple[int, ...], symbol: str) -> None:
        super().__init__(f"incomplete tree: nonterminal leaf {symbol!r} at path {list(path)}")
        self.path = path
        self.symbol = symbol


class NotFiniteError(PvasBoundError, ValueError):
    """A finite displacement was required but the entry is +inf."""


class NotDerivableError(PvasBoundError, ValueError):
    """A nonterminal does not occur in any sentential form of the start symbol."""


class UnreachablePairError(PvasBoundError, ValueError):
    """An input/output pair is not exactly reachable through a nonterminal."""


class DimensionError(PvasBoundError, ValueError):
    """The decision pipeline only handles one counter."""


class CapOverflowError(PvasBoundError, OverflowError):
    """The theoretical cap does not fit the supported integer width."""


class GuardError(PvasBoundError, ValueError):
    """An exhaustive routine was called on an instance above its size guard."""


class FormatError(PvasBoundError, ValueError):
    """A text document could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.line = line
        self.column = column


class AnnotationError(PvasBoundError, ValueError):
    """A flow-tree node has a finite output under a -inf input."""
