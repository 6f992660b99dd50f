"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LLLKitError(Exception):
    """Base class for all errors raised by lllkit."""


class DomainError(LLLKitError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SizeLimitError(LLLKitError):
    """A configured enumeration or search cap would be exceeded."""

    def __init__(self, what: str, required: int, cap: int) -> None:
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(f"{what} requires {required} but the configured cap is {cap}")


class NullConditioningError(LLLKitError, ZeroDivisionError):
    """Conditioning on an event of probability zero."""


class MatchingError(DomainError):
    """Base class for invalid (S, T, f) triples."""


class SizeMismatchError(MatchingError):
    pass


class NotInjectiveError(MatchingError):
    pass


class ImageMismatchError(MatchingError):
    pass


class NotTotalError(MatchingError):
    pass


class HypothesisError(LLLKitError):
    """A precondition of the local lemma failed; ``hypothesis`` names which."""

    def __init__(self, hypothesis: str, detail: str) -> None:
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}")


class ParseError(LLLKitError):
    """Malformed text input, located by 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1, source: str = "<input>") -> None:
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")
