"""Exception hierarchy shared by the parser, evaluator, generator and scorer."""

from __future__ import annotations


class OrchardError(Exception):
    """Base class for every error raised by this package."""


class ParseError(OrchardError, ValueError):
    """Input text is not a well-formed sequence pair."""


class EmptyInput(ParseError):
    pass


class UnknownToken(ParseError):
    def __init__(self, position: int, lexeme: str) -> None:
        super().__init__(f"unknown token {lexeme!r} at position {position}")
        self.position = position
        self.lexeme = lexeme


class UnexpectedToken(ParseError):
    def __init__(self, position: int, lexeme: str, expected: str) -> None:
        super().__init__(f"unexpected token {lexeme!r} at position {position}, expected {expected}")
        self.position = position
        self.lexeme = lexeme


class UnbalancedBrackets(ParseError):
    pass


class MissingDelimiter(ParseError):
    pass


class EmptyOperandList(ParseError):
    pass


class MissingOperator(ParseError):
    pass


class CopyArityError(ParseError):
    pass


class BareCopySentence(ParseError):
    """A whole sentence of the form ``[ COPY n ]``; only accepted in lenient mode."""


class CopyInFirstTree(ParseError):
    pass


class IndexOutOfRange(OrchardError, IndexError):
    def __init__(self, index: int, size: int) -> None:
        super().__init__(f"COPY index {index} out of range for first tree with {size} nodes")
        self.index = index
        self.size = size


class MissingTable(OrchardError):
    """A COPY leaf was evaluated without a first-tree value table."""


class InvalidDepth(OrchardError, ValueError):
    pass


class MissingRefCount(OrchardError, ValueError):
    pass


class InvalidSpec(OrchardError, ValueError):
    pass


class ScoreError(OrchardError):
    pass


class LineCountMismatch(ScoreError):
    pass


class UnreadableFile(ScoreError):
    pass
