"""Tokenizer, parser and serializer for the bracketed polish-notation surface syntax.

A line holds two sentences separated by ``X``::

    [ FIRST [ LAST 7 3 ] 2 0 9 ] X [ MAX [ COPY 1 ] [ COPY 4 ] ]

Every token is separated by a single space in canonical form. A COPY index
larger than 9 is written as consecutive digit tokens (``[ COPY 1 2 ]`` is 12).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    BareCopySentence,
    CopyArityError,
    CopyInFirstTree,
    EmptyInput,
    EmptyOperandList,
    IndexOutOfRange,
    MissingDelimiter,
    MissingOperator,
    ParseError,
    UnbalancedBrackets,
    UnexpectedToken,
    UnknownToken,
)
from .tree import CopyLeaf, DigitLeaf, ExprTree, Node, OperatorKind, OpNode, SequencePair


class TokenKind(enum.Enum):
    LBRACKET = "["
    RBRACKET = "]"
    OPWORD = "OP"
    DIGIT = "DIGIT"
    XDELIM = "X"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    value: Optional[Union[OperatorKind, int]] = None

    @property
    def lexeme(self) -> str:
        if self.kind is TokenKind.OPWORD:
            return self.value.value  # type: ignore[union-attr]
        if self.kind is TokenKind.DIGIT:
            return str(self.value)
        return self.kind.value


LBR = Token(TokenKind.LBRACKET)
RBR = Token(TokenKind.RBRACKET)
XDELIM = Token(TokenKind.XDELIM)

VOCABULARY: dict[str, Token] = {
    "[": LBR,
    "]": RBR,
    "X": XDELIM,
    **{op.value: Token(TokenKind.OPWORD, op) for op in OperatorKind},
    **{str(d): Token(TokenKind.DIGIT, d) for d in range(10)},
}

_BRACKETS = re.compile(r"([\[\]])")


def canonicalize(text: str) -> str:
    """Normalise spacing: brackets become separate tokens, runs of whitespace one space.

    This lets the compact form ``[MAX 2 6 0 1 ] X [COPY 1 ]`` be read.
    """
    return " ".join(_BRACKETS.sub(r" \1 ", text).split())


def tokenize(text: str) -> list[Token]:
    lexemes = text.split()
    if not lexemes:
        raise EmptyInput("input contains no tokens")
    lookup = VOCABULARY.get
    tokens = [lookup(lexeme) for lexeme in lexemes]
    if None in tokens:
        position = tokens.index(None)
        raise UnknownToken(position, lexemes[position])
    return tokens  # type: ignore[return-value]


def detokenize(tokens: Sequence[Token]) -> str:
    return " ".join(token.lexeme for token in tokens)


def parse_pair(tokens: Sequence[Token], *, lenient: bool = False) -> SequencePair:
    """Build a :class:`SequencePair` from tokens.

    ``lenient`` accepts a second sentence that is only a reference, ``[ COPY n ]``.
    The result always satisfies :func:`orchard.tree.validate`.
    """
    if not tokens:
        raise EmptyInput("input contains no tokens")
    level = 0
    delimiters = []
    for position, token in enumerate(tokens):
        if token is LBR:
            level += 1
        elif token is RBR:
            level -= 1
            if level < 0:
                raise UnbalancedBrackets(f"unmatched ']' at position {position}")
        elif token is XDELIM:
            if level:
                raise UnexpectedToken(position, "X", "operand or ']'")
            delimiters.append(position)
    if level:
        raise UnbalancedBrackets(f"{level} unclosed '['")
    if len(delimiters) != 1:
        raise MissingDelimiter(f"expected exactly one top-level 'X', found {len(delimiters)}")

    split = delimiters[0]
    parser = _Parser(tokens)
    first = parser.sentence(0, split, "first")
    size = parser.nodes
    second = parser.sentence(split + 1, len(tokens), "second")
    if type(second) is CopyLeaf and not lenient:
        raise BareCopySentence("second sentence is a bare COPY reference (lenient mode only)")

    for index in parser.copy_indices:
        if index >= size:
            raise IndexOutOfRange(index, size)
    return SequencePair(ExprTree(first), ExprTree(second))


def parse_line(line: str, *, lenient: bool = False) -> SequencePair:
    """Tokenize and parse one line of canonical text."""
    return parse_pair(tokenize(line), lenient=lenient)


class _Parser:
    def __init__(self, tokens: Sequence[Token]) -> None:
        self.tokens = tokens
        self.copy_indices: list[int] = []
        self.nodes = 0

    def sentence(self, start: int, end: int, which: str) -> Node:
        if start == end:
            raise ParseError(f"{which} sentence is empty")
        if self.tokens[start].kind is not TokenKind.LBRACKET:
            raise UnexpectedToken(start, self.tokens[start].lexeme, "'['")
        node, pos = self.group(start, which == "first")
        if pos != end:
            if self.tokens[pos].kind is TokenKind.LBRACKET:
                raise MissingDelimiter(f"second sentence at position {pos} without 'X' delimiter")
            raise UnexpectedToken(pos, self.tokens[pos].lexeme, "'X' or end of input")
        return node

    def group(self, pos: int, in_first: bool) -> tuple[Node, int]:
        # tokens[pos] is '[' and brackets are known to balance.
        tokens = self.tokens
        head = tokens[pos + 1]
        if head.kind is not TokenKind.OPWORD:
            raise MissingOperator(f"'[' at position {pos} is not followed by an operator")
        if head.value is OperatorKind.COPY:
            return self.copy(pos, in_first)

        operands: list[Node] = []
        subtrees = 0  # counted by their own group() call
        pos += 2
        while True:
            token = tokens[pos]
            kind = token.kind
            if kind is TokenKind.DIGIT:
                operands.append(DigitLeaf(token.value))  # type: ignore[arg-type]
                pos += 1
            elif kind is TokenKind.LBRACKET:
                child, pos = self.group(pos, in_first)
                operands.append(child)
                subtrees += 1
            elif kind is TokenKind.RBRACKET:
                break
            else:
                raise UnexpectedToken(pos, token.lexeme, "operand or ']'")
        if not operands:
            raise EmptyOperandList(f"{head.lexeme} at position {pos - 1} has no operands")
        self.nodes += 1 + len(operands) - subtrees
        return OpNode(head.value, tuple(operands)), pos + 1  # type: ignore[arg-type]

    def copy(self, pos: int, in_first: bool) -> tuple[Node, int]:
        if in_first:
            raise CopyInFirstTree(f"COPY at position {pos + 1} in first sentence")
        start = pos + 2
        end = start
        while self.tokens[end].kind is TokenKind.DIGIT:
            end += 1
        if self.tokens[end].kind is not TokenKind.RBRACKET:
            raise CopyArityError(f"COPY at position {pos + 1} takes digit tokens only")
        digits = "".join(str(t.value) for t in self.tokens[start:end])
        if not digits:
            raise CopyArityError(f"COPY at position {pos + 1} has no index")
        if len(digits) > 1 and digits[0] == "0":
            raise CopyArityError(f"COPY index {digits!r} has a leading zero")
        index = int(digits)
        self.copy_indices.append(index)
        self.nodes += 1
        return CopyLeaf(index), end + 1


def _render(node: Node, out: list[str]) -> None:
    if type(node) is CopyLeaf:
        out.append("[ COPY " + " ".join(str(node.index)) + " ]")
        return
    if type(node) is DigitLeaf:
        out.append(_DIGITS[node.value])
        return
    out.append("[ " + node.op.value)
    for child in node.operands:
        if type(child) is DigitLeaf:
            out.append(_DIGITS[child.value])
        else:
            _render(child, out)
    out.append("]")


_DIGITS = [str(d) for d in range(10)]


def serialize_tree(tree: ExprTree) -> str:
    out: list[str] = []
    _render(tree.root, out)
    return " ".join(out)


def serialize(pair: SequencePair) -> str:
    return serialize_tree(pair.first) + " X " + serialize_tree(pair.second)
