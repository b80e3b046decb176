"""Expression-tree data model, level-order enumeration, depth and validation."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union


class OperatorKind(enum.Enum):
    FIRST = "FIRST"
    LAST = "LAST"
    MIN = "MIN"
    MAX = "MAX"
    COPY = "COPY"

    @property
    def category(self) -> str:
        return _CATEGORIES[self]

    @property
    def is_branching(self) -> bool:
        return self is not OperatorKind.COPY


_CATEGORIES = {
    OperatorKind.FIRST: "positional",
    OperatorKind.LAST: "positional",
    OperatorKind.MIN: "comparative",
    OperatorKind.MAX: "comparative",
    OperatorKind.COPY: "relational",
}


class Family(enum.Enum):
    """Operator family of a task variant."""

    FL = "fl"
    MM = "mm"

    @property
    def operators(self) -> Tuple[OperatorKind, OperatorKind]:
        if self is Family.FL:
            return (OperatorKind.FIRST, OperatorKind.LAST)
        return (OperatorKind.MIN, OperatorKind.MAX)


@dataclass(frozen=True, slots=True)
class DigitLeaf:
    value: int


@dataclass(frozen=True, slots=True)
class CopyLeaf:
    index: int


@dataclass(frozen=True, slots=True)
class OpNode:
    op: OperatorKind
    operands: Tuple["Node", ...]


Node = Union[OpNode, DigitLeaf, CopyLeaf]


@dataclass(frozen=True, slots=True)
class ExprTree:
    # A CopyLeaf root is the operatorless "[ COPY n ]" sentence, legal only as a
    # second tree in lenient mode.
    root: Node


@dataclass(frozen=True, slots=True)
class SequencePair:
    first: ExprTree
    second: ExprTree
    answer: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def level_order(tree: ExprTree) -> list[Node]:
    """Breadth-first node list; the position of a node is its COPY index."""
    out: list[Node] = []
    queue: deque[Node] = deque([tree.root])
    while queue:
        node = queue.popleft()
        out.append(node)
        if type(node) is OpNode:
            queue.extend(node.operands)
    return out


def iter_nodes(tree: ExprTree) -> Iterator[Node]:
    """Pre-order walk over every node."""
    stack: list[Node] = [tree.root]
    while stack:
        node = stack.pop()
        yield node
        if type(node) is OpNode:
            stack.extend(reversed(node.operands))


def node_count(tree: ExprTree) -> int:
    count = 0
    stack: list[Node] = [tree.root]
    while stack:
        node = stack.pop()
        count += 1
        if type(node) is OpNode:
            stack.extend(node.operands)
    return count


def depth(tree: ExprTree) -> int:
    """Number of node levels on the longest root-to-leaf path (root is level 1)."""
    return _node_depth(tree.root)


def _node_depth(node: Node) -> int:
    if type(node) is OpNode:
        return 1 + max(_node_depth(child) for child in node.operands) if node.operands else 1
    return 1


def validate(pair: SequencePair, *, strict: bool = False) -> list[Violation]:
    """Collect every structural violation of ``pair``; an empty list means valid.

    With ``strict`` a second sentence that is a bare COPY reference is reported
    too; otherwise that shorthand is accepted.
    """
    violations: list[Violation] = []
    first_root = pair.first.root
    if type(first_root) is not OpNode:
        violations.append(Violation("non-operator root", f"first tree root is {_describe(first_root)}"))
    second_root = pair.second.root
    if type(second_root) is DigitLeaf or (strict and type(second_root) is CopyLeaf):
        violations.append(Violation("non-operator root", f"second tree root is {_describe(second_root)}"))

    size = node_count(pair.first)
    for which, tree in (("first", pair.first), ("second", pair.second)):
        stack: list[Node] = [tree.root]
        while stack:
            node = stack.pop()
            kind = type(node)
            if kind is OpNode:
                if not node.operands:
                    violations.append(Violation("empty operand list", f"{node.op.value} in {which} tree"))
                if not node.op.is_branching:
                    violations.append(Violation("COPY as operator", f"COPY with operands in {which} tree"))
                stack.extend(node.operands)
            elif kind is DigitLeaf:
                if not 0 <= node.value <= 9:
                    violations.append(Violation("digit out of range", f"{node.value} in {which} tree"))
            elif which == "first":
                violations.append(Violation("COPY in first tree", f"COPY {node.index}"))
            elif not 0 <= node.index < size:
                violations.append(
                    Violation("index out of range", f"COPY index {node.index} >= node count {size}")
                )
    if pair.answer is not None and not violations:
        from .evaluator import eval_pair

        expected = eval_pair(pair)
        if tuple(pair.answer) != expected:
            violations.append(Violation("wrong answer", f"stored {pair.answer}, evaluates to {expected}"))
    return violations


def _describe(node: Node) -> str:
    if type(node) is DigitLeaf:
        return f"digit {node.value}"
    if type(node) is CopyLeaf:
        return f"COPY {node.index}"
    return node.op.value
