"""Evaluation of sequence pairs.

Two independent routes compute the same answer:

* :func:`eval_pair` resolves the first tree once, into a table of values aligned
  with its level order, and answers every COPY with a table lookup.
* :func:`oracle_eval_pair` is plain recursion with no table: each COPY walks the
  first tree again to locate and evaluate the referenced node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import IndexOutOfRange, MissingTable
from .tree import CopyLeaf, DigitLeaf, ExprTree, Node, OperatorKind, OpNode, SequencePair


def _first(values: Sequence[int]) -> int:
    return values[0]


def _last(values: Sequence[int]) -> int:
    return values[-1]


REDUCERS: dict[OperatorKind, Callable[[Sequence[int]], int]] = {
    OperatorKind.FIRST: _first,
    OperatorKind.LAST: _last,
    OperatorKind.MIN: min,
    OperatorKind.MAX: max,
}


@dataclass(frozen=True)
class LevelValueTable:
    """Resolved value of every first-tree node, indexed by level-order position."""

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < len(self.values):
            raise IndexOutOfRange(index, len(self.values))
        return self.values[index]


def eval_node(node: Node, table: Optional[LevelValueTable] = None) -> int:
    if type(node) is DigitLeaf:
        return node.value
    if type(node) is CopyLeaf:
        if table is None:
            raise MissingTable(f"COPY {node.index} evaluated without a first-tree table")
        return table[node.index]
    return REDUCERS[node.op]([eval_node(child, table) for child in node.operands])


def build_table(first: ExprTree) -> LevelValueTable:
    """Level-order values of a COPY-free tree, in one bottom-up pass."""
    nodes: list[Node] = [first.root]
    child_start: list[int] = []
    # nodes doubles as the BFS queue: children are appended behind the cursor.
    for node in nodes:
        if type(node) is OpNode:
            child_start.append(len(nodes))
            nodes.extend(node.operands)
        else:
            child_start.append(-1)

    # Children always sit after their parent in level order.
    values = [0] * len(nodes)
    for position in range(len(nodes) - 1, -1, -1):
        node = nodes[position]
        kind = type(node)
        if kind is DigitLeaf:
            values[position] = node.value
        elif kind is OpNode:
            start = child_start[position]
            values[position] = REDUCERS[node.op](values[start : start + len(node.operands)])
        else:
            raise MissingTable(f"first tree contains COPY {node.index}")
    return LevelValueTable(tuple(values))


def eval_pair(pair: SequencePair) -> tuple[int, int]:
    table = build_table(pair.first)
    return table.values[0], eval_node(pair.second.root, table)


def oracle_eval_pair(pair: SequencePair) -> tuple[int, int]:
    """Reference evaluator: direct recursion, re-walking the first tree per COPY."""
    first_root = pair.first.root

    def evaluate(node: Node, in_second: bool) -> int:
        if isinstance(node, DigitLeaf):
            return node.value
        if isinstance(node, CopyLeaf):
            if not in_second:
                raise MissingTable(f"COPY {node.index} inside the first tree")
            return evaluate(_nth_by_levels(first_root, node.index), False)
        values = [evaluate(child, in_second) for child in node.operands]
        if node.op is OperatorKind.FIRST:
            return values[0]
        if node.op is OperatorKind.LAST:
            return values[len(values) - 1]
        if node.op is OperatorKind.MIN:
            best = values[0]
            for v in values:
                if v < best:
                    best = v
            return best
        best = values[0]
        for v in values:
            if v > best:
                best = v
        return best

    return evaluate(first_root, False), evaluate(pair.second.root, True)


def _nth_by_levels(root: Node, n: int) -> Node:
    # Expand whole levels one at a time instead of using a queue.
    level: list[Node] = [root]
    seen = 0
    while level:
        if n < seen + len(level):
            return level[n - seen]
        seen += len(level)
        level = [child for node in level if isinstance(node, OpNode) for child in node.operands]
    raise IndexOutOfRange(n, seen)
