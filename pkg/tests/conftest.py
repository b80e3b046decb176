from __future__ import annotations

from hypothesis import strategies as st

from orchard.text import canonicalize, parse_line
from orchard.tree import CopyLeaf, DigitLeaf, ExprTree, OperatorKind, OpNode, SequencePair, node_count

BRANCHING = [OperatorKind.FIRST, OperatorKind.LAST, OperatorKind.MIN, OperatorKind.MAX]


def pair_of(text: str, lenient: bool = False) -> SequencePair:
    return parse_line(canonicalize(text), lenient=lenient)


def tree_of(text: str) -> ExprTree:
    """First tree of ``text`` (a single sentence)."""
    return pair_of(text + " X [ FIRST 0 ]").first


digit_leaves = st.integers(0, 9).map(DigitLeaf)


def op_nodes(leaves):
    return st.recursive(
        st.builds(
            lambda op, xs: OpNode(op, tuple(xs)),
            st.sampled_from(BRANCHING),
            st.lists(leaves, min_size=1, max_size=4),
        ),
        lambda children: st.builds(
            lambda op, xs: OpNode(op, tuple(xs)),
            st.sampled_from(BRANCHING),
            st.lists(st.one_of(leaves, children), min_size=1, max_size=4),
        ),
        max_leaves=40,
    )


trees = op_nodes(digit_leaves).map(ExprTree)


@st.composite
def pairs(draw):
    first = draw(trees)
    size = node_count(first)
    leaves = st.one_of(digit_leaves, st.integers(0, size - 1).map(CopyLeaf))
    second = ExprTree(draw(op_nodes(leaves)))
    return SequencePair(first, second)
