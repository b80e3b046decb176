from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pair_of, tree_of, trees
from orchard.tree import (
    CopyLeaf,
    DigitLeaf,
    ExprTree,
    OperatorKind,
    OpNode,
    SequencePair,
    depth,
    iter_nodes,
    level_order,
    node_count,
    validate,
)


def levels_by_recursion(tree):
    # Independent of the queue-based traversal: collect per level depth-first.
    rows = []

    def walk(node, level):
        if level == len(rows):
            rows.append([])
        rows[level].append(node)
        if isinstance(node, OpNode):
            for child in node.operands:
                walk(child, level + 1)

    walk(tree.root, 0)
    return [node for row in rows for node in row]


def describe(node):
    if isinstance(node, DigitLeaf):
        return node.value
    if isinstance(node, CopyLeaf):
        return f"COPY {node.index}"
    return node.op.value


def test_operator_kinds():
    assert len(OperatorKind) == 5
    assert [k.category for k in OperatorKind] == [
        "positional",
        "positional",
        "comparative",
        "comparative",
        "relational",
    ]
    assert not OperatorKind.COPY.is_branching
    assert all(k.is_branching for k in OperatorKind if k is not OperatorKind.COPY)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("[ MAX 2 6 0 1 ]", ["MAX", 2, 6, 0, 1]),
        ("[ FIRST 5 ]", ["FIRST", 5]),
        ("[ FIRST [ LAST 7 3 ] 2 0 9 ]", ["FIRST", "LAST", 2, 0, 9, 7, 3]),
    ],
)
def test_level_order_examples(text, expected):
    tree = tree_of(text)
    assert [describe(n) for n in level_order(tree)] == expected
    assert level_order(tree) == levels_by_recursion(tree)


@given(trees)
def test_level_order_matches_recursive_levels(tree):
    order = level_order(tree)
    assert order == levels_by_recursion(tree)
    assert len(order) == node_count(tree)
    assert order[0] is tree.root
    # a permutation of the nodes: every object exactly once
    assert sorted(map(id, order)) == sorted(map(id, iter_nodes(tree)))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("[ FIRST 2 6 0 1 ]", 2),
        ("[ FIRST [ LAST 7 3 ] 2 0 9 ]", 3),
        ("[ MIN 1 [ MAX 2 [ LAST 3 ] ] ]", 4),
    ],
)
def test_depth_examples(text, expected):
    assert depth(tree_of(text)) == expected


def replace_first_digit(node, subtree):
    """Copy of ``node`` with its first DigitLeaf (pre-order) replaced by ``subtree``."""
    done = False

    def go(n):
        nonlocal done
        if isinstance(n, DigitLeaf) and not done:
            done = True
            return subtree
        if isinstance(n, OpNode):
            return OpNode(n.op, tuple(go(c) for c in n.operands))
        return n

    return go(node)


@given(trees, trees)
def test_depth_at_least_two_and_monotone(tree, graft):
    assert depth(tree) >= 2
    grown = ExprTree(replace_first_digit(tree.root, graft.root))
    assert depth(grown) >= depth(tree)


def test_validate_paper_copy_example():
    pair = pair_of("[MAX 2 6 0 1 ] X [COPY 1 ]", lenient=True)
    assert validate(pair) == []
    assert [v.kind for v in validate(pair, strict=True)] == ["non-operator root"]


def test_validate_index_out_of_range():
    first = tree_of("[ MAX 2 6 0 1 ]")
    pair = SequencePair(first, ExprTree(CopyLeaf(9)))
    (violation,) = validate(pair)
    assert violation.kind == "index out of range"
    assert "9" in violation.detail and "5" in violation.detail


def test_validate_collects_every_violation():
    first = ExprTree(OpNode(OperatorKind.MIN, (CopyLeaf(0), DigitLeaf(12), OpNode(OperatorKind.MAX, ()))))
    second = ExprTree(DigitLeaf(3))
    kinds = sorted(v.kind for v in validate(SequencePair(first, second)))
    assert kinds == ["COPY in first tree", "digit out of range", "empty operand list", "non-operator root"]


def test_validate_copy_first_root_and_copy_operator():
    pair = SequencePair(ExprTree(CopyLeaf(0)), ExprTree(OpNode(OperatorKind.COPY, (DigitLeaf(1),))))
    kinds = sorted(v.kind for v in validate(pair))
    assert kinds == ["COPY as operator", "COPY in first tree", "non-operator root"]


def test_validate_checks_stored_answer():
    pair = pair_of("[ MAX 2 6 0 1 ] X [ FIRST [ COPY 1 ] ]")
    assert validate(SequencePair(pair.first, pair.second, (6, 2))) == []
    (violation,) = validate(SequencePair(pair.first, pair.second, (6, 3)))
    assert violation.kind == "wrong answer"


@given(st.data())
def test_valid_pairs_have_addressable_copies(data):
    from conftest import pairs

    pair = data.draw(pairs())
    assert validate(pair) == []
    size = node_count(pair.first)
    for node in iter_nodes(pair.second):
        if isinstance(node, CopyLeaf):
            assert 0 <= node.index < size


def test_nodes_are_immutable():
    leaf = DigitLeaf(3)
    with pytest.raises(AttributeError):
        leaf.value = 4  # type: ignore[misc]
