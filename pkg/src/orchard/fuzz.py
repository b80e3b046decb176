"""Differential fuzzing: round-trip, validity, and evaluator versus oracle."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .evaluator import eval_pair, oracle_eval_pair
from .generator import DIFFICULTIES, _sample
from .text import parse_line, serialize
from .tree import CopyLeaf, DigitLeaf, ExprTree, Family, Node, OpNode, SequencePair, depth, validate

Evaluator = Callable[[SequencePair], tuple[int, int]]

VARIANTS = [(family, c) for family in Family for c in DIFFICULTIES.values()]
FUZZ_DEPTHS = range(2, 14)


@dataclass
class FuzzReport:
    checked: int = 0
    violation: Optional[str] = None
    reproducer: Optional[str] = None
    variants: Counter = field(default_factory=Counter)

    @property
    def violations(self) -> int:
        return int(self.violation is not None)

    def summary(self) -> str:
        return f"{self.checked} pairs checked, {self.violations} violations"


def check_pair(
    pair: SequencePair,
    evaluator: Evaluator = eval_pair,
    oracle: Evaluator = oracle_eval_pair,
    expected_depth: Optional[int] = None,
) -> Optional[str]:
    """Description of the first property ``pair`` breaks, or None."""
    bare = SequencePair(pair.first, pair.second)
    problems = validate(bare, strict=True)
    if problems:
        return "invalid pair: " + "; ".join(map(str, problems))
    line = serialize(bare)
    try:
        reparsed = parse_line(line)
    except Exception as exc:  # noqa: BLE001 - any parser failure is a finding
        return f"serialized pair does not parse: {type(exc).__name__}: {exc}"
    if reparsed != bare:
        return "round-trip changed the pair"
    if expected_depth is not None and not depth(pair.first) == depth(pair.second) == expected_depth:
        return f"depth {depth(pair.first)}/{depth(pair.second)} != requested {expected_depth}"
    got, want = evaluator(bare), oracle(bare)
    if got != want:
        return f"evaluator {got} != oracle {want}"
    if pair.answer is not None and tuple(pair.answer) != want:
        return f"stored answer {pair.answer} != oracle {want}"
    return None


def fuzz(
    n: int,
    seed: int,
    *,
    evaluator: Evaluator = eval_pair,
    oracle: Evaluator = oracle_eval_pair,
) -> FuzzReport:
    """Check ``n`` random pairs over all six variants and depths 2-13.

    Stops at the first violation and records a shrunken reproducer line.
    """
    rng = random.Random(seed)
    report = FuzzReport()
    for _ in range(n):
        family, c = rng.choice(VARIANTS)
        d = rng.choice(FUZZ_DEPTHS)
        pair = _sample(family, c, d, 0.5, rng).pair
        report.variants[f"{family.value}/{c}"] += 1
        problem = check_pair(pair, evaluator, oracle, expected_depth=d)
        report.checked += 1
        if problem is not None:
            report.violation = problem
            smallest = shrink(pair, lambda p: check_pair(p, evaluator, oracle) is not None)
            report.reproducer = serialize(SequencePair(smallest.first, smallest.second))
            break
    return report


def shrink(pair: SequencePair, still_fails: Callable[[SequencePair], bool]) -> SequencePair:
    """Greedy minimisation: keep taking the first smaller valid pair that still fails."""
    current = SequencePair(pair.first, pair.second)
    progress = True
    while progress:
        progress = False
        for candidate in _candidates(current):
            if not validate(candidate, strict=True) and still_fails(candidate):
                current = candidate
                progress = True
                break
    return current


def _candidates(pair: SequencePair) -> Iterator[SequencePair]:
    for root in _smaller(pair.first.root):
        yield SequencePair(ExprTree(root), pair.second)
    for root in _smaller(pair.second.root):
        yield SequencePair(pair.first, ExprTree(root))


def _smaller(node: Node) -> Iterator[Node]:
    if type(node) is DigitLeaf:
        if node.value:
            yield DigitLeaf(0)
        return
    if type(node) is CopyLeaf:
        if node.index:
            yield CopyLeaf(0)
        return
    operands = node.operands
    for child in operands:
        if type(child) is OpNode:
            yield child
    if len(operands) > 1:
        for i in range(len(operands)):
            yield OpNode(node.op, operands[:i] + operands[i + 1 :])
    for i, child in enumerate(operands):
        for replacement in _smaller(child):
            yield OpNode(node.op, operands[:i] + (replacement,) + operands[i + 1 :])
