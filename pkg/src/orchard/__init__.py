"""Paired expression trees with cross-tree COPY references: parse, evaluate, generate, score."""

from .errors import OrchardError, ParseError
from .evaluator import LevelValueTable, build_table, eval_node, eval_pair, oracle_eval_pair
from .generator import GenConfig, SplitSpec, build_dataset, paper_splits, sample_pair, sample_tree
from .scorer import BinReport, score
from .text import canonicalize, parse_line, parse_pair, serialize, tokenize
from .tree import (
    CopyLeaf,
    DigitLeaf,
    ExprTree,
    Family,
    OperatorKind,
    OpNode,
    SequencePair,
    depth,
    level_order,
    node_count,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BinReport",
    "CopyLeaf",
    "DigitLeaf",
    "ExprTree",
    "Family",
    "GenConfig",
    "LevelValueTable",
    "OpNode",
    "OperatorKind",
    "OrchardError",
    "ParseError",
    "SequencePair",
    "SplitSpec",
    "build_dataset",
    "build_table",
    "canonicalize",
    "depth",
    "eval_node",
    "eval_pair",
    "level_order",
    "node_count",
    "oracle_eval_pair",
    "paper_splits",
    "parse_line",
    "parse_pair",
    "sample_pair",
    "sample_tree",
    "score",
    "serialize",
    "tokenize",
    "validate",
]
