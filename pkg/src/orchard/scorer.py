"""Per-depth accuracy on the first tree, the second tree, and both."""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import LineCountMismatch, UnreadableFile
from .text import VOCABULARY, TokenKind

REPORT_HEADER = ("depth", "n", "acc_first", "acc_second", "acc_both")

_DIGIT_STRINGS = frozenset("0123456789")


@dataclass(frozen=True)
class BinReport:
    depth: Optional[int]  # None for the aggregate over all bins
    n: int
    acc_first: float
    acc_second: float
    acc_both: float

    def row(self) -> str:
        label = "all" if self.depth is None else str(self.depth)
        return f"{label}\t{self.n}\t{self.acc_first:.6f}\t{self.acc_second:.6f}\t{self.acc_both:.6f}"


@dataclass
class ScoreResult:
    bins: list[BinReport]
    overall: BinReport
    malformed: int = 0

    def to_tsv(self) -> str:
        lines = ["\t".join(REPORT_HEADER)]
        lines += [b.row() for b in self.bins]
        lines.append(self.overall.row())
        return "\n".join(lines) + "\n"


@dataclass
class _Tally:
    n: int = 0
    first: int = 0
    second: int = 0
    both: int = 0

    def report(self, depth: Optional[int]) -> BinReport:
        if not self.n:
            return BinReport(depth, 0, 0.0, 0.0, 0.0)
        return BinReport(depth, self.n, self.first / self.n, self.second / self.n, self.both / self.n)


def parse_target(line: str) -> Optional[tuple[str, str]]:
    """Two single-digit tokens, or None when the line is malformed."""
    parts = line.split()
    if len(parts) != 2 or parts[0] not in _DIGIT_STRINGS or parts[1] not in _DIGIT_STRINGS:
        return None
    return parts[0], parts[1]


def score_lines(refs: Sequence[str], preds: Sequence[str], depths: Sequence[int]) -> ScoreResult:
    if not len(refs) == len(preds) == len(depths):
        raise LineCountMismatch(f"refs {len(refs)}, preds {len(preds)}, meta {len(depths)} lines")
    tallies: dict[int, _Tally] = defaultdict(_Tally)
    total = _Tally()
    malformed = 0
    for lineno, (ref_line, pred_line, d) in enumerate(zip(refs, preds, depths), start=1):
        ref = parse_target(ref_line)
        if ref is None:
            raise UnreadableFile(f"reference line {lineno} is not two digits: {ref_line!r}")
        pred = parse_target(pred_line)
        if pred is None:
            malformed += 1
            hit_first = hit_second = False
        else:
            hit_first = pred[0] == ref[0]
            hit_second = pred[1] == ref[1]
        for tally in (tallies[d], total):
            tally.n += 1
            tally.first += hit_first
            tally.second += hit_second
            tally.both += hit_first and hit_second

    bins = [tallies[d].report(d) for d in sorted(tallies)]
    result = ScoreResult(bins, total.report(None), malformed)
    for b in [*bins, result.overall]:
        assert b.acc_both <= min(b.acc_first, b.acc_second), b
    return result


def _read_lines(path: str | os.PathLike) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableFile(f"{path}: {exc}") from exc


def read_meta(path: str | os.PathLike) -> list[dict]:
    """Rows of a ``.meta`` file as dicts keyed by its header."""
    lines = _read_lines(path)
    if not lines:
        raise UnreadableFile(f"{path}: empty metadata file")
    header = lines[0].split("\t")
    if "depth" not in header:
        raise UnreadableFile(f"{path}: header has no 'depth' column")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(header):
            raise UnreadableFile(f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}")
        row = dict(zip(header, fields))
        try:
            row["depth"] = int(row["depth"])
        except ValueError as exc:
            raise UnreadableFile(f"{path}:{lineno}: bad depth {row['depth']!r}") from exc
        rows.append(row)
    return rows


def score(
    refs: str | os.PathLike, preds: str | os.PathLike, meta: str | os.PathLike
) -> ScoreResult:
    ref_lines = _read_lines(refs)
    pred_lines = _read_lines(preds)
    depths = [row["depth"] for row in read_meta(meta)]
    return score_lines(ref_lines, pred_lines, depths)


@dataclass
class CorpusStats:
    lines: int = 0
    token_lengths: dict[int, list[int]] = field(default_factory=lambda: defaultdict(list))
    copy_counts: dict[int, Counter] = field(default_factory=lambda: defaultdict(Counter))
    operators: Counter = field(default_factory=Counter)
    vocabulary: Counter = field(default_factory=Counter)

    def summary(self) -> dict:
        per_depth = {}
        for d in sorted(self.token_lengths):
            lengths = self.token_lengths[d]
            copies = self.copy_counts[d]
            n = len(lengths)
            per_depth[str(d)] = {
                "lines": n,
                "tokens_mean": sum(lengths) / n,
                "tokens_min": min(lengths),
                "tokens_max": max(lengths),
                "copies_mean": sum(k * v for k, v in copies.items()) / n,
                "copies_histogram": {str(k): copies[k] for k in sorted(copies)},
            }
        return {
            "lines": self.lines,
            "per_depth": per_depth,
            "operators": dict(sorted(self.operators.items())),
            "vocabulary": dict(sorted(self.vocabulary.items())),
        }


def stats_lines(src: Iterable[str], depths: Iterable[int]) -> CorpusStats:
    stats = CorpusStats()
    for lineno, (line, d) in enumerate(zip(src, depths, strict=True), start=1):
        lexemes = line.split()
        copies = 0
        for lexeme in lexemes:
            stats.vocabulary[lexeme] += 1
            token = VOCABULARY.get(lexeme)
            if token is None:
                raise UnreadableFile(f"source line {lineno}: unknown token {lexeme!r}")
            if token.kind is TokenKind.OPWORD:
                stats.operators[lexeme] += 1
                copies += lexeme == "COPY"
        stats.lines += 1
        stats.token_lengths[d].append(len(lexemes))
        stats.copy_counts[d][copies] += 1
    return stats


def stats(src: str | os.PathLike, meta: str | os.PathLike) -> dict:
    src_lines = _read_lines(src)
    depths = [row["depth"] for row in read_meta(meta)]
    if len(src_lines) != len(depths):
        raise LineCountMismatch(f"src {len(src_lines)} lines, meta {len(depths)} rows")
    return stats_lines(src_lines, depths).summary()
