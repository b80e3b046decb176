"""Seeded sampling of trees, sequence pairs and whole dataset splits.

Trees are grown as binary trees. Every operator node has a left and a right
slot. Off the spine a slot becomes another operator node with probability
``branch_prob`` (when the depth budget allows), otherwise a terminal. One slot
per spine node always branches until the level above the leaves, which pins
the depth exactly. A terminal is a COPY leaf with probability ``copy_prob`` and
otherwise one or two digits. The slots' contents are concatenated into a flat
operand list.

Seeds
-----
Per-split and per-shard seeds come from the master seed through
:func:`derive_seed`: the first 8 bytes (big endian) of
``sha256("orchard/<master>/<key>/<key>...")``. A split's depth schedule is
shuffled with ``derive_seed(master, split)``; shard ``k`` of a split (lines
``k*shard_size`` up to the next multiple) samples with
``random.Random(derive_seed(master, split, k))``. Any shard can be regenerated
without the others, and output does not depend on the number of workers.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .errors import InvalidDepth, InvalidSpec, MissingRefCount
from .evaluator import eval_pair
from .text import serialize
from .tree import CopyLeaf, DigitLeaf, ExprTree, Family, Node, OpNode, SequencePair

DIFFICULTIES = {"easy": 0.0, "med": 0.5, "hard": 1.0}
SHARD_SIZE = 10_000
SEED_SCHEME = "sha256('orchard/<master>/<split>[/<shard>]')[:8] big-endian; shard = line // shard_size"

_DIGIT_LEAVES = tuple(DigitLeaf(d) for d in range(10))


@dataclass(frozen=True)
class GenConfig:
    family: Family
    copy_prob: float
    depth: int
    branch_prob: float = 0.5
    seed: int = 0
    count: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.copy_prob <= 1.0:
            raise InvalidSpec(f"copy_prob must lie in [0, 1], got {self.copy_prob}")
        if not 0.0 <= self.branch_prob <= 1.0:
            raise InvalidSpec(f"branch_prob must lie in [0, 1], got {self.branch_prob}")
        if self.depth < 2:
            raise InvalidDepth(f"depth must be >= 2, got {self.depth}")
        if self.count < 1:
            raise InvalidSpec(f"count must be positive, got {self.count}")


def sample_tree(
    depth: int,
    family: Family,
    copy_prob: float = 0.0,
    ref_node_count: Optional[int] = None,
    rng: Optional[random.Random] = None,
    *,
    branch_prob: float = 0.5,
    tally: Optional[Counter] = None,
) -> ExprTree:
    """Sample a tree of exactly ``depth`` levels.

    ``tally``, when given, is incremented with ``copy_slots``, ``digit_slots``,
    ``digits`` and ``nodes``.
    """
    if depth < 2:
        raise InvalidDepth(f"depth must be >= 2, got {depth}")
    if copy_prob > 0 and ref_node_count is None:
        raise MissingRefCount("copy_prob > 0 requires the first tree's node count")
    if ref_node_count is not None and ref_node_count < 1:
        raise MissingRefCount(f"ref_node_count must be positive, got {ref_node_count}")
    if rng is None:
        rng = random.Random()

    ops = family.operators
    draw = rng.random
    digits = _DIGIT_LEAVES
    last_branch_level = depth - 1
    counts = [0, 0, 0, 0]  # copy slots, digit slots, digits, nodes

    def terminal(out: list[Node]) -> None:
        if copy_prob and draw() < copy_prob:
            out.append(CopyLeaf(int(draw() * ref_node_count)))
            counts[0] += 1
            counts[3] += 1
        else:
            out.append(digits[int(draw() * 10)])
            n = 1
            if draw() < 0.5:
                out.append(digits[int(draw() * 10)])
                n = 2
            counts[1] += 1
            counts[2] += n
            counts[3] += n

    def grow(level: int, spine: bool) -> OpNode:
        # Operator node at `level`; its slots live at level + 1.
        op = ops[draw() < 0.5]
        counts[3] += 1
        operands: list[Node] = []
        can_branch = level + 1 <= last_branch_level
        forced = (draw() < 0.5) if spine and can_branch else -1
        for slot in (0, 1):
            if slot == forced:
                operands.append(grow(level + 1, True))
            elif can_branch and draw() < branch_prob:
                operands.append(grow(level + 1, False))
            else:
                terminal(operands)
        return OpNode(op, tuple(operands))

    tree = ExprTree(grow(1, True))
    if tally is not None:
        tally.update(copy_slots=counts[0], digit_slots=counts[1], digits=counts[2], nodes=counts[3])
    return tree


@dataclass(frozen=True)
class Sample:
    pair: SequencePair
    depth: int
    first_nodes: int
    copies: int


def sample_pair(cfg: GenConfig, rng: random.Random) -> SequencePair:
    """Both trees share ``cfg.depth``; only the second may hold COPY leaves."""
    return _sample(cfg.family, cfg.copy_prob, cfg.depth, cfg.branch_prob, rng).pair


def _sample(family: Family, copy_prob: float, depth: int, branch_prob: float, rng: random.Random) -> Sample:
    first_tally: Counter = Counter()
    first = sample_tree(depth, family, 0.0, None, rng, branch_prob=branch_prob, tally=first_tally)
    size = first_tally["nodes"]
    second_tally: Counter = Counter()
    second = sample_tree(depth, family, copy_prob, size, rng, branch_prob=branch_prob, tally=second_tally)
    pair = SequencePair(first, second)
    pair = SequencePair(first, second, eval_pair(pair))
    return Sample(pair, depth, size, second_tally["copy_slots"])


def sample_pairs(cfg: GenConfig) -> Iterator[SequencePair]:
    """``cfg.count`` pairs from ``random.Random(cfg.seed)``."""
    rng = random.Random(cfg.seed)
    for _ in range(cfg.count):
        yield sample_pair(cfg, rng)


def derive_seed(master: int, *keys: object) -> int:
    text = "/".join(["orchard", str(master), *map(str, keys)])
    return int.from_bytes(hashlib.sha256(text.encode("ascii")).digest()[:8], "big")


@dataclass(frozen=True)
class SplitSpec:
    name: str
    count: int
    depths: tuple[int, ...]
    weights: Optional[tuple[float, ...]] = None  # equal proportions when absent

    def __post_init__(self) -> None:
        if self.count < 1:
            raise InvalidSpec(f"split {self.name!r}: count must be positive")
        if not self.depths:
            raise InvalidSpec(f"split {self.name!r}: no depths")
        if any(d < 2 for d in self.depths):
            raise InvalidSpec(f"split {self.name!r}: depths must be >= 2")
        if self.weights is not None and (
            len(self.weights) != len(self.depths) or any(w < 0 for w in self.weights) or sum(self.weights) <= 0
        ):
            raise InvalidSpec(f"split {self.name!r}: weights must be non-negative, one per depth")
        if not self.name or any(c in self.name for c in "/\\\t\n"):
            raise InvalidSpec(f"bad split name {self.name!r}")

    def depth_counts(self) -> dict[int, int]:
        """Exact per-depth line counts (largest remainder apportionment)."""
        weights = self.weights or (1.0,) * len(self.depths)
        total = sum(weights)
        quotas = [self.count * w / total for w in weights]
        counts = [int(q) for q in quotas]
        by_remainder = sorted(range(len(quotas)), key=lambda i: (counts[i] - quotas[i], i))
        for i in by_remainder[: self.count - sum(counts)]:
            counts[i] += 1
        out: dict[int, int] = {}
        for d, n in zip(self.depths, counts):
            out[d] = out.get(d, 0) + n
        return out


def paper_splits(scale: float = 1.0) -> list[SplitSpec]:
    """Train 500k over depths 3-6, valid 50k over 3-6, one 50k test bin per depth 3-12."""

    def n(full: int) -> int:
        return max(1, round(full * scale))

    splits = [
        SplitSpec("train", n(500_000), (3, 4, 5, 6)),
        SplitSpec("valid", n(50_000), (3, 4, 5, 6)),
    ]
    splits += [SplitSpec(f"test_{d}", n(50_000), (d,)) for d in range(3, 13)]
    return splits


def depth_schedule(spec: SplitSpec, master_seed: int) -> list[int]:
    schedule = [d for d, n in sorted(spec.depth_counts().items()) for _ in range(n)]
    if len(set(schedule)) > 1:
        random.Random(derive_seed(master_seed, spec.name)).shuffle(schedule)
    return schedule


@dataclass(frozen=True)
class _ShardJob:
    family: Family
    copy_prob: float
    branch_prob: float
    seed: int
    first_line: int
    depths: tuple[int, ...]


def _run_shard(job: _ShardJob) -> tuple[str, str, str]:
    rng = random.Random(job.seed)
    src, tgt, meta = [], [], []
    for offset, d in enumerate(job.depths):
        s = _sample(job.family, job.copy_prob, d, job.branch_prob, rng)
        a, b = s.pair.answer  # type: ignore[misc]
        src.append(serialize(s.pair))
        tgt.append(f"{a} {b}")
        meta.append(f"{job.first_line + offset}\t{d}\t{s.first_nodes}\t{s.copies}\t{a} {b}")
    return "\n".join(src) + "\n", "\n".join(tgt) + "\n", "\n".join(meta) + "\n"


META_HEADER = "line\tdepth\tfirst_nodes\tcopies\tanswer\n"


@dataclass
class _HashedWriter:
    path: Path
    sha: "hashlib._Hash" = field(default_factory=hashlib.sha256)
    size: int = 0

    def __post_init__(self) -> None:
        self.fh = self.path.open("w", encoding="ascii", newline="\n")

    def write(self, text: str) -> None:
        data = text.encode("ascii")
        self.sha.update(data)
        self.size += len(data)
        self.fh.write(text)

    def close(self) -> dict:
        self.fh.close()
        return {"file": self.path.name, "sha256": self.sha.hexdigest(), "bytes": self.size}


def build_dataset(
    family: Family,
    copy_prob: float,
    splits: Sequence[SplitSpec],
    seed: int,
    out_dir: str | os.PathLike,
    *,
    difficulty: Optional[str] = None,
    branch_prob: float = 0.5,
    jobs: int = 1,
    shard_size: int = SHARD_SIZE,
) -> dict:
    """Write ``<split>.src/.tgt/.meta`` for every split plus ``manifest.json``.

    Returns the manifest. Output bytes depend only on the arguments, never on
    ``jobs``.
    """
    if not 0.0 <= copy_prob <= 1.0:
        raise InvalidSpec(f"copy_prob must lie in [0, 1], got {copy_prob}")
    if shard_size < 1:
        raise InvalidSpec("shard_size must be positive")
    names = [s.name for s in splits]
    if len(set(names)) != len(names):
        raise InvalidSpec(f"duplicate split names in {names}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    manifest: dict = {
        "format": "orchard-dataset/1",
        "variant": family.value,
        "difficulty": difficulty,
        "copy_prob": copy_prob,
        "branch_prob": branch_prob,
        "master_seed": seed,
        "seed_scheme": SEED_SCHEME,
        "shard_size": shard_size,
        "second_tree_depth": "shared",
        "splits": [],
    }
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for spec in splits:
            schedule = depth_schedule(spec, seed)
            shard_jobs = [
                _ShardJob(
                    family,
                    copy_prob,
                    branch_prob,
                    derive_seed(seed, spec.name, k),
                    start + 1,
                    tuple(schedule[start : start + shard_size]),
                )
                for k, start in enumerate(range(0, len(schedule), shard_size))
            ]
            writers = [_HashedWriter(out / f"{spec.name}.{ext}") for ext in ("src", "tgt", "meta")]
            writers[2].write(META_HEADER)
            results = executor.map(_run_shard, shard_jobs) if executor else map(_run_shard, shard_jobs)
            for chunk in results:
                for writer, text in zip(writers, chunk):
                    writer.write(text)
            manifest["splits"].append(
                {
                    "name": spec.name,
                    "count": spec.count,
                    "depth_counts": {str(d): n for d, n in sorted(spec.depth_counts().items())},
                    "files": [w.close() for w in writers],
                }
            )
    finally:
        if executor is not None:
            executor.shutdown()

    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return manifest
