from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orchard.errors import LineCountMismatch, UnreadableFile
from orchard.generator import SplitSpec, build_dataset
from orchard.scorer import parse_target, read_meta, score, score_lines, stats, stats_lines
from orchard.tree import Family


def test_parse_target():
    assert parse_target("6 2") == ("6", "2")
    assert parse_target(" 6   2 \n") == ("6", "2")
    for bad in ["", "6", "6 2 1", "62", "a b", "10 2", "-1 2"]:
        assert parse_target(bad) is None


def test_identity_is_perfect():
    refs = ["1 2", "3 4", "5 6", "0 0"]
    result = score_lines(refs, refs, [3, 3, 4, 12])
    assert [(b.depth, b.n) for b in result.bins] == [(3, 2), (4, 1), (12, 1)]
    for b in [*result.bins, result.overall]:
        assert (b.acc_first, b.acc_second, b.acc_both) == (1.0, 1.0, 1.0)
    assert result.overall.n == 4 and result.malformed == 0


def test_partial_credit_per_tree():
    refs = ["1 2", "1 2", "1 2", "1 2"]
    preds = ["1 2", "1 3", "0 2", "0 0"]
    (b,) = score_lines(refs, preds, [5] * 4).bins
    assert (b.acc_first, b.acc_second, b.acc_both) == (0.5, 0.5, 0.25)


def test_malformed_predictions_are_wrong():
    result = score_lines(["1 2", "3 4"], ["garbage", ""], [3, 3])
    assert result.malformed == 2
    assert result.overall.acc_first == result.overall.acc_second == 0.0


def test_malformed_reference_is_an_error():
    with pytest.raises(UnreadableFile):
        score_lines(["1"], ["1 2"], [3])


def test_line_count_mismatch():
    with pytest.raises(LineCountMismatch):
        score_lines(["1 2"], ["1 2", "3 4"], [3])


def test_uniform_random_predictions():
    rng = random.Random(2020)
    refs = [f"{rng.randrange(10)} {rng.randrange(10)}" for _ in range(50_000)]
    preds = [f"{rng.randrange(10)} {rng.randrange(10)}" for _ in range(50_000)]
    b = score_lines(refs, preds, [9] * 50_000).overall
    assert abs(b.acc_first - 0.1) <= 0.005
    assert abs(b.acc_second - 0.1) <= 0.005
    assert abs(b.acc_both - 0.01) <= 0.002


targets = st.tuples(st.integers(0, 9), st.integers(0, 9)).map(lambda t: f"{t[0]} {t[1]}")
rows = st.lists(st.tuples(targets, st.one_of(targets, st.just("junk")), st.integers(3, 12)), min_size=1, max_size=60)


@given(rows, st.randoms(use_true_random=False))
def test_permutation_equivariance_and_bounds(data, rnd):
    refs, preds, depths = map(list, zip(*data))
    before = score_lines(refs, preds, depths)
    shuffled = list(data)
    rnd.shuffle(shuffled)
    after = score_lines(*map(list, zip(*shuffled)))
    assert before.bins == after.bins
    assert before.overall == after.overall
    for b in before.bins:
        assert 0 <= b.acc_both <= min(b.acc_first, b.acc_second) <= 1
    assert sum(b.n for b in before.bins) == len(data)


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    splits = [SplitSpec(f"test_{d}", 300, (d,)) for d in range(3, 13)] + [SplitSpec("train", 400, (3, 4, 5, 6))]
    build_dataset(Family.FL, 0.0, splits, 17, out, difficulty="easy")
    return out


def test_score_files_self_identity(corpus, tmp_path):
    result = score(corpus / "train.tgt", corpus / "train.tgt", corpus / "train.meta")
    assert [b.depth for b in result.bins] == [3, 4, 5, 6]
    assert all((b.acc_first, b.acc_second, b.acc_both) == (1, 1, 1) for b in result.bins)
    table = result.to_tsv().splitlines()
    assert table[0] == "depth\tn\tacc_first\tacc_second\tacc_both"
    assert table[1] == "3\t100\t1.000000\t1.000000\t1.000000"
    assert table[-1] == "all\t400\t1.000000\t1.000000\t1.000000"


def test_read_meta_rejects_garbage(tmp_path):
    path = tmp_path / "x.meta"
    path.write_text("nonsense\n1\t2\n")
    with pytest.raises(UnreadableFile):
        read_meta(path)
    with pytest.raises(UnreadableFile):
        score(tmp_path / "missing.tgt", path, path)


def test_stats_easy_corpus(corpus):
    means = []
    for d in range(3, 13):
        summary = stats(corpus / f"test_{d}.src", corpus / f"test_{d}.meta")
        (only,) = summary["per_depth"].values()
        assert only["copies_mean"] == 0 and only["copies_histogram"] == {"0": 300}
        assert set(summary["vocabulary"]) <= set("[]X0123456789") | {"FIRST", "LAST"}
        means.append(only["tokens_mean"])
    assert all(a < b for a, b in zip(means, means[1:]))


def test_stats_counts_copies():
    s = stats_lines(["[ MAX 2 6 0 1 ] X [ MIN [ COPY 1 ] [ COPY 1 2 ] ]"], [2]).summary()
    assert s["operators"] == {"COPY": 2, "MAX": 1, "MIN": 1}
    assert s["per_depth"]["2"]["copies_histogram"] == {"2": 1}
    assert s["per_depth"]["2"]["tokens_mean"] == 20
