import json
import math
import time

import numpy as np
import pytest

from corpex import (
    Document,
    EvalReport,
    SignatureParams,
    ablation_sweep,
    build_index,
    coverage,
    load_judgments,
    load_phrases,
    map_and_recall,
    ndcg,
    pr_curve,
    term_histogram,
    timed,
)
from corpex.errors import ConfigError


def _docs(*texts):
    return [Document.from_text(f"d{i}", t) for i, t in enumerate(texts)]


class TestLoaders:
    def test_load_phrases_normalizes(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("Galactic   Halos\n\n  f - stop \n", encoding="utf-8")
        assert load_phrases(path) == ["galactic halos", "f - stop"]

    def test_load_phrases_empty_is_error(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("\n  \n", encoding="utf-8")
        with pytest.raises(ConfigError, match="empty"):
            load_phrases(path)

    def test_load_judgments(self, tmp_path):
        path = tmp_path / "j.tsv"
        path.write_text("d1\t1\nd2\t0\n", encoding="utf-8")
        assert load_judgments(path) == {"d1": 1, "d2": 0}

    def test_load_judgments_rejects_other_values(self, tmp_path):
        path = tmp_path / "j.tsv"
        path.write_text("d1\t2\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="line 1"):
            load_judgments(path)


class TestCoverage:
    def test_all_found(self):
        docs = _docs("solar wind blows", "galactic halos shine")
        fraction, flags = coverage(["solar wind", "galactic halos"], docs)
        assert fraction == 1.0 and flags == [True, True]

    def test_none_found(self):
        fraction, flags = coverage(["quasar"], _docs("plain text"))
        assert fraction == 0.0 and flags == [False]

    def test_seven_of_ten(self):
        phrases = [f"planted {i}" for i in range(7)] + [f"missing {i}" for i in range(3)]
        docs = _docs(*[f"text with planted {i} inside" for i in range(7)])
        fraction, flags = coverage(phrases, docs)
        assert fraction == pytest.approx(0.7)
        assert flags == [True] * 7 + [False] * 3

    def test_substring_not_token_boundary(self):
        # Punctuated entries match through whitespace normalization.
        docs = _docs("set the F -  Stop correctly")
        fraction, _ = coverage(["f - stop"], docs)
        assert fraction == 1.0

    def test_empty_phrase_set_is_error(self):
        with pytest.raises(ConfigError):
            coverage([], _docs("x"))

    def test_superset_monotone(self):
        rng = np.random.default_rng(20)
        vocab = [f"t{i}" for i in range(12)]
        for _ in range(100):
            docs = _docs(*[" ".join(vocab[int(j)] for j in rng.integers(0, 12, size=6))
                           for _ in range(8)])
            phrases = [vocab[int(j)] for j in rng.integers(0, 12, size=4)]
            cut = int(rng.integers(0, 9))
            smaller, _ = coverage(phrases, docs[:cut])
            larger, _ = coverage(phrases, docs)
            assert larger >= smaller


class TestRankedMetrics:
    def test_ndcg_perfect_ranking(self):
        judgments = {"a": 1, "b": 1, "c": 1}
        assert ndcg(["a", "b", "c"], judgments, 3) == pytest.approx(1.0)

    def test_ndcg_relevant_at_ideal_positions(self):
        judgments = {"a": 1, "b": 0, "c": 0}
        assert ndcg(["a", "b", "c"], judgments, 3) == pytest.approx(1.0)

    def test_ndcg_hand_value(self):
        judgments = {"r1": 1, "r2": 1, "n1": 0}
        got = ndcg(["r1", "n1", "r2"], judgments, 3)
        want = (1.0 + 1.0 / math.log2(4)) / (1.0 + 1.0 / math.log2(3))
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(0.9197207891481876, abs=1e-9)

    def test_ndcg_no_relevant(self):
        assert ndcg(["a", "b"], {"a": 0, "b": 0}, 2) == 0.0

    def test_map_recall_perfect(self):
        judgments = {"a": 1, "b": 1, "c": 1}
        assert map_and_recall(["a", "b", "c"], judgments, 3) == (1.0, 1.0)

    def test_map_recall_hand_value(self):
        judgments = {"r1": 1, "r2": 1, "n1": 0}
        ap, recall = map_and_recall(["r1", "n1", "r2"], judgments, 3)
        assert ap == pytest.approx(5 / 6, abs=1e-12)
        assert recall == 1.0

    def test_map_recall_nothing_retrieved(self):
        assert map_and_recall(["n1", "n2"], {"n1": 0, "n2": 0, "r": 1}, 2) == (0.0, 0.0)

    def test_metrics_stay_in_unit_interval(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            n = int(rng.integers(1, 10))
            ids = [f"d{i}" for i in range(n)]
            judgments = {i: int(rng.integers(0, 2)) for i in ids}
            ranked = [ids[int(j)] for j in rng.permutation(n)]
            value = ndcg(ranked, judgments, n)
            ap, recall = map_and_recall(ranked, judgments, n)
            for metric in (value, ap, recall):
                assert 0.0 <= metric <= 1.0


class TestPrCurve:
    def test_single_relevant_hit(self):
        assert pr_curve(["r"], {"r": 1}) == [(1.0, 1.0)]

    def test_miss_then_hit(self):
        assert pr_curve(["n", "r"], {"r": 1, "n": 0}) == [(0.0, 0.0), (1.0, 0.5)]

    def test_requires_a_relevant_document(self):
        with pytest.raises(ValueError):
            pr_curve(["a"], {"a": 0})

    def test_recall_monotone_on_fuzzed_rankings(self):
        rng = np.random.default_rng(24)
        for _ in range(100):
            n = int(rng.integers(1, 12))
            judgments = {f"d{i}": int(rng.integers(0, 2)) for i in range(n)}
            judgments["d0"] = 1
            ranked = [f"d{int(i)}" for i in rng.permutation(n)]
            recalls = [point[0] for point in pr_curve(ranked, judgments)]
            assert recalls == sorted(recalls)


class TestTermHistogram:
    def test_absent_phrase(self):
        rows = term_histogram(["ghost"], _docs("x y"), _docs("x y"))
        assert rows == [("ghost", 0, False)]

    def test_planted_counts_and_found_flag(self):
        corpus = _docs("has nova dust", "nova again", "third nova", "nothing")
        retrieved = [corpus[0]]
        rows = term_histogram(["nova"], corpus, retrieved)
        assert rows == [("nova", 3, True)]

    def test_row_count_and_sorting(self):
        corpus = _docs("q q", "q w", "w")
        rows = term_histogram(["w", "q", "zz"], corpus, corpus[:1])
        assert len(rows) == 3
        assert [r[1] for r in rows] == sorted([r[1] for r in rows], reverse=True)


class TestAblation:
    def test_monotone_not_found(self, fixture_docs):
        index = build_index(fixture_docs, SignatureParams(1, 3))
        rows = ablation_sweep("sauce", index, fixture_docs, fixture_docs[:1],
                              ["a b", "a c", "zz"], [1, 2, 4])
        misses = [missing for _, missing in rows]
        assert misses == sorted(misses, reverse=True)
        assert rows[-1][1] == 1.0  # only "zz" is absent from the whole corpus

    def test_single_k(self, fixture_docs):
        index = build_index(fixture_docs, SignatureParams(1, 3))
        assert len(ablation_sweep("sauce", index, fixture_docs, fixture_docs[:1],
                                  ["a b"], [2])) == 1

    def test_nondeterministic_method_averages_trials(self, fixture_docs):
        rows = ablation_sweep("random", None, fixture_docs, [], ["a b", "zz"],
                              [2], rng_seed=3, trials=3)
        (k, missing), = rows
        assert k == 2 and 0.0 <= missing <= 2.0
        again = ablation_sweep("random", None, fixture_docs, [], ["a b", "zz"],
                               [2], rng_seed=3, trials=3)
        assert rows == again

    def test_ks_must_be_ascending(self, fixture_docs):
        index = build_index(fixture_docs, SignatureParams(1, 3))
        with pytest.raises(ValueError):
            ablation_sweep("sauce", index, fixture_docs, [], ["a"], [5, 2])


class TestTimed:
    def test_duration_non_negative(self):
        _, elapsed = timed(lambda: None)
        assert elapsed >= 0.0

    def test_nested_outer_at_least_inner(self):
        def inner():
            return timed(time.sleep, 0.01)

        (_, inner_elapsed), outer_elapsed = timed(inner)
        assert outer_elapsed >= inner_elapsed

    def test_returns_result(self):
        result, elapsed = timed(sum, [1, 2, 3])
        assert result == 6 and math.isfinite(elapsed) and elapsed > 0.0


class TestEvalReport:
    def test_json_summary_keys(self):
        report = EvalReport(coverage=0.5, phrase_rows=[("p", 1, True)],
                            elapsed_ms=12.5, ndcg=0.9, recall=0.4, map=0.3)
        summary = report.json_summary()
        assert set(summary) == {"coverage", "ndcg", "recall", "map", "elapsed_ms"}

    def test_metrics_omitted_without_judgments(self):
        summary = EvalReport(coverage=0.5, phrase_rows=[]).json_summary()
        assert set(summary) == {"coverage", "elapsed_ms"}

    def test_write_creates_tables(self, tmp_path):
        report = EvalReport(coverage=1.0, phrase_rows=[("p", 2, True)],
                            pr_points=[(1.0, 0.5)], ablation_rows=[(10, 3.0)])
        report.write(tmp_path / "out")
        written = {p.name for p in (tmp_path / "out").iterdir()}
        assert written == {"report.json", "phrases.tsv", "pr_curve.tsv", "ablation.tsv"}
        summary = json.loads((tmp_path / "out" / "report.json").read_text())
        assert summary["coverage"] == 1.0
