"""Evaluation harness: lexical coverage of a phrase set, ranked-retrieval
metrics over binary judgments, precision-recall curves, term-frequency
histograms, top-k ablation sweeps, and wall-clock timing.

A phrase counts as found when it occurs as a contiguous substring of some
retrieved document's normalized text (lowercased, whitespace collapsed);
this deliberately matches numeric and punctuated lexicon entries that
token-boundary matching would miss.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .corpus import Document, normalize_text
from .errors import ConfigError
from .evalmath import average_precision_and_recall, ndcg_at, precision_recall_points


def load_phrases(path) -> list[str]:
    """Read a phrase set, one phrase per line, normalized; empty set is an error."""
    phrases = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            phrase = normalize_text(line)
            if phrase:
                phrases.append(phrase)
    if not phrases:
        raise ConfigError(f"{path}: phrase set is empty")
    return phrases


def load_judgments(path) -> dict[str, int]:
    """Read doc_id<TAB>0|1 lines into a binary relevance map."""
    judgments: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ConfigError(f"{path}: line {lineno}: expected doc_id<TAB>0|1")
            judgments[parts[0]] = int(parts[1])
    return judgments


def phrase_found_flags(phrases: Sequence[str], docs: Sequence[Document]) -> list[bool]:
    texts = [normalize_text(doc.text) for doc in docs]
    return [any(phrase in text for text in texts) for phrase in phrases]


def coverage(phrases: Sequence[str], retrieved: Sequence[Document]) -> tuple[float, list[bool]]:
    """Fraction of phrases found in the retrieved documents, plus per-phrase flags."""
    if not phrases:
        raise ConfigError("coverage of an empty phrase set is undefined")
    flags = phrase_found_flags(phrases, retrieved)
    return sum(flags) / len(phrases), flags


def ndcg(ranked: Sequence[str], judgments: dict[str, int], n: int) -> float:
    """Normalized DCG at cutoff n with binary gains.

    DCG sums rel_i / log2(i+1) over ranks 1..n; the ideal DCG places all
    judged-relevant documents first. 0.0 when nothing relevant is judged.
    """
    if n < 1:
        raise ValueError(f"cutoff must be >= 1, got {n}")
    rels = [judgments.get(doc_id, 0) for doc_id in ranked[:n]]
    total_relevant = sum(1 for rel in judgments.values() if rel)
    return ndcg_at(rels, total_relevant, n)


def map_and_recall(ranked: Sequence[str], judgments: dict[str, int],
                   n: int) -> tuple[float, float]:
    """(average precision, recall) at cutoff n.

    AP averages precision@i over the relevant ranks, divided by the total
    judged-relevant count, the same denominator recall uses (the judged
    pool is the only relevance universe available).
    """
    if n < 1:
        raise ValueError(f"cutoff must be >= 1, got {n}")
    rels = [judgments.get(doc_id, 0) for doc_id in ranked[:n]]
    total_relevant = sum(1 for rel in judgments.values() if rel)
    return average_precision_and_recall(rels, total_relevant)


def pr_curve(ranked: Sequence[str], judgments: dict[str, int]) -> list[tuple[float, float]]:
    """One (recall, precision) point per rank; recall is non-decreasing."""
    total_relevant = sum(1 for rel in judgments.values() if rel)
    if total_relevant == 0:
        raise ValueError("pr_curve needs at least one judged relevant document")
    rels = [judgments.get(doc_id, 0) for doc_id in ranked]
    return precision_recall_points(rels, total_relevant)


def term_histogram(phrases: Sequence[str], corpus_docs: Sequence[Document],
                   retrieved: Sequence[Document]) -> list[tuple[str, int, bool]]:
    """Per-phrase (phrase, corpus document frequency, found-in-retrieved) rows,
    sorted by frequency descending."""
    corpus_texts = [normalize_text(doc.text) for doc in corpus_docs]
    found = phrase_found_flags(phrases, retrieved)
    rows = []
    for phrase, flag in zip(phrases, found):
        freq = sum(1 for text in corpus_texts if phrase in text)
        rows.append((phrase, freq, flag))
    rows.sort(key=lambda row: -row[1])
    return rows


def timed(fn: Callable, *args, **kwargs) -> tuple[object, float]:
    """Run fn and return (result, elapsed seconds) from a monotonic clock."""
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start


def ablation_sweep(method: str, index, corpus_docs: Sequence[Document],
                   seeds: Sequence[Document], phrases: Sequence[str],
                   ks: Sequence[int], *, store=None, rng_seed: int = 0,
                   trials: int = 3, threads: int = 1,
                   hash_dim: int = 100) -> list[tuple[int, float]]:
    """Phrases-not-found counts as the retrieved set grows.

    Runs the named retrieval method at each cutoff in ks. Deterministic
    methods run once per k (not-found is then non-increasing in k); random
    and query are averaged over `trials` seeded runs, so their counts are
    fractional.
    """
    from .baselines import baseline_expand
    from .retrieval import expand

    if list(ks) != sorted(ks):
        raise ValueError("ks must be ascending")
    by_id = {doc.doc_id: doc for doc in corpus_docs}

    def retrieve(top_k: int, seed: int):
        if method == "sauce":
            return expand(index, seeds, top_k, threads=threads)
        return baseline_expand(
            method, corpus_docs, top_k, seeds=seeds,
            vocab=index.vocab if (method == "tfidf" and index is not None) else None,
            store=store, phrases=phrases if method == "query" else None,
            rng_seed=seed, dim=hash_dim, threads=threads,
        )

    deterministic = method not in ("random", "query")
    trial_seeds = [rng_seed] if deterministic else [rng_seed + t for t in range(trials)]
    rows = []
    for k in ks:
        missing = []
        for seed in trial_seeds:
            retrieved = [by_id[row.doc_id] for row in retrieve(k, seed)]
            fraction, _ = coverage(phrases, retrieved)
            missing.append(len(phrases) - round(fraction * len(phrases)))
        rows.append((k, sum(missing) / len(missing)))
    return rows


@dataclass
class EvalReport:
    """Everything one retrieval run produced, ready for JSON/TSV export."""

    coverage: float
    phrase_rows: list[tuple[str, int, bool]]
    elapsed_ms: float | None = None
    ndcg: float | None = None
    recall: float | None = None
    map: float | None = None
    pr_points: list[tuple[float, float]] = field(default_factory=list)
    ablation_rows: list[tuple[int, float]] = field(default_factory=list)

    def json_summary(self) -> dict:
        summary: dict = {"coverage": self.coverage}
        if self.ndcg is not None:
            summary["ndcg"] = self.ndcg
            summary["recall"] = self.recall
            summary["map"] = self.map
        summary["elapsed_ms"] = self.elapsed_ms
        return summary

    def write(self, out_dir) -> None:
        """Write report.json plus one TSV per populated table."""
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(self.json_summary(), indent=2) + "\n", encoding="utf-8"
        )
        with open(out / "phrases.tsv", "w", encoding="utf-8") as fh:
            for phrase, freq, found in self.phrase_rows:
                fh.write(f"{phrase}\t{freq}\t{int(found)}\n")
        if self.pr_points:
            with open(out / "pr_curve.tsv", "w", encoding="utf-8") as fh:
                for recall, precision in self.pr_points:
                    fh.write(f"{recall}\t{precision}\n")
        if self.ablation_rows:
            with open(out / "ablation.tsv", "w", encoding="utf-8") as fh:
                for top_k, missing in self.ablation_rows:
                    fh.write(f"{top_k}\t{missing}\n")
