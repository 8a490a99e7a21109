"""Seed-corpus queries and exact top-k retrieval over signature intersections.

A query is the union of the seed documents' signatures. Every stored
signature is scored by the size of its intersection with the query (a
two-pointer merge over two ascending id lists), and the top-k documents are
selected exactly, ties broken by ascending doc id. The corpus scan may be
partitioned across threads; per-document scores are independent, so the
result is identical to the sequential scan.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._kernels import scan_scores
from .corpus import Document
from .signature import Signature, SignatureIndex, SignatureParams, sign_document


class ScoredDoc(NamedTuple):
    doc_id: str
    score: int | float


def query_signature(seeds: Sequence[Document], index: SignatureIndex) -> np.ndarray:
    """Ascending, deduplicated union of the seeds' signatures.

    Seeds are signed against the index statistics; they need not be part of
    the corpus. The union may exceed k2 entries and may be empty even for
    non-empty seeds (all seed terms filtered out).
    """
    arrays = [sign_document(doc, index.vocab, index.params).term_ids for doc in seeds]
    if not arrays:
        return np.empty(0, dtype=np.uint32)
    return np.unique(np.concatenate(arrays))


def _ids_of(s) -> np.ndarray:
    return s.term_ids if isinstance(s, Signature) else np.asarray(s)


def merge_and_score(q, s) -> int:
    """|q AND s| for two strictly ascending id lists, O(|q|+|s|) comparisons."""
    q_ids = _ids_of(q)
    s_ids = _ids_of(s)
    i = j = count = 0
    nq, ns = len(q_ids), len(s_ids)
    while i < nq and j < ns:
        a = q_ids[i]
        b = s_ids[j]
        if a == b:
            count += 1
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return count


def merge_and_score_counted(q, s) -> tuple[int, int]:
    """Like merge_and_score but also returns the number of head comparisons.

    Each loop iteration compares the two current heads once and advances at
    least one pointer, so the count is bounded by |q| + |s|.
    """
    q_ids = _ids_of(q)
    s_ids = _ids_of(s)
    i = j = count = comparisons = 0
    nq, ns = len(q_ids), len(s_ids)
    while i < nq and j < ns:
        comparisons += 1
        a = q_ids[i]
        b = s_ids[j]
        if a == b:
            count += 1
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return count, comparisons


def chunk_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    """Split range(n) into at most `parts` contiguous, near-equal chunks."""
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1, dtype=np.int64)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(parts) if bounds[i] < bounds[i + 1]]


def chunked_doc_values(n_docs: int, threads: int,
                       compute: Callable[[int, int], np.ndarray]) -> np.ndarray:
    """Fill a per-document value array by running `compute(lo, hi)` per chunk.

    Values are per-document and independent of chunk boundaries, so any
    thread count yields the same array.
    """
    if n_docs == 0:
        return np.zeros(0, dtype=np.float64)
    ranges = chunk_ranges(n_docs, threads)
    if len(ranges) == 1:
        return np.asarray(compute(0, n_docs))
    pieces: list[np.ndarray | None] = [None] * len(ranges)
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        futures = {pool.submit(compute, lo, hi): k for k, (lo, hi) in enumerate(ranges)}
        for future, k in futures.items():
            pieces[k] = np.asarray(future.result())
    return np.concatenate(pieces)


def rank_top_k(docid_arr: np.ndarray, scores: np.ndarray, top_k: int) -> list[ScoredDoc]:
    """Exact top-k by (score descending, doc_id ascending)."""
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    order = np.lexsort((docid_arr, -scores))[:top_k]
    return [ScoredDoc(str(docid_arr[i]), scores[i].item()) for i in order]


def expand(index: SignatureIndex, seeds: Sequence[Document], top_k: int, *,
           threads: int = 1, normalize: bool = False) -> list[ScoredDoc]:
    """Retrieve the top-k documents most similar to the seed corpus.

    Scores are raw intersection sizes between each stored signature and the
    union query signature. With normalize=True each score is divided by the
    document's signature length instead (0 for empty signatures); the
    default raw mode is the reference behavior.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    flat, offsets, _, docid_arr = index.packed()
    if len(docid_arr) == 0:
        return []
    query = query_signature(seeds, index)
    scores = chunked_doc_values(
        len(docid_arr), threads,
        lambda lo, hi: scan_scores(flat[offsets[lo]:offsets[hi]],
                                   offsets[lo:hi + 1] - offsets[lo], query),
    ).astype(np.int64)
    if normalize:
        lengths = np.diff(offsets)
        with np.errstate(invalid="ignore", divide="ignore"):
            normalized = np.where(lengths > 0, scores / np.maximum(lengths, 1), 0.0)
        return rank_top_k(docid_arr, normalized, top_k)
    return rank_top_k(docid_arr, scores, top_k)


def brute_force_expand(corpus_docs: Sequence[Document], seeds: Sequence[Document],
                       params: SignatureParams, top_k: int) -> list[ScoredDoc]:
    """Reference ranking computed from first principles; test oracle.

    Recounts statistics with plain dicts, embeds each document's selected
    terms as a dense bit-vector over an alphabetically ordered vocabulary,
    and scores by popcount of the AND with the query bit-vector. Shares only
    the selection contract with expand, none of its code path.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    if not corpus_docs:
        return []
    dc: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    rank = 0
    for doc in corpus_docs:
        for term in doc.ordered_terms:
            dc[term] = dc.get(term, 0) + 1
            if term not in first_seen:
                first_seen[term] = rank
                rank += 1

    def selected_terms(doc: Document) -> list[str]:
        candidates = [t for t in doc.ordered_terms if dc.get(t, 0) >= params.k1]
        candidates.sort(key=lambda t: (dc[t], first_seen[t]))
        return candidates[:params.k2]

    all_terms = sorted(dc)
    dim_of = {t: i for i, t in enumerate(all_terms)}

    def bitvector(terms: Sequence[str]) -> np.ndarray:
        vec = np.zeros(len(all_terms), dtype=bool)
        for t in terms:
            if t in dim_of:
                vec[dim_of[t]] = True
        return vec

    query_vec = np.zeros(len(all_terms), dtype=bool)
    for seed in seeds:
        query_vec |= bitvector(selected_terms(seed))

    scored = []
    for doc in corpus_docs:
        scored.append((int(np.count_nonzero(bitvector(selected_terms(doc)) & query_vec)),
                       doc.doc_id))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [ScoredDoc(doc_id, score) for score, doc_id in scored[:top_k]]
