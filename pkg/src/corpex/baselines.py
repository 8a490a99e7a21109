"""Comparison retrieval methods: TF-IDF, signed feature hashing, dense-vector
cosine, uniform random selection, and lexicon-phrase search.

Dense vectors are an external artifact loaded from a binary store (this
package never runs an encoder). Hash and dense methods score documents by
cosine similarity against the mean of the seed vectors; TF-IDF sums
tf * ln(N/dc) over terms shared between query and document. All rankings
are deterministic given their inputs and RNG seed, and tie-break by
ascending doc id.
"""

from __future__ import annotations

import hashlib
import math
import struct
from collections import Counter
from typing import Sequence

import numpy as np

from .corpus import Document, Vocabulary, count_documents, normalize_text, tokenize
from .errors import ConfigError, IndexFormatError, MissingVectorError
from .retrieval import ScoredDoc, chunked_doc_values, rank_top_k

METHODS = ("tfidf", "hash", "dense", "random", "query")

# Fixed keyed hashes make bucket and sign assignments stable across runs,
# platforms, and interpreter hash randomization.
_BUCKET_KEY = b"corpex-hash-bucket"
_SIGN_KEY = b"corpex-hash-sign"


def tfidf_score(query_terms: set[str], doc: Document, vocab: Vocabulary) -> float:
    """Sum of tf(w, doc) * ln(N / dc[w]) over w in query_terms AND doc.terms.

    tf is the raw occurrence count of w in the tokenized text; terms with
    dc = 0 (unknown to the vocabulary) contribute nothing. Iteration is in
    sorted term order so the floating-point sum is reproducible.
    """
    counts = Counter(tokenize(doc.text))
    return _tfidf_from_counts(query_terms, doc.terms, counts, vocab)


def _tfidf_from_counts(query_terms: set[str], doc_terms: frozenset[str],
                       counts: Counter, vocab: Vocabulary) -> float:
    n_docs = vocab.n_docs
    score = 0.0
    for term in sorted(query_terms & doc_terms):
        dc = vocab.dc_of(term)
        if dc > 0:
            score += counts[term] * math.log(n_docs / dc)
    return score


def _term_hashes(term: str) -> tuple[int, int]:
    digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8, key=_BUCKET_KEY).digest()
    bucket = int.from_bytes(digest, "little")
    sign_bit = hashlib.blake2b(term.encode("utf-8"), digest_size=1, key=_SIGN_KEY).digest()[0] & 1
    return bucket, 1 if sign_bit else -1


def hash_vector(doc: Document, dim: int) -> np.ndarray:
    """Signed hashing-trick vector: each term occurrence adds +-1 to bucket
    H(term) mod dim."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    vec = np.zeros(dim, dtype=np.float64)
    cache: dict[str, tuple[int, int]] = {}
    for term in tokenize(doc.text):
        entry = cache.get(term)
        if entry is None:
            bucket, sign = _term_hashes(term)
            entry = (bucket % dim, sign)
            cache[term] = entry
        vec[entry[0]] += entry[1]
    return vec


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 by convention when either vector is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm)


class VectorStore:
    """Fixed-dimension dense vectors keyed by doc id."""

    def __init__(self, dim: int) -> None:
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.vectors: dict[str, np.ndarray] = {}

    def add(self, doc_id: str, values) -> None:
        vec = np.asarray(values, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector for {doc_id!r} has shape {vec.shape}, want ({self.dim},)")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector for {doc_id!r} has non-finite entries")
        self.vectors[doc_id] = vec

    def get(self, doc_id: str) -> np.ndarray:
        try:
            return self.vectors[doc_id]
        except KeyError:
            raise MissingVectorError(f"no vector stored for doc id {doc_id!r}") from None

    def __len__(self) -> int:
        return len(self.vectors)


def save_vectors(store: VectorStore, path) -> None:
    """Write a store: u32 dim, then (u32 id_len, id bytes, dim * f32 LE)."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", store.dim))
        for doc_id, vec in store.vectors.items():
            raw = doc_id.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(vec.astype("<f4", copy=False).tobytes())


def load_vectors(path) -> VectorStore:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4:
        raise IndexFormatError(f"{path}: truncated vector store")
    dim = struct.unpack_from("<I", data, 0)[0]
    if dim < 1:
        raise IndexFormatError(f"{path}: invalid dimension {dim}")
    store = VectorStore(dim)
    pos = 4
    record = 4 * dim
    while pos < len(data):
        if pos + 4 > len(data):
            raise IndexFormatError(f"{path}: truncated record header")
        id_len = struct.unpack_from("<I", data, pos)[0]
        pos += 4
        if pos + id_len + record > len(data):
            raise IndexFormatError(f"{path}: truncated record body")
        doc_id = data[pos:pos + id_len].decode("utf-8")
        pos += id_len
        vec = np.frombuffer(data[pos:pos + record], dtype="<f4")
        pos += record
        if not np.all(np.isfinite(vec)):
            raise IndexFormatError(f"{path}: non-finite vector for {doc_id!r}")
        if doc_id in store.vectors:
            raise IndexFormatError(f"{path}: duplicate doc id {doc_id!r}")
        store.vectors[doc_id] = vec.astype(np.float32)
    return store


def dense_query_vector(seed_ids: Sequence[str], store: VectorStore) -> np.ndarray:
    """Arithmetic mean of the seed vectors; errors name any missing id."""
    if not seed_ids:
        raise ValueError("at least one seed id is required")
    stacked = np.stack([store.get(doc_id).astype(np.float64) for doc_id in seed_ids])
    return stacked.mean(axis=0)


def sample_phrases(phrases: Sequence[str], rng_seed: int) -> list[str]:
    """Draw the lexicon-search query sample: 10% of the phrase set (at least
    one phrase), without replacement, from a seeded RNG."""
    if not phrases:
        raise ConfigError("phrase set is empty")
    size = max(1, round(0.1 * len(phrases)))
    rng = np.random.default_rng(rng_seed)
    picks = sorted(rng.choice(len(phrases), size=size, replace=False).tolist())
    return [phrases[i] for i in picks]


def baseline_expand(method: str, docs: Sequence[Document], top_k: int, *,
                    seeds: Sequence[Document] | None = None,
                    vocab: Vocabulary | None = None,
                    store: VectorStore | None = None,
                    phrases: Sequence[str] | None = None,
                    rng_seed: int = 0,
                    dim: int = 100,
                    threads: int = 1) -> list[ScoredDoc]:
    """Rank the corpus with one of the baseline methods.

    tfidf, hash and dense score every document (hash and dense by cosine
    against the mean seed vector); random returns a uniform sample without
    replacement; query counts sampled lexicon phrases found as substrings
    of the normalized text. Raises ConfigError when a method-specific input
    is missing.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    if not docs:
        return []
    docid_arr = np.array([doc.doc_id for doc in docs], dtype=np.str_)

    if method == "random":
        rng = np.random.default_rng(rng_seed)
        picks = rng.permutation(len(docs))[:top_k]
        return [ScoredDoc(str(docid_arr[i]), 0) for i in picks]

    if method == "tfidf":
        if seeds is None:
            raise ConfigError("tfidf needs seed documents")
        if vocab is None:
            vocab = count_documents(docs)
        query_terms = set().union(*(doc.terms for doc in seeds)) if seeds else set()
        doc_counts = [Counter(tokenize(doc.text)) for doc in docs]

        def tfidf_chunk(lo: int, hi: int) -> np.ndarray:
            return np.array(
                [_tfidf_from_counts(query_terms, docs[i].terms, doc_counts[i], vocab)
                 for i in range(lo, hi)],
                dtype=np.float64,
            )

        scores = chunked_doc_values(len(docs), threads, tfidf_chunk)
        return rank_top_k(docid_arr, scores, top_k)

    if method == "hash":
        if seeds is None:
            raise ConfigError("hash needs seed documents")
        seed_matrix = np.stack([hash_vector(doc, dim) for doc in seeds]) if seeds \
            else np.zeros((1, dim))
        query_vec = seed_matrix.mean(axis=0)

        def vectors_chunk(lo: int, hi: int) -> np.ndarray:
            return np.stack([hash_vector(docs[i], dim) for i in range(lo, hi)])

        matrix = _stack_chunks(len(docs), threads, vectors_chunk)
        return rank_top_k(docid_arr, _cosine_rows(matrix, query_vec), top_k)

    if method == "dense":
        if store is None:
            raise ConfigError("dense needs a vector store")
        if seeds is None:
            raise ConfigError("dense needs seed documents")
        query_vec = dense_query_vector([doc.doc_id for doc in seeds], store)

        def dense_chunk(lo: int, hi: int) -> np.ndarray:
            return np.stack([store.get(docs[i].doc_id).astype(np.float64)
                             for i in range(lo, hi)])

        matrix = _stack_chunks(len(docs), threads, dense_chunk)
        return rank_top_k(docid_arr, _cosine_rows(matrix, query_vec), top_k)

    # method == "query"
    if phrases is None:
        raise ConfigError("query needs a phrase set")
    sample = sample_phrases(phrases, rng_seed)

    def query_chunk(lo: int, hi: int) -> np.ndarray:
        out = np.zeros(hi - lo, dtype=np.int64)
        for k in range(lo, hi):
            text = normalize_text(docs[k].text)
            out[k - lo] = sum(1 for phrase in sample if phrase in text)
        return out

    scores = chunked_doc_values(len(docs), threads, query_chunk)
    return rank_top_k(docid_arr, scores, top_k)


def _stack_chunks(n: int, threads: int, compute) -> np.ndarray:
    """chunked_doc_values for 2-d per-document rows."""
    from .retrieval import chunk_ranges
    ranges = chunk_ranges(n, threads)
    if len(ranges) == 1:
        return compute(0, n)
    from concurrent.futures import ThreadPoolExecutor
    pieces: list[np.ndarray | None] = [None] * len(ranges)
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        futures = {pool.submit(compute, lo, hi): k for k, (lo, hi) in enumerate(ranges)}
        for future, k in futures.items():
            pieces[k] = future.result()
    return np.concatenate(pieces, axis=0)


def _cosine_rows(matrix: np.ndarray, query_vec: np.ndarray) -> np.ndarray:
    """Cosine of each matrix row against the query; zero rows score 0."""
    norms = np.linalg.norm(matrix, axis=1) * np.linalg.norm(query_vec)
    dots = matrix @ query_vec
    return np.divide(dots, norms, out=np.zeros_like(dots), where=norms > 0)
