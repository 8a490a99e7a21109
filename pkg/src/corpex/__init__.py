"""Corpus expansion with truncated sparse bit-vector document signatures.

Build an index of per-document signatures (the k2 least-frequent terms among
those appearing in at least k1 documents), retrieve the documents most
similar to a seed corpus via sorted-list merge intersection, stream new
documents into the index, and compare against classic bag-of-words and
dense-vector baselines.
"""

from .baselines import (
    VectorStore,
    baseline_expand,
    cosine,
    dense_query_vector,
    hash_vector,
    load_vectors,
    save_vectors,
    tfidf_score,
)
from .corpus import (
    Document,
    PartialCounts,
    Vocabulary,
    count_documents,
    ingest_jsonl,
    merge_counts,
    normalize_text,
    tokenize,
)
from .evaluation import (
    EvalReport,
    ablation_sweep,
    coverage,
    load_judgments,
    load_phrases,
    map_and_recall,
    ndcg,
    pr_curve,
    term_histogram,
    timed,
)
from .indexio import load_index, save_index
from .retrieval import (
    ScoredDoc,
    brute_force_expand,
    expand,
    merge_and_score,
    merge_and_score_counted,
    query_signature,
)
from .signature import (
    Signature,
    SignatureIndex,
    SignatureParams,
    build_index,
    resign_all,
    sign_document,
    surviving_term_count,
    update_index,
)

__version__ = "0.1.0"

__all__ = [
    "Document", "PartialCounts", "Vocabulary", "tokenize", "normalize_text",
    "ingest_jsonl", "count_documents", "merge_counts",
    "SignatureParams", "Signature", "SignatureIndex", "surviving_term_count",
    "sign_document", "build_index", "update_index", "resign_all",
    "save_index", "load_index",
    "ScoredDoc", "query_signature", "merge_and_score", "merge_and_score_counted",
    "expand", "brute_force_expand",
    "VectorStore", "tfidf_score", "hash_vector", "cosine", "dense_query_vector",
    "baseline_expand", "save_vectors", "load_vectors",
    "EvalReport", "coverage", "ndcg", "map_and_recall", "pr_curve",
    "term_histogram", "ablation_sweep", "timed", "load_phrases", "load_judgments",
    "__version__",
]
