"""Truncated sparse bit-vector document signatures.

A signature keeps, per document, the ids of its k2 rarest terms among the
terms that appear in at least k1 documents corpus-wide. Ids are stored as a
strictly ascending list, so two signatures (or a signature and a query)
intersect with a single sorted-list merge.

The index supports streaming: adding a document updates the vocabulary and
document counts in place, signs the new document against the updated
statistics, and records which existing documents might now carry an outdated
signature. ``resign_all`` restores exact batch-build equivalence.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .corpus import Document, Vocabulary, count_documents
from .errors import DuplicateDocumentError, MissingDocumentsError

ID_DTYPE = np.uint32


@dataclass(frozen=True)
class SignatureParams:
    """Thresholds controlling signature sparsity.

    k1: minimum document count for a term to occupy a signature dimension.
    k2: maximum number of set bits (stored term ids) per document.
    """

    k1: int
    k2: int

    def __post_init__(self) -> None:
        if self.k1 < 1 or self.k2 < 1:
            raise ValueError(f"k1 and k2 must be >= 1, got k1={self.k1}, k2={self.k2}")


class Signature:
    """One document's signature: a strictly ascending array of term ids."""

    __slots__ = ("doc_id", "term_ids")

    def __init__(self, doc_id: str, term_ids: np.ndarray) -> None:
        self.doc_id = doc_id
        self.term_ids = np.asarray(term_ids, dtype=ID_DTYPE)

    def __len__(self) -> int:
        return len(self.term_ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self.doc_id == other.doc_id and np.array_equal(self.term_ids, other.term_ids)

    def __repr__(self) -> str:
        return f"Signature({self.doc_id!r}, {self.term_ids.tolist()})"


def surviving_term_count(vocab: Vocabulary, k1: int) -> int:
    """Number of vocabulary terms appearing in at least k1 documents."""
    return sum(1 for dc in vocab.dc if dc >= k1)


def sign_document(doc: Document, vocab: Vocabulary, params: SignatureParams) -> Signature:
    """Select the k2 rarest surviving terms of a document.

    Candidates are the document's terms with dc >= k1; the k2 with the lowest
    document count win, ties going to the term seen earliest in the corpus
    stream. On a batch-built vocabulary that earliest-seen order coincides
    with ascending id order, and unlike raw ids it is stable across streaming
    updates. Unknown terms are ignored; a document with no surviving terms
    gets an empty signature.
    """
    k1 = params.k1
    dc = vocab.dc
    first_seen = vocab.first_seen
    candidates = []
    for term in doc.ordered_terms:
        i = vocab.term_to_id.get(term)
        if i is not None and dc[i] >= k1:
            candidates.append((dc[i], first_seen[i], i))
    if len(candidates) > params.k2:
        candidates = heapq.nsmallest(params.k2, candidates)
    ids = sorted(i for _, _, i in candidates)
    return Signature(doc.doc_id, np.array(ids, dtype=ID_DTYPE))


class SignatureIndex:
    """Signatures for a whole corpus plus the statistics needed to extend it.

    ``documents`` holds the raw documents when the index was built or updated
    in this process; an index loaded from disk starts without them (the file
    format stores no text) and needs ``attach_documents`` before it can be
    re-signed. Equality compares the persisted contract: params, document
    count, vocabulary terms and counts in id order, dim, and every signature.
    """

    def __init__(self, params: SignatureParams, vocab: Vocabulary) -> None:
        self.params = params
        self.vocab = vocab
        self.dim = surviving_term_count(vocab, params.k1)
        self.signatures: dict[str, Signature] = {}
        self.documents: dict[str, Document] = {}
        self.stale_doc_ids: set[str] = set()
        # False when staleness could not be fully determined because raw
        # documents were missing while a term crossed the k1 threshold.
        self.stale_exact: bool = True
        self._packed: tuple[np.ndarray, np.ndarray, list[str], np.ndarray] | None = None

    @property
    def n_docs(self) -> int:
        return self.vocab.n_docs

    def __len__(self) -> int:
        return len(self.signatures)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignatureIndex):
            return NotImplemented
        return (
            self.params == other.params
            and self.vocab.n_docs == other.vocab.n_docs
            and self.vocab.terms == other.vocab.terms
            and self.vocab.dc == other.vocab.dc
            and self.dim == other.dim
            and list(self.signatures) == list(other.signatures)
            and all(self.signatures[d] == other.signatures[d] for d in self.signatures)
        )

    def _invalidate(self) -> None:
        self._packed = None

    def packed(self) -> tuple[np.ndarray, np.ndarray, list[str], np.ndarray]:
        """Flat scan layout: (ids, offsets, doc ids, doc id array).

        ids concatenates every signature; offsets[d]..offsets[d+1] delimits
        document d. Cached until the index mutates.
        """
        if self._packed is None:
            doc_ids = list(self.signatures)
            offsets = np.zeros(len(doc_ids) + 1, dtype=np.int64)
            arrays = []
            for pos, doc_id in enumerate(doc_ids):
                ids = self.signatures[doc_id].term_ids
                offsets[pos + 1] = offsets[pos] + len(ids)
                arrays.append(ids)
            flat = (
                np.concatenate(arrays) if arrays else np.empty(0, dtype=ID_DTYPE)
            ).astype(ID_DTYPE, copy=False)
            docid_arr = np.array(doc_ids, dtype=np.str_) if doc_ids else np.empty(0, dtype=np.str_)
            self._packed = (flat, offsets, doc_ids, docid_arr)
        return self._packed

    def attach_documents(self, docs: Iterable[Document]) -> int:
        """Attach raw documents to a loaded index; returns how many matched.

        Documents whose id is not in the index are rejected, since that
        usually means the wrong corpus file was supplied.
        """
        attached = 0
        for doc in docs:
            if doc.doc_id not in self.signatures:
                raise MissingDocumentsError(
                    f"document {doc.doc_id!r} is not part of this index"
                )
            self.documents[doc.doc_id] = doc
            attached += 1
        return attached


def build_index(docs: Iterable[Document], params: SignatureParams) -> SignatureIndex:
    """Count the corpus, then sign every document against the global counts."""
    doc_list = list(docs)
    seen: set[str] = set()
    for doc in doc_list:
        if doc.doc_id in seen:
            raise DuplicateDocumentError(f"duplicate id {doc.doc_id!r}")
        seen.add(doc.doc_id)
    vocab = count_documents(doc_list)
    index = SignatureIndex(params, vocab)
    for doc in doc_list:
        index.signatures[doc.doc_id] = sign_document(doc, vocab, params)
        index.documents[doc.doc_id] = doc
    return index


def update_index(index: SignatureIndex, doc: Document) -> SignatureIndex:
    """Add one document to an existing index, in place.

    The vocabulary gains unseen terms (ids appended in first-occurrence
    order), document counts are incremented once per distinct term, the
    dimension is recomputed, and the new document is signed against the
    updated statistics. Existing signatures are not rewritten; instead the
    documents whose signature may have changed are added to
    ``index.stale_doc_ids``:

    - documents containing a term that just crossed the k1 threshold
      (it is a new selection candidate for them), and
    - documents whose stored signature contains a term whose count grew
      (that term may now lose its slot to a rarer one).

    ``resign_all`` restores exact batch equivalence.
    """
    if doc.doc_id in index.signatures:
        raise DuplicateDocumentError(f"duplicate id {doc.doc_id!r}")
    vocab = index.vocab
    k1 = index.params.k1
    bumped_surviving: set[int] = set()
    crossed_terms: list[str] = []
    for term in doc.ordered_terms:
        i = vocab.term_to_id.get(term)
        if i is None:
            i = vocab._add_term(term, dc=0)
        previous = vocab.dc[i]
        vocab.dc[i] = previous + 1
        if previous >= k1:
            bumped_surviving.add(i)
        elif vocab.dc[i] >= k1:
            crossed_terms.append(term)
    vocab.n_docs += 1
    index.dim = surviving_term_count(vocab, k1)

    for doc_id, sig in index.signatures.items():
        if any(int(t) in bumped_surviving for t in sig.term_ids):
            index.stale_doc_ids.add(doc_id)
    if crossed_terms:
        crossed = set(crossed_terms)
        if len(index.documents) < len(index.signatures):
            index.stale_exact = False
        for doc_id, known in index.documents.items():
            if crossed & known.terms:
                index.stale_doc_ids.add(doc_id)

    index.signatures[doc.doc_id] = sign_document(doc, vocab, index.params)
    index.documents[doc.doc_id] = doc
    index.stale_doc_ids.discard(doc.doc_id)
    index._invalidate()
    return index


def resign_all(index: SignatureIndex) -> SignatureIndex:
    """Re-sign every document under the current statistics, in place.

    After any sequence of updates this makes the index equal (per-term
    counts, dim, and every signature as a term set) to a batch build over
    the same documents. Requires the raw documents to be attached.
    """
    missing = [d for d in index.signatures if d not in index.documents]
    if missing:
        raise MissingDocumentsError(
            f"{len(missing)} of {len(index.signatures)} documents are not attached "
            f"(first missing: {missing[0]!r}); attach_documents() first"
        )
    for doc_id in index.signatures:
        index.signatures[doc_id] = sign_document(
            index.documents[doc_id], index.vocab, index.params
        )
    index.dim = surviving_term_count(index.vocab, index.params.k1)
    index.stale_doc_ids.clear()
    index.stale_exact = True
    index._invalidate()
    return index
