"""Document ingestion, tokenization, and corpus-level document-count statistics.

A corpus is a stream of documents, each reduced to its set of normalized
terms. The vocabulary assigns every term a dense integer id (most frequent
terms first) and records, per term, the number of documents it appears in.
Counting is parallelizable by document partition: each partition produces a
``PartialCounts`` and partitions merge associatively into the same vocabulary
the sequential pass would have produced.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import CorpusFormatError, DuplicateDocumentError

# Maximal runs of Unicode alphanumerics. \w minus underscore is exactly
# "alphabetic or numeric" for str patterns.
_TOKEN_RE = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Split text into lowercased alphanumeric runs, in order of appearance.

    Degenerate input (empty, punctuation-only) yields an empty list.
    """
    return _TOKEN_RE.findall(text.lower())


def normalize_text(text: str) -> str:
    """Lowercase and collapse whitespace runs; used for phrase matching."""
    return " ".join(text.lower().split())


def unique_terms(tokens: Iterable[str]) -> tuple[str, ...]:
    """Deduplicate tokens, keeping first-occurrence order."""
    return tuple(dict.fromkeys(tokens))


@dataclass(frozen=True)
class Document:
    """One ingested document.

    ``terms`` is the deduplicated term set; ``ordered_terms`` holds the same
    terms in first-occurrence order, which fixes the deterministic tie-break
    used when assigning vocabulary ids.
    """

    doc_id: str
    text: str
    terms: frozenset[str]
    ordered_terms: tuple[str, ...]

    @classmethod
    def from_text(cls, doc_id: str, text: str) -> "Document":
        ordered = unique_terms(tokenize(text))
        return cls(doc_id=doc_id, text=text, terms=frozenset(ordered), ordered_terms=ordered)


def ingest_jsonl(path) -> Iterator[Document]:
    """Yield one Document per line of a JSONL file with "id" and "text" fields.

    Raises CorpusFormatError naming the offending line on malformed input and
    DuplicateDocumentError naming the id when one repeats.
    """
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: invalid JSON ({exc})") from exc
            if not isinstance(record, dict):
                raise CorpusFormatError(f"{path}: line {lineno}: expected a JSON object")
            doc_id = record.get("id")
            text = record.get("text")
            if not isinstance(doc_id, str) or not isinstance(text, str):
                raise CorpusFormatError(
                    f"{path}: line {lineno}: need string fields 'id' and 'text'"
                )
            if doc_id in seen:
                raise DuplicateDocumentError(f"{path}: line {lineno}: duplicate id {doc_id!r}")
            seen.add(doc_id)
            yield Document.from_text(doc_id, text)


class Vocabulary:
    """Bidirectional term/id mapping with per-term document counts.

    Ids are dense (0..|V|-1) and assigned in decreasing document-count order,
    ties broken by first appearance in the stream. ``first_seen[i]`` is the
    rank of term i's first appearance; it is the stream-order tie-break key
    and stays valid when streaming updates append terms after the initial
    build (appended ids no longer follow the count ordering).
    """

    def __init__(self) -> None:
        self.term_to_id: dict[str, int] = {}
        self.terms: list[str] = []
        self.dc: list[int] = []
        self.first_seen: list[int] = []
        self.n_docs: int = 0

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_id

    def id_of(self, term: str) -> int | None:
        return self.term_to_id.get(term)

    def dc_of(self, term: str) -> int:
        """Document count for a term, 0 if the term is unknown."""
        i = self.term_to_id.get(term)
        return 0 if i is None else self.dc[i]

    def _add_term(self, term: str, dc: int = 0, first_seen: int | None = None) -> int:
        term_id = len(self.terms)
        self.term_to_id[term] = term_id
        self.terms.append(term)
        self.dc.append(dc)
        self.first_seen.append(term_id if first_seen is None else first_seen)
        return term_id

    def check(self) -> None:
        """Assert internal invariants; cheap enough for tests and load paths."""
        assert len(self.terms) == len(self.dc) == len(self.first_seen)
        assert len(self.term_to_id) == len(self.terms)
        for i, term in enumerate(self.terms):
            assert self.term_to_id[term] == i
            assert 0 <= self.dc[i] <= self.n_docs


@dataclass
class PartialCounts:
    """Document counts for one corpus partition.

    ``first_pos[term]`` is (absolute document index, first token rank within
    that document), which makes merges commutative while preserving the exact
    first-seen ordering of the sequential pass.
    """

    counts: dict[str, int] = field(default_factory=dict)
    first_pos: dict[str, tuple[int, int]] = field(default_factory=dict)
    n_docs: int = 0

    @classmethod
    def from_documents(cls, docs: Iterable[Document], first_doc_index: int = 0) -> "PartialCounts":
        part = cls()
        for offset, doc in enumerate(docs):
            abs_index = first_doc_index + offset
            for token_rank, term in enumerate(doc.ordered_terms):
                part.counts[term] = part.counts.get(term, 0) + 1
                if term not in part.first_pos:
                    part.first_pos[term] = (abs_index, token_rank)
            part.n_docs += 1
        return part

    def to_vocabulary(self) -> Vocabulary:
        terms = list(self.counts)
        by_first = sorted(terms, key=lambda t: self.first_pos[t])
        rank = {t: r for r, t in enumerate(by_first)}
        order = sorted(terms, key=lambda t: (-self.counts[t], self.first_pos[t]))
        vocab = Vocabulary()
        vocab.n_docs = self.n_docs
        for term in order:
            vocab._add_term(term, dc=self.counts[term], first_seen=rank[term])
        return vocab


def merge_counts(a: PartialCounts, b: PartialCounts) -> PartialCounts:
    """Merge two disjoint partitions; associative and commutative."""
    merged = PartialCounts(counts=dict(a.counts), first_pos=dict(a.first_pos), n_docs=a.n_docs)
    for term, count in b.counts.items():
        merged.counts[term] = merged.counts.get(term, 0) + count
        pos = b.first_pos[term]
        if term not in merged.first_pos or pos < merged.first_pos[term]:
            merged.first_pos[term] = pos
    merged.n_docs += b.n_docs
    return merged


def count_documents(docs: Iterable[Document]) -> Vocabulary:
    """Build the vocabulary of a document stream.

    dc[w] counts documents containing w at least once (not occurrences);
    ids are assigned by decreasing dc, ties by first-seen order.
    """
    return PartialCounts.from_documents(docs).to_vocabulary()
