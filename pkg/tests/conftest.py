"""Shared fixtures and corpus generators for the test suite."""

from __future__ import annotations

import json

import numpy as np
import pytest

from corpex import Document, SignatureParams, build_index

# Four documents with hand-countable statistics:
#   dc: a=4, b=2, c=2, d=1, e=1, f=1; ids a=0 b=1 c=2 d=3 e=4 f=5
FIXTURE_TEXTS = {
    "d1": "a b c",
    "d2": "a b d",
    "d3": "a c e",
    "d4": "a f",
}


@pytest.fixture
def fixture_docs() -> list[Document]:
    return [Document.from_text(doc_id, text) for doc_id, text in FIXTURE_TEXTS.items()]


@pytest.fixture
def fixture_index(fixture_docs):
    return build_index(fixture_docs, SignatureParams(k1=2, k2=1))


def random_corpus(rng: np.random.Generator, max_docs: int = 50,
                  max_terms: int = 30) -> list[Document]:
    """Small random corpus over a bounded vocabulary, for property tests."""
    n_docs = int(rng.integers(1, max_docs + 1))
    n_terms = int(rng.integers(1, max_terms + 1))
    vocab = [f"t{i}" for i in range(n_terms)]
    docs = []
    for i in range(n_docs):
        length = int(rng.integers(1, 12))
        tokens = [vocab[int(j)] for j in rng.integers(0, n_terms, size=length)]
        docs.append(Document.from_text(f"doc{i:03d}", " ".join(tokens)))
    return docs


def random_params(rng: np.random.Generator) -> SignatureParams:
    return SignatureParams(k1=int(rng.integers(1, 6)), k2=int(rng.integers(1, 11)))


def write_jsonl(path, docs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"id": doc.doc_id, "text": doc.text}) + "\n")
