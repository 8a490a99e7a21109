"""Synthetic Zipfian corpora with a planted domain and a tail-skewed lexicon.

Used by the acceptance suite and the scan benchmark. Background documents
draw tokens from a Zipf-distributed general vocabulary; a small sub-corpus
additionally carries domain terms, and lexicon phrases built from rare
domain terms are planted into a few domain documents each, so the phrase
set lives in the long tail of the realized term distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Document


def _zipf_probs(n: int, alpha: float) -> np.ndarray:
    weights = 1.0 / np.arange(1, n + 1, dtype=np.float64) ** alpha
    return weights / weights.sum()


@dataclass
class SyntheticCorpus:
    docs: list[Document]
    domain_doc_ids: list[str]
    phrases: list[str]
    seed_docs: list[Document] = field(default_factory=list)


def long_tail_corpus(n_docs: int = 10_000, *, n_domain: int = 200, n_seeds: int = 20,
                     n_phrases: int = 100, background_vocab: int = 4000,
                     domain_vocab: int = 250, alpha: float = 1.1,
                     rng_seed: int = 0) -> SyntheticCorpus:
    """Generate a corpus of n_docs documents with a planted domain.

    Seeds are domain documents (also present in the corpus). Every phrase is
    a two-token string of rare domain terms planted verbatim in 1..3 domain
    documents.
    """
    rng = np.random.default_rng(rng_seed)
    bg_terms = np.array([f"w{i:05d}" for i in range(background_vocab)])
    dm_terms = np.array([f"dm{i:04d}" for i in range(domain_vocab)])
    bg_probs = _zipf_probs(background_vocab, alpha)
    dm_probs = _zipf_probs(domain_vocab, 1.05)

    domain_positions = set(rng.choice(n_docs, size=n_domain, replace=False).tolist())
    token_lists: list[list[str]] = []
    domain_doc_ids: list[str] = []
    for i in range(n_docs):
        doc_id = f"doc{i:06d}"
        length = int(rng.integers(40, 80))
        tokens = list(bg_terms[rng.choice(background_vocab, size=length, p=bg_probs)])
        if i in domain_positions:
            extra = int(rng.integers(20, 36))
            tokens.extend(dm_terms[rng.choice(domain_vocab, size=extra, p=dm_probs)])
            domain_doc_ids.append(doc_id)
        token_lists.append(tokens)

    # Phrases pair rare domain terms (tail of the Zipf ramp) and are planted
    # into a few domain documents each so coverage is achievable.
    tail_terms = dm_terms[domain_vocab // 2:]
    doc_index = {f"doc{i:06d}": i for i in range(n_docs)}
    phrases = []
    for _ in range(n_phrases):
        a, b = rng.choice(len(tail_terms), size=2, replace=False)
        phrase = f"{tail_terms[a]} {tail_terms[b]}"
        phrases.append(phrase)
        for doc_id in rng.choice(domain_doc_ids, size=int(rng.integers(1, 4)), replace=False):
            token_lists[doc_index[doc_id]].extend(phrase.split())

    docs = [Document.from_text(f"doc{i:06d}", " ".join(tokens))
            for i, tokens in enumerate(token_lists)]
    by_id = {doc.doc_id: doc for doc in docs}
    seed_ids = rng.choice(domain_doc_ids, size=n_seeds, replace=False)
    seed_docs = [by_id[doc_id] for doc_id in sorted(seed_ids)]
    return SyntheticCorpus(docs=docs, domain_doc_ids=domain_doc_ids,
                           phrases=phrases, seed_docs=seed_docs)
