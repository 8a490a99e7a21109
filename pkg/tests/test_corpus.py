import itertools
import json

import numpy as np
import pytest

from conftest import FIXTURE_TEXTS, random_corpus, write_jsonl
from corpex import Document, PartialCounts, count_documents, ingest_jsonl, merge_counts, tokenize
from corpex.corpus import normalize_text, unique_terms
from corpex.errors import CorpusFormatError, DuplicateDocumentError


class TestTokenize:
    def test_punctuation_and_digits(self):
        assert tokenize("Lunt Filter, 579!") == ["lunt", "filter", "579"]

    def test_empty(self):
        assert tokenize("") == []
        assert tokenize("  .,;!  ") == []

    def test_sequence_keeps_duplicates_set_drops_them(self):
        assert tokenize("a a b") == ["a", "a", "b"]
        assert set(tokenize("a a b")) == {"a", "b"}

    def test_underscore_splits(self):
        assert tokenize("foo_bar") == ["foo", "bar"]

    def test_unicode_alphanumerics(self):
        assert tokenize("Café NUMÉRO 42") == ["café", "numéro", "42"]

    def test_idempotent_on_joined_output(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            raw = "".join(chr(int(c)) for c in rng.integers(32, 1200, size=40))
            once = tokenize(raw)
            assert tokenize(" ".join(once)) == once


def test_normalize_text_collapses_whitespace():
    assert normalize_text("  A   b\t\nC ") == "a b c"


class TestDocument:
    def test_terms_match_tokenization(self):
        doc = Document.from_text("x", "B a b a c")
        assert doc.terms == {"b", "a", "c"}
        assert doc.ordered_terms == ("b", "a", "c")

    def test_unique_terms_first_occurrence_order(self):
        assert unique_terms(["b", "a", "b", "c", "a"]) == ("b", "a", "c")


class TestIngestJsonl:
    def test_fixture_file_in_order(self, tmp_path, fixture_docs):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(path, fixture_docs)
        docs = list(ingest_jsonl(path))
        assert len(docs) == 4
        assert [d.doc_id for d in docs] == list(FIXTURE_TEXTS)
        assert docs[0].terms == {"a", "b", "c"}

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id":"d1","text":"a b"}\n\n', encoding="utf-8")
        docs = list(ingest_jsonl(path))
        assert len(docs) == 1
        assert docs[0].terms == {"a", "b"}

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id":"d1","text":"a"}\nnot json\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            list(ingest_jsonl(path))

    def test_missing_field_names_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id":"d1"}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 1"):
            list(ingest_jsonl(path))

    def test_non_object_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("[1, 2]\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="object"):
            list(ingest_jsonl(path))

    def test_duplicate_id_names_id(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id":"d1","text":"a"}\n{"id":"d1","text":"b"}\n', encoding="utf-8")
        with pytest.raises(DuplicateDocumentError, match="d1"):
            list(ingest_jsonl(path))


class TestCountDocuments:
    def test_fixture_counts(self, fixture_docs):
        vocab = count_documents(fixture_docs)
        assert vocab.n_docs == 4
        assert {t: vocab.dc_of(t) for t in "abcdef"} == {
            "a": 4, "b": 2, "c": 2, "d": 1, "e": 1, "f": 1,
        }
        # ids in decreasing dc order, ties by first appearance
        assert vocab.terms == ["a", "b", "c", "d", "e", "f"]
        assert [vocab.id_of(t) for t in "abcdef"] == [0, 1, 2, 3, 4, 5]
        vocab.check()

    def test_empty_stream(self):
        vocab = count_documents([])
        assert vocab.n_docs == 0
        assert len(vocab) == 0

    def test_single_doc(self):
        vocab = count_documents([Document.from_text("d", "x")])
        assert vocab.n_docs == 1
        assert vocab.dc_of("x") == 1

    def test_dc_equals_independent_recount(self):
        rng = np.random.default_rng(27)
        for _ in range(10):
            docs = random_corpus(rng, max_docs=15, max_terms=10)
            vocab = count_documents(docs)
            for term in vocab.terms:
                assert vocab.dc_of(term) == sum(1 for d in docs if term in d.terms)

    def test_dc_invariant_under_doc_permutation(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            docs = random_corpus(rng, max_docs=12, max_terms=8)
            base = count_documents(docs)
            perm = [docs[i] for i in rng.permutation(len(docs))]
            shuffled = count_documents(perm)
            assert {t: base.dc_of(t) for t in base.terms} == \
                   {t: shuffled.dc_of(t) for t in shuffled.terms}


def _vocab_state(vocab):
    return (vocab.terms, vocab.dc, vocab.first_seen, vocab.n_docs)


class TestMergeCounts:
    def test_sum(self):
        a = PartialCounts(counts={"a": 2}, first_pos={"a": (0, 0)}, n_docs=2)
        b = PartialCounts(counts={"a": 1, "b": 1}, first_pos={"a": (2, 0), "b": (2, 1)}, n_docs=1)
        merged = merge_counts(a, b)
        assert merged.counts == {"a": 3, "b": 1}
        assert merged.n_docs == 3

    def test_identity(self):
        a = PartialCounts(counts={"x": 1}, first_pos={"x": (0, 0)}, n_docs=1)
        merged = merge_counts(a, PartialCounts())
        assert merged.counts == a.counts and merged.n_docs == a.n_docs

    def test_all_merge_orders_equal_sequential(self):
        rng = np.random.default_rng(11)
        docs = random_corpus(rng, max_docs=15, max_terms=10)
        thirds = len(docs) // 3 or 1
        splits = [docs[:thirds], docs[thirds:2 * thirds], docs[2 * thirds:]]
        offsets = [0, len(splits[0]), len(splits[0]) + len(splits[1])]
        parts = [PartialCounts.from_documents(part, off)
                 for part, off in zip(splits, offsets)]
        sequential = _vocab_state(count_documents(docs))
        for order in itertools.permutations(range(3)):
            merged = PartialCounts()
            for k in order:
                merged = merge_counts(merged, parts[k])
            assert _vocab_state(merged.to_vocabulary()) == sequential

    def test_fold_over_random_partitionings(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            docs = random_corpus(rng, max_docs=20, max_terms=12)
            sequential = _vocab_state(count_documents(docs))
            cuts = sorted(set(rng.integers(0, len(docs) + 1, size=3).tolist()))
            bounds = [0, *cuts, len(docs)]
            merged = PartialCounts()
            for lo, hi in zip(bounds, bounds[1:]):
                merged = merge_counts(merged, PartialCounts.from_documents(docs[lo:hi], lo))
            assert _vocab_state(merged.to_vocabulary()) == sequential
