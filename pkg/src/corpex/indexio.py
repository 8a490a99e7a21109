"""Binary index file format.

Layout, all integers little-endian:

    magic           4 bytes  "SAUC"
    version         u16      (currently 1)
    k1, k2          u32 each
    n_docs          u64
    vocab_size      u64
    per term, in id order:
        term_len    u32
        term        term_len bytes of UTF-8
        dc          u64
    per document, in insertion order:
        id_len      u32
        doc_id      id_len bytes of UTF-8
        sig_len     u32
        term_ids    sig_len * u32, strictly ascending

The per-document signature payload is therefore exactly 4 bytes per stored
term id. Raw text is never persisted; a loaded index must have documents
re-attached before it can be re-signed.
"""

from __future__ import annotations

import struct

import numpy as np

from .corpus import Vocabulary
from .errors import IndexFormatError
from .signature import ID_DTYPE, Signature, SignatureIndex, SignatureParams

MAGIC = b"SAUC"
VERSION = 1

_HEADER = struct.Struct("<4sHIIQQ")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


def save_index(index: SignatureIndex, path) -> None:
    """Serialize an index; two saves of equal indexes are byte-identical."""
    vocab = index.vocab
    parts = [
        _HEADER.pack(MAGIC, VERSION, index.params.k1, index.params.k2,
                     vocab.n_docs, len(vocab))
    ]
    for term_id, term in enumerate(vocab.terms):
        raw = term.encode("utf-8")
        parts.append(_U32.pack(len(raw)))
        parts.append(raw)
        parts.append(_U64.pack(vocab.dc[term_id]))
    for doc_id, sig in index.signatures.items():
        raw = doc_id.encode("utf-8")
        parts.append(_U32.pack(len(raw)))
        parts.append(raw)
        parts.append(_U32.pack(len(sig.term_ids)))
        parts.append(sig.term_ids.astype("<u4", copy=False).tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


class _Reader:
    """Cursor over a byte buffer raising IndexFormatError on truncation."""

    def __init__(self, data: bytes, path) -> None:
        self.data = data
        self.pos = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise IndexFormatError(f"{self.path}: truncated file")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return _U32.unpack(self.take(4))[0]

    def u64(self) -> int:
        return _U64.unpack(self.take(8))[0]

    def done(self) -> bool:
        return self.pos == len(self.data)


def load_index(path) -> SignatureIndex:
    """Read an index file back; inverse of save_index.

    The file stores no first-seen ranks, so tie-breaks on a loaded index
    fall back to ascending id order. For batch-built indexes that is the
    identical ordering; for an index saved mid-stream it is an
    approximation until the index is rebuilt.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    reader = _Reader(data, path)
    magic, version, k1, k2, n_docs, vocab_size = _HEADER.unpack(reader.take(_HEADER.size))
    if magic != MAGIC:
        raise IndexFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise IndexFormatError(f"{path}: unsupported format version {version}")

    vocab = Vocabulary()
    vocab.n_docs = n_docs
    for _ in range(vocab_size):
        term = reader.take(reader.u32()).decode("utf-8")
        dc = reader.u64()
        if term in vocab.term_to_id:
            raise IndexFormatError(f"{path}: duplicate vocabulary term {term!r}")
        vocab._add_term(term, dc=dc)

    params = SignatureParams(k1=k1, k2=k2)
    index = SignatureIndex(params, vocab)
    for _ in range(n_docs):
        doc_id = reader.take(reader.u32()).decode("utf-8")
        sig_len = reader.u32()
        ids = np.frombuffer(reader.take(4 * sig_len), dtype="<u4").astype(ID_DTYPE)
        if doc_id in index.signatures:
            raise IndexFormatError(f"{path}: duplicate document id {doc_id!r}")
        if sig_len > k2:
            raise IndexFormatError(f"{path}: signature of {doc_id!r} longer than k2")
        if len(ids) and (ids[-1] >= vocab_size or np.any(np.diff(ids.astype(np.int64)) <= 0)):
            raise IndexFormatError(f"{path}: signature of {doc_id!r} is not strictly "
                                   f"ascending within the vocabulary")
        index.signatures[doc_id] = Signature(doc_id, ids)
    if not reader.done():
        raise IndexFormatError(f"{path}: {len(data) - reader.pos} trailing bytes")
    return index
