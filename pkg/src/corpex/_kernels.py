"""Hot scan kernel: intersection sizes of one sorted query against every
stored signature.

Two interchangeable implementations exist. The default is a numba @njit
two-pointer merge over the packed id array; setting CORPEX_KERNEL=numpy (or
running without numba installed) selects a vectorized pure-numpy path.
Both return identical int64 score arrays; benchmarks/bench_scan.py compares
their throughput.
"""

from __future__ import annotations

import os

import numpy as np


def scan_scores_numpy(flat_ids: np.ndarray, offsets: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Per-document |signature AND query| via searchsorted + prefix sums."""
    n_docs = len(offsets) - 1
    if len(query) == 0 or len(flat_ids) == 0:
        return np.zeros(n_docs, dtype=np.int64)
    pos = np.searchsorted(query, flat_ids)
    hits = np.zeros(len(flat_ids), dtype=np.int64)
    in_range = pos < len(query)
    hits[in_range] = query[pos[in_range]] == flat_ids[in_range]
    csum = np.zeros(len(flat_ids) + 1, dtype=np.int64)
    np.cumsum(hits, out=csum[1:])
    return csum[offsets[1:]] - csum[offsets[:-1]]


try:
    import numba
except ImportError:  # pragma: no cover - exercised via CORPEX_KERNEL=numpy
    numba = None

if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _scan_njit(flat_ids, offsets, query, out):  # pragma: no cover - jitted
        n_query = query.shape[0]
        for d in range(offsets.shape[0] - 1):
            i = offsets[d]
            end = offsets[d + 1]
            j = 0
            count = 0
            while i < end and j < n_query:
                a = flat_ids[i]
                b = query[j]
                if a == b:
                    count += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
            out[d] = count

    def scan_scores_numba(flat_ids: np.ndarray, offsets: np.ndarray,
                          query: np.ndarray) -> np.ndarray:
        """Per-document |signature AND query| via a jitted two-pointer merge."""
        out = np.zeros(len(offsets) - 1, dtype=np.int64)
        if len(query) and len(flat_ids):
            _scan_njit(flat_ids, offsets, query, out)
        return out


def _select_backend() -> str:
    choice = os.environ.get("CORPEX_KERNEL", "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"CORPEX_KERNEL must be auto, numba, or numpy; got {choice!r}")
    if choice == "numba" and numba is None:
        raise ValueError("CORPEX_KERNEL=numba but numba is not installed")
    if choice == "auto":
        return "numba" if numba is not None else "numpy"
    return choice


BACKEND = _select_backend()
scan_scores = scan_scores_numba if BACKEND == "numba" else scan_scores_numpy


def available_backends() -> dict[str, object]:
    """Name -> kernel callable for every backend usable in this process."""
    backends: dict[str, object] = {"numpy": scan_scores_numpy}
    if numba is not None:
        backends["numba"] = scan_scores_numba
    return backends
