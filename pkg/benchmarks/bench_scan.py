#!/usr/bin/env python3
"""Benchmark the signature scan kernel: numba @njit vs pure numpy.

Builds a synthetic Zipfian index, forms a query from planted seed documents,
and times per-query scans under both backends (plus the threaded scan path
the CLI uses). Also cross-checks that every backend returns identical
scores.

Usage:
    python3 benchmarks/bench_scan.py [--docs N] [--k2 N] [--iters N] [--threads N]

The production dispatch honors CORPEX_KERNEL=numba|numpy; this script times
both backends directly regardless of the flag.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from corpex import SignatureParams, build_index
from corpex._kernels import available_backends
from corpex.retrieval import chunk_ranges, query_signature
from corpex.synth import long_tail_corpus


def time_fn(fn, iters):
    times = []
    for _ in range(iters):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times)), float(np.min(times))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=50_000)
    parser.add_argument("--k2", type=int, default=50)
    parser.add_argument("--iters", type=int, default=20)
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()

    print(f"generating {args.docs} documents...")
    corpus = long_tail_corpus(args.docs, n_domain=max(20, args.docs // 50),
                              n_seeds=20, rng_seed=0)
    index = build_index(corpus.docs, SignatureParams(k1=3, k2=args.k2))
    flat, offsets, _, _ = index.packed()
    query = query_signature(corpus.seed_docs, index)
    print(f"index: {len(index)} docs, dim={index.dim}, "
          f"{len(flat)} stored ids, |query|={len(query)}")

    backends = available_backends()
    if "numba" in backends:
        backends["numba"](flat, offsets, query)  # JIT warmup

    results = []
    reference = None
    for name, kernel in backends.items():
        median, best = time_fn(lambda: kernel(flat, offsets, query), args.iters)
        scores = kernel(flat, offsets, query)
        if reference is None:
            reference = scores
        agree = np.array_equal(scores, reference)
        results.append((name, median, best, agree))

        if args.threads > 1:
            ranges = chunk_ranges(len(offsets) - 1, args.threads)

            def threaded():
                from concurrent.futures import ThreadPoolExecutor
                with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
                    parts = list(pool.map(
                        lambda r: kernel(flat[offsets[r[0]]:offsets[r[1]]],
                                         offsets[r[0]:r[1] + 1] - offsets[r[0]], query),
                        ranges))
                return np.concatenate(parts)

            median, best = time_fn(threaded, args.iters)
            agree = np.array_equal(threaded(), reference)
            results.append((f"{name} x{args.threads} threads", median, best, agree))

    print()
    print(f"{'backend':<24} {'median (ms)':>12} {'best (ms)':>11} {'speedup':>8} {'agree':>6}")
    print("-" * 66)
    slowest = max(r[1] for r in results)
    for name, median, best, agree in results:
        print(f"{name:<24} {median * 1e3:>12.3f} {best * 1e3:>11.3f} "
              f"{slowest / median:>7.1f}x {'yes' if agree else 'NO':>6}")
    if not all(r[3] for r in results):
        print("score mismatch between backends")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
