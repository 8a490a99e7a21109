"""Command-line interface.

Subcommands: build (index a corpus), update (stream documents into an
existing index), expand (retrieve top-k for a seed corpus with any method),
eval (score a results file against a phrase set and optional judgments).

Exit codes: 0 success, 2 usage or input error, 1 internal error. Summaries
are printed to stdout as JSON; data artifacts are written as files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .baselines import baseline_expand, load_vectors
from .corpus import Document, ingest_jsonl
from .errors import CorpexError
from .evaluation import EvalReport, coverage, load_judgments, load_phrases, map_and_recall, \
    ndcg, pr_curve, term_histogram, timed
from .indexio import load_index, save_index
from .retrieval import expand
from .signature import SignatureParams, build_index, resign_all, update_index

DEFAULT_K1 = 1000
DEFAULT_K2 = 100
DEFAULT_TOP_K = 500_000


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corpex",
                                     description="Sparse-signature corpus expansion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--k1", type=int, default=DEFAULT_K1)
    p.add_argument("--k2", type=int, default=DEFAULT_K2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("update", help="stream new documents into an index")
    p.add_argument("--index", required=True)
    p.add_argument("--doc-jsonl", required=True)
    p.add_argument("--resign", action="store_true",
                   help="re-sign all documents afterwards (needs --corpus)")
    p.add_argument("--corpus", action="append", default=[],
                   help="JSONL of already-indexed documents; repeatable")
    p.add_argument("--out", help="output index path (default: overwrite --index)")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("expand", help="retrieve top-k documents for a seed corpus")
    p.add_argument("--index", required=True)
    p.add_argument("--seeds", required=True, help="seed corpus, same JSONL format")
    p.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    p.add_argument("--method", default="sauce",
                   choices=("sauce", "tfidf", "hash", "dense", "random", "query"))
    p.add_argument("--corpus", help="corpus JSONL (needed by tfidf/hash/query)")
    p.add_argument("--vectors", help="dense vector store (needed by dense)")
    p.add_argument("--phrases", help="phrase file (needed by query)")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--hash-dim", type=int, default=100)
    p.add_argument("--normalize", action="store_true",
                   help="divide signature scores by signature length")
    p.add_argument("--out", required=True, help="results TSV: rank, doc_id, score")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("eval", help="evaluate a results file")
    p.add_argument("--results", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--phrases", required=True)
    p.add_argument("--judgments")
    p.add_argument("--ks", help="comma-separated ascending top-k cutoffs for the ablation")
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(func=cmd_eval)

    return parser


class UsageError(CorpexError):
    pass


def cmd_build(args) -> int:
    docs = list(ingest_jsonl(args.corpus))
    index = build_index(docs, SignatureParams(k1=args.k1, k2=args.k2))
    save_index(index, args.out)
    print(json.dumps({"n_docs": index.n_docs, "vocab_size": len(index.vocab),
                      "dim": index.dim, "out": str(args.out)}))
    return 0


def cmd_update(args) -> int:
    index = load_index(args.index)
    for corpus_path in args.corpus:
        index.attach_documents(ingest_jsonl(corpus_path))
    new_docs = list(ingest_jsonl(args.doc_jsonl))
    for doc in new_docs:
        update_index(index, doc)
    if args.resign:
        if len(index.documents) < len(index.signatures):
            raise UsageError("--resign needs the raw documents; pass the previously "
                             "indexed corpus with --corpus")
        resign_all(index)
    out = args.out or args.index
    save_index(index, out)
    print(json.dumps({"n_docs": index.n_docs, "vocab_size": len(index.vocab),
                      "dim": index.dim, "added": len(new_docs),
                      "stale": len(index.stale_doc_ids),
                      "stale_exact": index.stale_exact,
                      "resigned": bool(args.resign), "out": str(out)}))
    return 0


def _expand_universe(args, index) -> list[Document]:
    """Documents to rank for baseline methods."""
    if args.corpus:
        return list(ingest_jsonl(args.corpus))
    if args.method in ("tfidf", "hash", "query"):
        raise UsageError(f"method {args.method!r} needs --corpus (document texts)")
    # random and dense need ids only
    return [Document.from_text(doc_id, "") for doc_id in index.signatures]


def cmd_expand(args) -> int:
    index = load_index(args.index)
    seeds = list(ingest_jsonl(args.seeds))
    if args.method == "sauce":
        results, seconds = timed(expand, index, seeds, args.top_k,
                                 threads=args.threads, normalize=args.normalize)
    else:
        docs = _expand_universe(args, index)
        kwargs = {"seeds": seeds, "rng_seed": args.rng_seed, "dim": args.hash_dim,
                  "threads": args.threads}
        if args.method == "tfidf":
            kwargs["vocab"] = index.vocab
        if args.method == "dense":
            if not args.vectors:
                raise UsageError("method 'dense' needs --vectors")
            kwargs["store"] = load_vectors(args.vectors)
        if args.method == "query":
            if not args.phrases:
                raise UsageError("method 'query' needs --phrases")
            kwargs["phrases"] = load_phrases(args.phrases)
        results, seconds = timed(baseline_expand, args.method, docs, args.top_k, **kwargs)

    with open(args.out, "w", encoding="utf-8") as fh:
        for rank, row in enumerate(results, start=1):
            fh.write(f"{rank}\t{row.doc_id}\t{row.score}\n")
    summary = {"method": args.method, "top_k": args.top_k, "returned": len(results),
               "elapsed_ms": seconds * 1000.0, "out": str(args.out)}
    Path(str(args.out) + ".meta.json").write_text(json.dumps(summary) + "\n",
                                                  encoding="utf-8")
    print(json.dumps(summary))
    return 0


def _read_results(path) -> list[str]:
    ranked = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise UsageError(f"{path}: line {lineno}: expected rank<TAB>doc_id<TAB>score")
            ranked.append(parts[1])
    return ranked


def cmd_eval(args) -> int:
    ranked = _read_results(args.results)
    phrases = load_phrases(args.phrases)
    by_id = {doc.doc_id: doc for doc in ingest_jsonl(args.corpus)}
    missing = [doc_id for doc_id in ranked if doc_id not in by_id]
    if missing:
        raise UsageError(f"{args.results}: doc id {missing[0]!r} not in corpus")
    retrieved = [by_id[doc_id] for doc_id in ranked]
    corpus_docs = list(by_id.values())

    fraction, _ = coverage(phrases, retrieved)
    report = EvalReport(coverage=fraction,
                        phrase_rows=term_histogram(phrases, corpus_docs, retrieved))

    meta_path = Path(str(args.results) + ".meta.json")
    if meta_path.exists():
        report.elapsed_ms = json.loads(meta_path.read_text(encoding="utf-8")).get("elapsed_ms")

    if args.judgments:
        judgments = load_judgments(args.judgments)
        n = max(1, len(ranked))
        report.ndcg = ndcg(ranked, judgments, n)
        report.map, report.recall = map_and_recall(ranked, judgments, n)
        if any(judgments.values()):
            report.pr_points = pr_curve(ranked, judgments)

    if args.ks:
        try:
            ks = [int(part) for part in args.ks.split(",")]
        except ValueError:
            raise UsageError(f"--ks must be comma-separated integers, got {args.ks!r}") from None
        if ks != sorted(ks) or any(k < 1 for k in ks):
            raise UsageError("--ks must be ascending positive integers")
        rows = []
        for k in ks:
            found, _ = coverage(phrases, retrieved[:k])
            rows.append((k, len(phrases) - round(found * len(phrases))))
        report.ablation_rows = rows

    report.write(args.out)
    print(json.dumps(report.json_summary()))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (CorpexError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
