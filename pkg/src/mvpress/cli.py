"""Command-line front end.

Subcommands chain through files only: gen-synth makes a corpus, compress
shrinks it, index persists it, search produces a TREC run plus an optional
match log, eval scores the run, analyze summarizes the match log, correlate
relates metric series to evenness series. Exit codes: 0 success, 1 runtime
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .analytics import (
    correlation_table,
    evenness_report,
    matching_strength,
    mean_pairwise_cosine,
    utilization_fraction,
)
from .compressors import (
    AttentionGuidedClustering,
    HierarchicalPool,
    MemoryTokens,
    SequenceResize,
    read_resize_weights,
)
from .compressors.agc import AGGREGATION_MODES, SELECTION_MODES
from .errors import ValidationError
from .formats import meta_path_for, read_matt, read_meta, read_mvec, write_matt, write_meta, write_mvec
from .index import FlatIndex, build_index, load_index, save_index, search_corpus
from .matchlog import read_match_log, write_match_log
from .metrics import mrr, ndcg_at_k, percent_of_baseline, recall_at_k
from .model import COMPRESSION_METHODS
from .parallel import default_threads
from .pipeline import compress_corpus
from .scoring import normalize_corpus
from .synth import SynthSpec, generate_synth
from .trec import read_qrels, read_run, write_qrels, write_run


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {value}")
    return value


def _threads(args: argparse.Namespace) -> int:
    return args.threads if args.threads is not None else default_threads()


def _build_compressor(args: argparse.Namespace):
    if args.method == "seq-resize":
        if args.weights is None:
            args.parser.error("--method seq-resize requires --weights")
        weights = read_resize_weights(args.weights)
        if weights.m != args.budget:
            raise ValidationError(
                f"--budget {args.budget} does not match the weights file (m={weights.m})"
            )
        return SequenceResize(weights=weights)
    if args.method == "mem-tok":
        return MemoryTokens(budget=args.budget)
    if args.method == "h-pool":
        return HierarchicalPool(budget=args.budget, protected=args.protected)
    if args.attn is None:
        args.parser.error("--method agc requires --attn")
    return AttentionGuidedClustering(
        budget=args.budget,
        selection=args.agc_select,
        aggregation=args.agc_weight,
        clustering=args.agc_cluster == "on",
        seed=args.seed,
    )


def cmd_compress(args: argparse.Namespace) -> int:
    if args.protected and args.method != "h-pool":
        args.parser.error("--protected is only supported with --method h-pool")
    compressor = _build_compressor(args)
    corpus = read_mvec(args.in_path)
    attention = read_matt(args.attn) if args.attn else None
    out_corpus, meta = compress_corpus(
        corpus,
        compressor,
        attention=attention,
        threads=_threads(args),
        pad_short=args.pad_short,
    )
    write_mvec(out_corpus, args.out)
    write_meta(meta, meta_path_for(args.out))
    print(
        f"compressed {len(out_corpus)} documents to {meta.budget.m} rows each "
        f"(ratio {meta.ratio})"
    )
    return 0


def cmd_index(args: argparse.Namespace) -> int:
    corpus = read_mvec(args.in_path)
    meta_src = meta_path_for(args.in_path)
    meta = read_meta(meta_src) if meta_src.exists() else None
    index = build_index(corpus, meta)
    save_index(index, args.out)
    print(f"indexed {len(corpus)} documents ({corpus.total_tokens} vectors)")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    if args.capture_relevant and not args.match_log:
        args.parser.error("--capture-relevant requires --match-log")
    index = load_index(args.index)
    queries = read_mvec(args.queries)
    if args.normalize:
        index = FlatIndex(corpus=normalize_corpus(index.corpus), meta=index.meta)
        queries = normalize_corpus(queries)
    capture_relevant = read_qrels(args.capture_relevant) if args.capture_relevant else None
    run, matches = search_corpus(
        index,
        queries,
        k=args.k,
        capture_matches=args.match_log is not None,
        capture_relevant=capture_relevant,
        threads=_threads(args),
        tag=args.tag,
    )
    write_run(run, args.out)
    if args.match_log:
        write_match_log(matches, args.match_log)
    print(f"searched {len(queries)} queries at k={args.k}, wrote {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    run = read_run(args.run)
    qrels = read_qrels(args.qrels)
    scores = {
        "recall_at_k": recall_at_k(run, qrels, args.k),
        "ndcg_at_k": ndcg_at_k(run, qrels, args.k),
        "mrr": mrr(run, qrels),
    }
    percents = None
    if args.baseline:
        base_run = read_run(args.baseline)
        bases = {
            "recall_at_k": recall_at_k(base_run, qrels, args.k),
            "ndcg_at_k": ndcg_at_k(base_run, qrels, args.k),
            "mrr": mrr(base_run, qrels),
        }
        percents = {
            name: percent_of_baseline(scores[name], bases[name]) if bases[name] > 0 else None
            for name in scores
        }
    labels = {"recall_at_k": f"recall@{args.k}", "ndcg_at_k": f"ndcg@{args.k}", "mrr": "mrr"}
    for name, label in labels.items():
        print(f"{label} {scores[name]:.4f}")
    if percents is not None:
        for name, label in labels.items():
            shown = "n/a" if percents[name] is None else f"{percents[name]:.1f}"
            print(f"percent_of_baseline {label} {shown}")
    if args.out:
        payload = {"k": args.k, **scores, "percent_of_baseline": percents}
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    records = read_match_log(args.match_log)
    row_counts = {doc.token_count for doc in index.corpus}
    if len(row_counts) != 1:
        raise ValidationError(
            f"analytics requires a uniform row count per document, found {sorted(row_counts)}"
        )
    doc_len = row_counts.pop()
    kept = records
    if args.qrels:
        qrels = read_qrels(args.qrels)
        kept = [r for r in records if qrels.get(r.query_id, {}).get(r.doc_id, 0) >= 1]
    strength = matching_strength(kept, doc_len, mode=args.strength_norm)
    report = evenness_report(kept, doc_len)
    # utilization counts every match in the log, not just the relevant pairs
    utilization = utilization_fraction(records, index.corpus.total_tokens)
    cosine = mean_pairwise_cosine(index.corpus)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "strength.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["position", "strength"])
        for position, value in enumerate(strength):
            writer.writerow([position, float(value)])
    with open(out_dir / "cosine.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["a", "b", "cosine"])
        for a in range(doc_len):
            for b in range(doc_len):
                writer.writerow([a, b, float(cosine[a, b])])
    summary = {
        "cv": report.cv,
        "gini": report.gini,
        "sample_count": report.sample_count,
        "utilization": utilization,
        "pearson": None,
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"analyzed {len(records)} match records ({len(kept)} kept), wrote {out_dir}")
    return 0


def cmd_correlate(args: argparse.Namespace) -> int:
    try:
        payload = json.loads(Path(args.in_path).read_text(encoding="utf-8"))
        metric_series = {str(k): [float(v) for v in vs] for k, vs in payload["metrics"].items()}
        evenness_series = {str(k): [float(v) for v in vs] for k, vs in payload["evenness"].items()}
    except (KeyError, TypeError, AttributeError, json.JSONDecodeError) as exc:
        raise ValidationError(
            f"samples file must map 'metrics' and 'evenness' to lists of numbers: {exc}"
        ) from exc
    table = correlation_table(metric_series, evenness_series)
    Path(args.out).write_text(json.dumps(table, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for metric_name, row in table.items():
        for evenness_name, cell in row.items():
            print(f"{metric_name} vs 1/{evenness_name}: r={cell['r']:.4f} p={cell['p']:.4g}")
    return 0


def cmd_gen_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        doc_count=args.docs,
        concepts=args.concepts,
        redundancy=args.redundancy,
        sigma=args.sigma,
        dim=args.dim,
        seed=args.seed,
    )
    corpus, queries, sidecar, qrels = generate_synth(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_mvec(corpus, out_dir / "corpus.mvec")
    write_mvec(queries, out_dir / "queries.mvec")
    write_matt(sidecar, out_dir / "corpus.matt", order=list(corpus.doc_ids))
    write_qrels(qrels, out_dir / "qrels.txt")
    print(
        f"generated {spec.doc_count} documents of {spec.tokens_per_doc} tokens "
        f"(dim {spec.dim}) in {out_dir}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvpress",
        description="Multi-vector index compression and late-interaction search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a corpus to a fixed vector budget")
    p.add_argument("--method", required=True, choices=COMPRESSION_METHODS)
    p.add_argument("--budget", required=True, type=_positive_int, help="output rows per document")
    p.add_argument("--in", dest="in_path", required=True, help="input corpus (.mvec)")
    p.add_argument("--out", required=True, help="output corpus (.mvec); metadata lands beside it")
    p.add_argument("--attn", help="attention sidecar (.matt), required for agc")
    p.add_argument("--weights", help="resize weights (.mrsz), required for seq-resize")
    p.add_argument("--protected", type=_nonneg_int, default=0,
                   help="leading token positions kept verbatim (h-pool)")
    p.add_argument("--agc-select", choices=SELECTION_MODES, default="attention")
    p.add_argument("--agc-weight", choices=AGGREGATION_MODES, default="weighted")
    p.add_argument("--agc-cluster", choices=("on", "off"), default="on")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pad-short", choices=("zero",), default=None,
                   help="zero-pad documents shorter than the budget instead of failing")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.set_defaults(func=cmd_compress, parser=p)

    p = sub.add_parser("index", help="validate a corpus and persist it as a flat index")
    p.add_argument("--in", dest="in_path", required=True, help="corpus (.mvec)")
    p.add_argument("--out", required=True, help="index file (.mvec)")
    p.set_defaults(func=cmd_index, parser=p)

    p = sub.add_parser("search", help="run queries against a flat index")
    p.add_argument("--index", required=True, help="index file (.mvec)")
    p.add_argument("--queries", required=True, help="query corpus (.mvec)")
    p.add_argument("--k", required=True, type=_positive_int, help="results per query")
    p.add_argument("--out", required=True, help="TREC run output")
    p.add_argument("--match-log", help="JSONL match log output")
    p.add_argument("--capture-relevant",
                   help="qrels file; also log matches for relevant docs outside the top k")
    p.add_argument("--normalize", action="store_true",
                   help="L2-normalize rows on both sides before scoring")
    p.add_argument("--tag", default="mvpress")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.set_defaults(func=cmd_search, parser=p)

    p = sub.add_parser("eval", help="score a TREC run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--k", required=True, type=_positive_int)
    p.add_argument("--baseline", help="baseline TREC run for percent-of-baseline")
    p.add_argument("--out", help="metrics JSON output")
    p.set_defaults(func=cmd_eval, parser=p)

    p = sub.add_parser("analyze", help="summarize a match log over its index")
    p.add_argument("--index", required=True, help="index file (.mvec)")
    p.add_argument("--match-log", required=True, help="JSONL match log")
    p.add_argument("--qrels", help="restrict strength and evenness to relevant pairs")
    p.add_argument("--strength-norm", choices=("global", "per-query"), default="global")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_analyze, parser=p)

    p = sub.add_parser("correlate", help="Pearson table of metrics against inverse evenness")
    p.add_argument("--in", dest="in_path", required=True,
                   help="JSON with 'metrics' and 'evenness' series")
    p.add_argument("--out", required=True, help="correlation table JSON")
    p.set_defaults(func=cmd_correlate, parser=p)

    p = sub.add_parser("gen-synth", help="generate a synthetic corpus with known structure")
    p.add_argument("--docs", required=True, type=_positive_int)
    p.add_argument("--concepts", required=True, type=_positive_int)
    p.add_argument("--redundancy", required=True, type=_positive_int)
    p.add_argument("--sigma", type=_nonneg_float, default=0.0)
    p.add_argument("--dim", required=True, type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen_synth, parser=p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    # domain errors subclass ValueError; anything else is a real bug
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
