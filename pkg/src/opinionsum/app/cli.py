"""Command-line entry points for the whole pipeline.

Subcommands: ingest, extract, train, summarize, evaluate, sweep, serve.
Paths given as relative names resolve against $OPINIONSUM_DATA_DIR when
that variable is set and the path does not exist as written.  Every
randomized stage takes --seed, so runs are end-to-end reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .. import evaluation
from ..baselines import best_review, lexrank_summarize, worst_review
from ..corpus import ingest_reviews
from ..embedding import load_embeddings
from ..extraction import extract_corpus, load_pretagged, save_pretagged
from ..generator import (
    DecodeConfig,
    ModelDims,
    TrainConfig,
    build_vocab,
    load_model,
    make_training_pairs,
    save_model,
    train,
)
from ..lexicons import lexicon_for
from ..selection import SelectionConfig
from ..textualize import textualize_training
from .bundle import PipelineBundle, run_summarize

METHODS = ("digest", "lexrank", "best_review", "worst_review")


def _resolve(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("OPINIONSUM_DATA_DIR")
    if base and not os.path.isabs(path) and not os.path.exists(path):
        candidate = Path(base) / path
        if candidate.exists():
            return str(candidate)
    return path


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reviews", required=True, help="review JSONL file")
    p.add_argument("--domain", default="hotel", help="lexicon domain (hotel, restaurant)")
    p.add_argument("--tags", help="pre-tagged opinion JSONL; defaults to rule extraction")


def _load_corpus_and_tags(args):
    corpus = ingest_reviews(_resolve(args.reviews), domain_label=args.domain)
    lexicon = lexicon_for(args.domain)
    if getattr(args, "tags", None):
        extractions = load_pretagged(_resolve(args.tags), corpus)
    else:
        extractions = extract_corpus(corpus, lexicon)
    return corpus, lexicon, extractions


def _load_bundle(args) -> PipelineBundle:
    if not args.embeddings or not args.model:
        raise ValueError("--embeddings and --model are required for the digest pipeline")
    corpus, lexicon, extractions = _load_corpus_and_tags(args)
    store = load_embeddings(_resolve(args.embeddings), args.dim)
    model = load_model(_resolve(args.model))
    return PipelineBundle(
        corpus, extractions, store, model, lexicon,
        selection_defaults=SelectionConfig(seed=args.seed),
        decode_defaults=DecodeConfig(),
    )


def _add_bundle_args(p: argparse.ArgumentParser) -> None:
    _add_corpus_args(p)
    p.add_argument("--embeddings", help="word embedding text file")
    p.add_argument("--dim", type=int, default=300, help="embedding dimension")
    p.add_argument("--model", help="generator checkpoint")


def _digest_summaries(bundle, entity_ids, k=None, theta=None, seed=None,
                      aspect=None, polarity=None, max_len=None):
    out = {}
    for eid in entity_ids:
        result = run_summarize(bundle, eid, k=k, theta=theta, seed=seed,
                               aspect=aspect, polarity=polarity, max_len=max_len)
        out[eid] = result["summary"]
    return out


def _baseline_summaries(corpus, entity_ids, method, budget):
    out = {}
    for eid in entity_ids:
        reviews = corpus.entity_reviews(eid)
        if method == "lexrank":
            out[eid] = lexrank_summarize(reviews, budget)
        elif method == "best_review":
            out[eid] = best_review(reviews).text
        else:
            out[eid] = worst_review(reviews).text
    return out


def _read_references(path) -> dict[str, str]:
    refs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            if "entity_id" not in record or "summary" not in record:
                raise ValueError(f"line {lineno}: reference needs entity_id and summary")
            refs[record["entity_id"]] = record["summary"]
    return refs


# ---------------------------------------------------------------------------
# subcommands

def _cmd_ingest(args) -> int:
    corpus = ingest_reviews(_resolve(args.reviews), domain_label=args.domain)
    print(f"read {corpus.review_count} reviews across {len(corpus.entities)} entities")
    for eid in corpus.entity_ids():
        print(f"  {eid}: {len(corpus.entities[eid])} reviews")
    return 0


def _cmd_extract(args) -> int:
    corpus, _, extractions = _load_corpus_and_tags(args)
    n = save_pretagged(args.out, extractions)
    n_reviews = sum(1 for s in extractions.values() if len(s) > 0)
    print(f"wrote {n} opinions for {n_reviews}/{corpus.review_count} reviews to {args.out}")
    return 0


def _cmd_train(args) -> int:
    corpus, _, extractions = _load_corpus_and_tags(args)
    streams = [r.tokens for r in corpus.all_reviews()]
    streams += [
        textualize_training(s).text.split() for s in extractions.values() if len(s) > 0
    ]
    vocab = build_vocab(streams, min_count=args.min_count)
    pairs, skipped = make_training_pairs(corpus, extractions, vocab)
    print(f"{len(pairs)} training pairs ({skipped} reviews without opinions skipped), "
          f"vocab {len(vocab)}")
    dims = ModelDims(layers=args.layers, heads=args.heads, d_model=args.d_model,
                     d_ff=args.d_ff, dropout=args.dropout)
    config = TrainConfig(learning_rate=args.lr, momentum=args.momentum, decay=args.decay,
                         epochs=args.epochs, batch_size=args.batch_size, seed=args.seed)
    model, losses = train(pairs, dims, vocab, config)
    for epoch, loss in enumerate(losses, start=1):
        print(f"epoch {epoch}: mean token cross-entropy {loss:.4f}")
    save_model(model, args.out)
    print(f"saved checkpoint to {args.out}")
    return 0


def _cmd_summarize(args) -> int:
    if args.method == "digest":
        bundle = _load_bundle(args)
        result = run_summarize(
            bundle, args.entity, k=args.k, theta=args.theta, seed=args.seed,
            aspect=args.aspect, polarity=args.polarity,
            beam_size=args.beam_size, max_len=args.max_len,
        )
        if result["status"] == "empty_selection":
            print("no opinions match the active filters; nothing to summarize")
            return 0
        print(result["summary"])
        print()
        print(f"{'size':>5}  {'polarity':<9} {'aspect':<12} phrase")
        for item in result["selected"]:
            print(f"{item['size']:>5}  {item['polarity']:<9} {item['aspect']:<12} {item['phrase']}")
        return 0
    corpus = ingest_reviews(_resolve(args.reviews), domain_label=args.domain)
    summary = _baseline_summaries(corpus, [args.entity], args.method, args.budget)[args.entity]
    print(summary)
    return 0


def _cmd_evaluate(args) -> int:
    if args.votes:
        table = evaluation.load_votes(_resolve(args.votes))
        scores = evaluation.bws_score(table)
        print(f"{'System':<20} {'Best':>6} {'Worst':>6} {'Total':>6} {'Score':>8}")
        for system, votes in table.systems.items():
            print(f"{system:<20} {votes.best:>6} {votes.worst:>6} {votes.total:>6} "
                  f"{scores[system]:>+8.2f}")
        if args.out:
            _write_json(args.out, {"bws": scores})
        return 0
    if args.annotations:
        with open(_resolve(args.annotations), encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh if line.strip()]
        ratios = evaluation.label_ratios(records)
        for system, dist in ratios.items():
            row = "  ".join(f"{label} {pct:.2f}%" for label, pct in dist.items())
            print(f"{system:<20} {row}")
        if args.out:
            _write_json(args.out, {"ratios": ratios})
        return 0
    if not args.refs:
        raise ValueError("--refs is required unless --votes or --annotations is given")
    references = _read_references(_resolve(args.refs))
    corpus = ingest_reviews(_resolve(args.reviews), domain_label=args.domain)
    shared = [eid for eid in corpus.entity_ids() if eid in references]
    if args.method == "digest":
        bundle = _load_bundle(args)
        summaries = _digest_summaries(bundle, shared, k=args.k, theta=args.theta,
                                      seed=args.seed, aspect=args.aspect,
                                      polarity=args.polarity, max_len=args.max_len)
    else:
        summaries = _baseline_summaries(corpus, shared, args.method, args.budget)
    report = evaluation.evaluate_corpus(summaries, references)
    print(evaluation.render_score_table({args.method: report.mean_scores}))
    if report.skipped:
        print(f"skipped (missing reference or summary): {', '.join(report.skipped)}")
    if args.out:
        _write_json(args.out, {"method": args.method, **report.to_dict()})
    return 0


def _cmd_sweep(args) -> int:
    bundle = _load_bundle(args)
    references = _read_references(_resolve(args.refs))
    shared = [eid for eid in bundle.corpus.entity_ids() if eid in references]
    refs = {eid: references[eid] for eid in shared}

    def summarize_fn(entity_id, k, theta, max_len):
        return run_summarize(bundle, entity_id, k=k, theta=theta, seed=args.seed,
                             max_len=max_len)["summary"]

    grid = evaluation.sensitivity_sweep(
        summarize_fn, refs,
        ks=[int(v) for v in args.k.split(",")],
        thetas=[float(v) for v in args.theta.split(",")],
        max_lens=[int(v) for v in args.max_len.split(",")],
    )
    print(evaluation.render_sweep(grid))
    if args.out:
        _write_json(args.out, grid.to_dict())
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    bundle = _load_bundle(args)
    serve(bundle, host=args.host, port=args.port, frontend_dir=args.frontend)
    return 0


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opinionsum",
        description="Controllable abstractive opinion summarization over review corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and index a review file")
    p.add_argument("--reviews", required=True)
    p.add_argument("--domain", default="hotel")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("extract", help="rule-extract opinions to a pre-tagged JSONL file")
    _add_corpus_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="train the generator by review reconstruction")
    _add_corpus_args(p)
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--momentum", type=float, default=0.1)
    p.add_argument("--decay", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--d-model", type=int, default=128)
    p.add_argument("--d-ff", type=int, default=256)
    p.add_argument("--dropout", type=float, default=0.1)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("summarize", help="summarize one entity")
    _add_bundle_args(p)
    p.add_argument("--entity", required=True)
    p.add_argument("--method", choices=METHODS, default="digest")
    p.add_argument("--k", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--aspect", action="append")
    p.add_argument("--polarity", choices=("all", "positive", "neutral", "negative"))
    p.add_argument("--beam-size", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--budget", type=int, default=60, help="lexrank token budget")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("evaluate", help="score summaries against references (or votes)")
    _add_bundle_args(p)
    p.add_argument("--refs", help="reference JSONL {entity_id, summary}")
    p.add_argument("--method", choices=METHODS, default="digest")
    p.add_argument("--k", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--aspect", action="append")
    p.add_argument("--polarity", choices=("all", "positive", "neutral", "negative"))
    p.add_argument("--max-len", type=int)
    p.add_argument("--budget", type=int, default=60)
    p.add_argument("--votes", help="best-worst vote JSONL {item_id, system, vote}")
    p.add_argument("--annotations", help="annotation JSONL {item_id, system, label}")
    p.add_argument("--out", help="write a machine-readable JSON report")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="hyper-parameter sensitivity grid")
    _add_bundle_args(p)
    p.add_argument("--refs", required=True)
    p.add_argument("--k", default="10,15,20")
    p.add_argument("--theta", default="0.6,0.7,0.8,0.9")
    p.add_argument("--max-len", default="40,60")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_bundle_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--frontend", help="directory of built UI assets to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
