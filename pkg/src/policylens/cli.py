"""Command-line surface wiring the pipeline end to end.

Commands:

    policylens stats    --corpus FILE [--out DIR]
    policylens crossval --corpus FILE [--vectorizer tfidf|embedding]
                        [--embeddings FILE] [--c F] [--epochs N] [--seed N]
                        [--k N] [--stratified] [--out DIR]
    policylens train    --corpus FILE [--vectorizer ...] [--embeddings FILE]
                        [--c F] [--epochs N] [--seed N] [--out DIR]
    policylens annotate --model BUNDLE --policy FILE [--out DIR]

Options may also come from a JSON config file via --config; explicit flags
win over config values. Exit codes: 0 success, 1 internal failure, 2
user/input error. stderr carries errors; stdout carries only data/tables.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import bundle as bundle_io
from .annotator import annotate_document, render_html, render_json
from .corpus import corpus_stats, load_corpus, loads_corpus, segment_document
from .errors import PolicyLensError
from .evaluation import (
    cross_validate,
    format_report_table,
    report_to_csv,
    report_to_json,
)
from .learner import SvmHyperparams, train_binary_relevance
from .textprep import load_stop_words, preprocess
from .vectorize import embed_average, fit_tfidf, load_embeddings, transform_tfidf

_CONFIG_KEYS = (
    "corpus", "embeddings", "vectorizer", "c", "epochs", "seed", "k", "out",
    "stratified", "model", "policy",
)


class UsageError(PolicyLensError):
    """Bad flag combination or unusable input file."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="policylens",
        description="Classify and annotate data-collection statements in privacy policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, corpus: bool = True) -> None:
        if corpus:
            p.add_argument("--corpus", help="corpus JSONL file")
        p.add_argument("--config", help="JSON config file; flags win over it")
        p.add_argument("--out", help="output directory (default: current)")

    p_stats = sub.add_parser("stats", help="corpus summary statistics")
    common(p_stats)

    p_cv = sub.add_parser("crossval", help="k-fold cross-validation report")
    common(p_cv)
    _model_flags(p_cv)
    p_cv.add_argument("--k", type=int, default=None, help="number of folds (default 10)")
    p_cv.add_argument(
        "--stratified", action="store_true", default=None,
        help="use iterative label stratification for the folds",
    )

    p_train = sub.add_parser("train", help="train and persist a model bundle")
    common(p_train)
    _model_flags(p_train)

    p_ann = sub.add_parser("annotate", help="annotate a policy with a trained bundle")
    common(p_ann, corpus=False)
    p_ann.add_argument("--model", help="model bundle JSON path")
    p_ann.add_argument("--policy", help="policy file: corpus JSONL or raw text")
    return parser


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--vectorizer", choices=("tfidf", "embedding"), default=None,
        help="statement vectorizer (default tfidf)",
    )
    p.add_argument("--embeddings", help="pretrained embedding text file")
    p.add_argument("--c", type=float, default=None, help="soft-margin weight (default 1.0)")
    p.add_argument("--epochs", type=int, default=None, help="training epochs (default 100)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset flags from --config; explicit flags always win."""
    if getattr(args, "config", None):
        loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(loaded) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for key, value in loaded.items():
            if getattr(args, key, None) in (None, False):
                setattr(args, key, value)
    defaults = {
        "vectorizer": "tfidf", "c": 1.0, "epochs": 100, "seed": 42, "k": 10,
        "stratified": False, "out": ".",
    }
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if not getattr(args, name, None):
            raise UsageError(f"--{name} is required")


def _hyperparams(args: argparse.Namespace) -> SvmHyperparams:
    try:
        return SvmHyperparams(c=args.c, epochs=args.epochs, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _embedding_table(args: argparse.Namespace):
    if args.vectorizer != "embedding":
        return None
    if not args.embeddings:
        raise UsageError("--vectorizer embedding requires --embeddings")
    return load_embeddings(args.embeddings)


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_stats(args: argparse.Namespace) -> int:
    _require(args, "corpus")
    stats = corpus_stats(load_corpus(args.corpus))
    payload = json.dumps(stats.to_json_dict(), indent=2, sort_keys=True)
    print(payload)
    print()
    print(f"{'documents':<24}{stats.n_documents}")
    print(f"{'statements':<24}{stats.n_statements}")
    print(f"{'avg words / policy':<24}{stats.avg_words_per_policy:.1f}")
    print(f"{'avg reading ease':<24}{stats.avg_fre:.1f}")
    print(f"{'multi-label fraction':<24}{stats.multi_label_fraction:.4f}")
    print("label histogram:")
    for label, count in stats.label_histogram.items():
        print(f"  {label.value:<22}{count}")
    if stats.undefined:
        print(f"undefined averages: {', '.join(stats.undefined)}")
    if args.out != ".":
        (_out_dir(args) / "stats.json").write_text(payload + "\n", encoding="utf-8")
    return 0


def cmd_crossval(args: argparse.Namespace) -> int:
    _require(args, "corpus")
    table = _embedding_table(args)
    corpus = load_corpus(args.corpus)
    unlabeled = [s.id for s in corpus.statements() if not s.gold]
    if unlabeled:
        raise UsageError(
            f"{len(unlabeled)} statements lack gold labels (first: {unlabeled[0]!r});"
            " cross-validation needs a fully labeled corpus"
        )
    report = cross_validate(
        corpus,
        vectorizer=args.vectorizer,
        table=table,
        hp=_hyperparams(args),
        k=args.k,
        seed=args.seed,
        stratified=bool(args.stratified),
    )
    out = _out_dir(args)
    (out / "eval_report.json").write_text(report_to_json(report) + "\n", encoding="utf-8")
    (out / "eval_report.csv").write_text(report_to_csv(report), encoding="utf-8")
    print(format_report_table(report))
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    _require(args, "corpus")
    table = _embedding_table(args)
    corpus = load_corpus(args.corpus)
    statements = corpus.statements()
    labeled = [s for s in statements if s.gold]
    if not labeled:
        raise UsageError("corpus has no gold-labeled statements to train on")
    hp = _hyperparams(args)
    stops = load_stop_words()
    tokens = [preprocess(s.text, stops) for s in labeled]
    if args.vectorizer == "tfidf":
        vectorizer = fit_tfidf(tokens)
        xs = [transform_tfidf(vectorizer, t) for t in tokens]
    else:
        vectorizer = table
        xs = [embed_average(table, t) for t in tokens]
    br = train_binary_relevance(xs, [s.gold for s in labeled], hp)
    descriptor = (
        f"{args.vectorizer} vectorizer, dim={xs[0].dim},"
        f" c={hp.c}, epochs={hp.epochs}, seed={hp.seed}"
    )
    bundle = bundle_io.build_bundle(args.vectorizer, vectorizer, br, hp, descriptor)
    out = _out_dir(args) / "model_bundle.json"
    bundle_io.save_bundle(bundle, out)
    print(f"wrote {out}")
    return 0


def _sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name) or "policy"


def cmd_annotate(args: argparse.Namespace) -> int:
    _require(args, "model", "policy")
    try:
        bundle = bundle_io.load_bundle(args.model)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"unreadable model bundle: {exc}") from None
    policy_path = Path(args.policy)
    if policy_path.suffix in (".jsonl", ".json"):
        documents = list(loads_corpus(policy_path.read_text(encoding="utf-8")).documents)
    else:
        text = policy_path.read_text(encoding="utf-8")
        documents = [segment_document(_sanitize(policy_path.stem), text)]
    stops = load_stop_words()
    out = _out_dir(args)
    for doc in documents:
        if not doc.statements:
            doc = segment_document(doc.id, doc.raw_text)
        ad = annotate_document(
            doc,
            bundle.br_model,
            bundle.vectorizer,
            stops,
            model_descriptor=bundle.model_descriptor,
        )
        stem = _sanitize(doc.id)
        (out / f"{stem}.html").write_text(render_html(ad), encoding="utf-8")
        (out / f"{stem}.annotations.json").write_text(
            render_json(ad) + "\n", encoding="utf-8"
        )
        print(f"wrote {out / (stem + '.html')} and {out / (stem + '.annotations.json')}")
    return 0


_COMMANDS = {
    "stats": cmd_stats,
    "crossval": cmd_crossval,
    "train": cmd_train,
    "annotate": cmd_annotate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return _COMMANDS[args.command](args)
    except PolicyLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
