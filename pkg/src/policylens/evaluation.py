"""10-fold cross-validation harness and the multi-label metric suite.

Per-label precision/recall/F2 are computed from pooled out-of-fold
predictions. Subset accuracy, Hamming score and Hamming loss are reported
twice, because they are natively corpus-level multi-label metrics:

* per label, on the one-vs-rest reduction of each instance's label set
  (Hamming loss uses a 2-slot label space there), and
* once corpus-level over the full 11-label sets.

The report's ``average`` row is the unweighted mean of the per-label rows.
Folds are independent; assembly is a deterministic reduction by fold id.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus, LabelSet, NfrLabel
from .errors import EmptyInput, InsufficientData, LengthMismatch
from .learner import SvmHyperparams, predict_labels_batch, train_binary_relevance
from .textprep import StopWordList, load_stop_words, preprocess
from .vectorize import (
    EmbeddingTable,
    embed_average,
    fit_tfidf,
    transform_tfidf,
)


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    fold_of: np.ndarray  # instance index -> fold id in 0..k-1
    seed: int

    def train_test_indices(self, fold: int) -> tuple:
        test = np.flatnonzero(self.fold_of == fold)
        train = np.flatnonzero(self.fold_of != fold)
        return train, test


@dataclass(frozen=True)
class LabelMetrics:
    precision: float
    recall: float
    f2: float
    hamming_score: float
    subset_accuracy: float
    hamming_loss: float

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f2": self.f2,
            "hamming_score": self.hamming_score,
            "subset_accuracy": self.subset_accuracy,
            "hamming_loss": self.hamming_loss,
        }


@dataclass(frozen=True)
class MultiLabelMetrics:
    """Corpus-level reading over the full label sets."""

    subset_accuracy: float
    hamming_score: float
    hamming_loss: float


@dataclass(frozen=True)
class EvalReport:
    per_label: dict  # NfrLabel -> LabelMetrics
    average: LabelMetrics
    multilabel: MultiLabelMetrics
    config: dict
    #: per-fold training vocabularies, kept only when requested
    fold_vocabularies: Optional[tuple] = None


# -- fold assignment ---------------------------------------------------------


def kfold_split(n: int, k: int = 10, seed: int = 42) -> FoldAssignment:
    """Seeded uniform shuffle, then round-robin fold assignment."""
    if k < 2 or n < k:
        raise InsufficientData(n, k)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[perm] = np.arange(n) % k
    return FoldAssignment(k=k, fold_of=fold_of, seed=seed)


def stratified_kfold(gold: Sequence[LabelSet], k: int = 10, seed: int = 42) -> FoldAssignment:
    """Iterative stratification over multi-label gold sets.

    Rarest label first, each of its unassigned instances goes to the
    eligible fold with the greatest remaining demand for that label. Fold
    capacities are capped so sizes still differ by at most one.
    """
    n = len(gold)
    if k < 2 or n < k:
        raise InsufficientData(n, k)
    rng = np.random.default_rng(seed)
    processing_order = rng.permutation(n)

    base, extra = divmod(n, k)
    capacity = np.full(k, base, dtype=np.int64)
    capacity[:extra] += 1

    label_count = {lbl: sum(1 for g in gold if lbl in g) for lbl in NfrLabel}
    desired = {lbl: np.full(k, label_count[lbl] / k) for lbl in NfrLabel}

    fold_of = np.full(n, -1, dtype=np.int64)
    unassigned = set(range(n))
    label_order = sorted(
        (lbl for lbl in NfrLabel if label_count[lbl] > 0),
        key=lambda lbl: (label_count[lbl], list(NfrLabel).index(lbl)),
    )
    for lbl in label_order:
        for i in processing_order:
            if i not in unassigned or lbl not in gold[i]:
                continue
            eligible = np.flatnonzero(capacity > 0)
            want = desired[lbl][eligible]
            best = eligible[
                np.lexsort((eligible, -capacity[eligible], -want))[0]
            ]
            fold_of[i] = best
            capacity[best] -= 1
            for member in gold[i]:
                desired[member][best] -= 1.0
            unassigned.discard(i)
    for i in processing_order:  # instances with no counted label
        if i in unassigned:
            best = int(np.argmax(capacity))
            fold_of[i] = best
            capacity[best] -= 1
            unassigned.discard(i)
    return FoldAssignment(k=k, fold_of=fold_of, seed=seed)


# -- metrics -------------------------------------------------------------------


def precision_recall_f2(tp: int, fp: int, fn: int) -> tuple:
    """Binary precision, recall and F-beta with beta=2; 0/0 is 0."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f2 = 5.0 * p * r / (4.0 * p + r) if 4.0 * p + r else 0.0
    return p, r, f2


def _check_lists(gold: Sequence[LabelSet], pred: Sequence[LabelSet]) -> None:
    if len(gold) != len(pred):
        raise LengthMismatch(len(gold), len(pred))
    if not gold:
        raise EmptyInput("no instances")


def subset_accuracy(gold: Sequence[LabelSet], pred: Sequence[LabelSet]) -> float:
    """Fraction of instances whose predicted set equals the gold set."""
    _check_lists(gold, pred)
    return sum(1 for g, p in zip(gold, pred) if frozenset(g) == frozenset(p)) / len(gold)


def hamming_score(gold: Sequence[LabelSet], pred: Sequence[LabelSet]) -> float:
    """Mean per-instance Jaccard overlap; two empty sets count as 1."""
    _check_lists(gold, pred)
    total = 0.0
    for g, p in zip(gold, pred):
        g, p = frozenset(g), frozenset(p)
        union = g | p
        total += len(g & p) / len(union) if union else 1.0
    return total / len(gold)


def hamming_loss(
    gold: Sequence[LabelSet], pred: Sequence[LabelSet], n_labels: int = len(NfrLabel)
) -> float:
    """Mean fraction of the label space predicted incorrectly."""
    _check_lists(gold, pred)
    if n_labels < 1:
        raise ValueError("n_labels must be >= 1")
    total = sum(len(frozenset(g) ^ frozenset(p)) for g, p in zip(gold, pred))
    return total / (n_labels * len(gold))


def _one_vs_rest_metrics(
    gold: Sequence[LabelSet], pred: Sequence[LabelSet], lbl: NfrLabel
) -> LabelMetrics:
    tp = fp = fn = 0
    for g, p in zip(gold, pred):
        in_g, in_p = lbl in g, lbl in p
        tp += in_g and in_p
        fp += in_p and not in_g
        fn += in_g and not in_p
    p_, r_, f2 = precision_recall_f2(tp, fp, fn)
    restricted_gold = [frozenset([lbl]) if lbl in g else frozenset() for g in gold]
    restricted_pred = [frozenset([lbl]) if lbl in p else frozenset() for p in pred]
    return LabelMetrics(
        precision=p_,
        recall=r_,
        f2=f2,
        hamming_score=hamming_score(restricted_gold, restricted_pred),
        subset_accuracy=subset_accuracy(restricted_gold, restricted_pred),
        hamming_loss=hamming_loss(restricted_gold, restricted_pred, n_labels=2),
    )


def score_predictions(
    gold: Sequence[LabelSet], pred: Sequence[LabelSet], config: dict | None = None
) -> EvalReport:
    """Full metric report over pooled gold/predicted label sets."""
    _check_lists(gold, pred)
    per_label = {lbl: _one_vs_rest_metrics(gold, pred, lbl) for lbl in NfrLabel}
    fields = ("precision", "recall", "f2", "hamming_score", "subset_accuracy", "hamming_loss")
    average = LabelMetrics(
        **{
            f: sum(getattr(m, f) for m in per_label.values()) / len(per_label)
            for f in fields
        }
    )
    multilabel = MultiLabelMetrics(
        subset_accuracy=subset_accuracy(gold, pred),
        hamming_score=hamming_score(gold, pred),
        hamming_loss=hamming_loss(gold, pred, n_labels=len(NfrLabel)),
    )
    return EvalReport(
        per_label=per_label,
        average=average,
        multilabel=multilabel,
        config=dict(config or {}),
    )


# -- cross-validation -----------------------------------------------------------


def cross_validate(
    corpus: Corpus,
    vectorizer: str = "tfidf",
    table: EmbeddingTable | None = None,
    hp: SvmHyperparams | None = None,
    k: int = 10,
    seed: int = 42,
    stratified: bool = False,
    stops: StopWordList | None = None,
    record_vocabularies: bool = False,
) -> EvalReport:
    """K-fold cross-validation of Binary Relevance over the given corpus.

    Every statement must carry gold labels. The TF-IDF vectorizer is
    refitted per fold on training statements only; the embedding table is
    pretrained and static.
    """
    if vectorizer not in ("tfidf", "embedding"):
        raise ValueError(f"unknown vectorizer kind: {vectorizer!r}")
    if vectorizer == "embedding" and table is None:
        raise ValueError("embedding vectorizer requires an embedding table")
    hp = hp or SvmHyperparams()
    stops = stops or load_stop_words()

    statements = corpus.statements()
    for stmt in statements:
        if not stmt.gold:
            raise ValueError(f"statement {stmt.id!r} has no gold labels")
    n = len(statements)
    if n < k:
        raise InsufficientData(n, k)

    tokens = [preprocess(s.text, stops) for s in statements]
    gold = [s.gold for s in statements]
    folds = (
        stratified_kfold(gold, k=k, seed=seed)
        if stratified
        else kfold_split(n, k=k, seed=seed)
    )

    pooled_pred: list = [None] * n
    fold_vocabularies = []
    for fold in range(k):
        train_idx, test_idx = folds.train_test_indices(fold)
        if vectorizer == "tfidf":
            fitted = fit_tfidf([tokens[i] for i in train_idx])
            fold_vocabularies.append(frozenset(fitted.vocabulary))
            train_x = [transform_tfidf(fitted, tokens[i]) for i in train_idx]
            test_x = [transform_tfidf(fitted, tokens[i]) for i in test_idx]
        else:
            fold_vocabularies.append(frozenset(table.vectors))
            train_x = [embed_average(table, tokens[i]) for i in train_idx]
            test_x = [embed_average(table, tokens[i]) for i in test_idx]
        br = train_binary_relevance(train_x, [gold[i] for i in train_idx], hp)
        for local, (labels, _scores) in enumerate(predict_labels_batch(br, test_x)):
            pooled_pred[int(test_idx[local])] = labels

    config = {
        "vectorizer": vectorizer,
        "c": hp.c,
        "epochs": hp.epochs,
        "seed": seed,
        "k": k,
        "stratified": stratified,
        "n_instances": n,
    }
    report = score_predictions(gold, pooled_pred, config)
    if record_vocabularies:
        report = EvalReport(
            per_label=report.per_label,
            average=report.average,
            multilabel=report.multilabel,
            config=report.config,
            fold_vocabularies=tuple(fold_vocabularies),
        )
    return report


# -- report serialization ---------------------------------------------------------


def report_to_json(report: EvalReport) -> str:
    payload = {
        "config": report.config,
        "per_label": {
            lbl.value: report.per_label[lbl].as_dict() for lbl in NfrLabel
        },
        "average": report.average.as_dict(),
        "multilabel": {
            "subset_accuracy": report.multilabel.subset_accuracy,
            "hamming_score": report.multilabel.hamming_score,
            "hamming_loss": report.multilabel.hamming_loss,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def report_to_csv(report: EvalReport) -> str:
    """Twelve rows (11 labels + Average), columns P, R, F2, HS, SA, HL."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Functionality", "P", "R", "F2", "HS", "SA", "HL"])
    rows = [(lbl.value, report.per_label[lbl]) for lbl in NfrLabel]
    rows.append(("Average", report.average))
    for name, m in rows:
        writer.writerow(
            [
                name,
                f"{m.precision:.4f}",
                f"{m.recall:.4f}",
                f"{m.f2:.4f}",
                f"{m.hamming_score:.4f}",
                f"{m.subset_accuracy:.4f}",
                f"{m.hamming_loss:.4f}",
            ]
        )
    return buf.getvalue()


def format_report_table(report: EvalReport) -> str:
    """Fixed-width human-readable rendering of the CSV content."""
    lines = [
        f"{'Functionality':<16} {'P':>7} {'R':>7} {'F2':>7} {'HS':>7} {'SA':>7} {'HL':>7}"
    ]
    rows = [(lbl.value, report.per_label[lbl]) for lbl in NfrLabel]
    rows.append(("Average", report.average))
    for name, m in rows:
        lines.append(
            f"{name:<16} {m.precision:>7.4f} {m.recall:>7.4f} {m.f2:>7.4f}"
            f" {m.hamming_score:>7.4f} {m.subset_accuracy:>7.4f} {m.hamming_loss:>7.4f}"
        )
    ml = report.multilabel
    lines.append(
        "multi-label (full sets): "
        f"SA={ml.subset_accuracy:.4f} HS={ml.hamming_score:.4f} HL={ml.hamming_loss:.4f}"
    )
    return "\n".join(lines)
