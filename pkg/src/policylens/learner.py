"""Binary linear SVM plus the Binary Relevance multi-label wrapper.

Training minimizes

    (lam / 2) * ||w||^2 + (1 / n) * sum_i max(0, 1 - y_i (w . x_i + b))

with lam = 1 / (c * n), by seeded projected sub-gradient descent with step
eta_t = 1 / (lam * t), one sample per step, reshuffling every epoch. The
per-step update runs in a compiled kernel when the extension built, with a
bit-identical pure-Python fallback selected at import (set
POLICYLENS_PURE_PYTHON=1 to force the fallback).

Single-class training data yields a constant-class model instead of an
error, so cross-validation folds that lack positives never abort. Trained
models are immutable and shareable; the 11 per-label trainings are
independent (each seeds its own shuffle stream from ``hp.seed``).
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import LabelSet, NfrLabel
from .errors import DimensionMismatch, EmptyTrainingSet
from .vectorize import FeatureVector

if os.environ.get("POLICYLENS_PURE_PYTHON"):
    from . import _pegasos_py as _kernel

    KERNEL_BACKEND = "python"
else:
    try:
        from . import _pegasos_cy as _kernel  # type: ignore[attr-defined]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from . import _pegasos_py as _kernel

        KERNEL_BACKEND = "python"

#: decision-value surrogate for constant-class models
CONSTANT_SENTINEL = sys.float_info.max


@dataclass(frozen=True)
class SvmHyperparams:
    c: float = 1.0
    epochs: int = 100
    seed: int = 42

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    label: Optional[NfrLabel] = None
    constant_class: Optional[int] = None  # +1/-1 iff training was single-class
    hyperparams: SvmHyperparams = SvmHyperparams()
    #: hinge objective after each epoch (training metadata, not persisted)
    objective_history: tuple = ()

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class BrModel:
    """One binary model per taxonomy label; prediction is their union."""

    models: dict  # NfrLabel -> LinearModel
    n_labels: int = len(NfrLabel)

    def __post_init__(self):
        missing = [l for l in NfrLabel if l not in self.models]
        if missing or len(self.models) != len(NfrLabel):
            raise ValueError(f"BrModel must cover all labels, missing {missing}")

    @property
    def dim(self) -> int:
        return next(iter(self.models.values())).dim


# -- CSR assembly ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Csr:
    indptr: np.ndarray  # int64, length n+1
    indices: np.ndarray  # int64
    values: np.ndarray  # float64
    dim: int

    @property
    def n(self) -> int:
        return int(self.indptr.shape[0] - 1)


def _to_csr(xs: Sequence[FeatureVector]) -> _Csr:
    if not xs:
        raise EmptyTrainingSet("no feature vectors")
    dim = xs[0].dim
    index_chunks: list[np.ndarray] = []
    value_chunks: list[np.ndarray] = []
    indptr = np.zeros(len(xs) + 1, dtype=np.int64)
    for row, x in enumerate(xs):
        if x.dim != dim:
            raise DimensionMismatch(dim, x.dim)
        if x.kind == "sparse":
            index_chunks.append(x.indices)
            value_chunks.append(x.values)
            indptr[row + 1] = indptr[row] + x.indices.shape[0]
        else:
            nz = np.flatnonzero(x.values)
            index_chunks.append(nz.astype(np.int64))
            value_chunks.append(x.values[nz])
            indptr[row + 1] = indptr[row] + nz.shape[0]
    indices = (
        np.concatenate(index_chunks) if index_chunks else np.zeros(0, dtype=np.int64)
    )
    values = (
        np.concatenate(value_chunks) if value_chunks else np.zeros(0, dtype=np.float64)
    )
    return _Csr(indptr=indptr, indices=indices, values=values, dim=dim)


def _csr_matvec(csr: _Csr, w: np.ndarray) -> np.ndarray:
    """Row-wise dot products, deterministic accumulation order."""
    n = csr.n
    if csr.values.shape[0] == 0:
        return np.zeros(n, dtype=np.float64)
    prod = csr.values * w[csr.indices]
    rows = np.repeat(np.arange(n), np.diff(csr.indptr))
    return np.bincount(rows, weights=prod, minlength=n)


def _row_norms_sq(csr: _Csr) -> np.ndarray:
    sq = csr.values * csr.values
    rows = np.repeat(np.arange(csr.n), np.diff(csr.indptr))
    return np.bincount(rows, weights=sq, minlength=csr.n)


# -- training ----------------------------------------------------------------


def hinge_objective(
    weights: np.ndarray, bias: float, xs: Sequence[FeatureVector], ys, c: float
) -> float:
    """The regularized average hinge loss the optimizer targets."""
    csr = _to_csr(list(xs))
    ys_arr = np.asarray(ys, dtype=np.float64)
    return _objective_csr(weights, bias, csr, ys_arr, 1.0 / (c * csr.n))


def _objective_csr(
    w: np.ndarray, b: float, csr: _Csr, ys: np.ndarray, lam: float
) -> float:
    margins = ys * (_csr_matvec(csr, w) + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * lam * float(np.dot(w, w)) + float(hinge.mean())


def _augment_bias_column(csr: _Csr) -> _Csr:
    """Append a constant-1 feature so the bias trains as a regularized
    coordinate of the parameter vector.

    A free-floating bias under the eta_t = 1/(lam*t) schedule takes its
    first update at eta_1 = c*n and, unlike the weights, never gets the
    1/t shrink that damps that kick, so imbalanced problems stall for an
    astronomical number of epochs. Folding it into the regularized vector
    is the standard remedy and keeps every kernel operation unchanged.
    """
    n = csr.n
    nnz = csr.indices.shape[0]
    indices = np.empty(nnz + n, dtype=np.int64)
    values = np.empty(nnz + n, dtype=np.float64)
    indptr = csr.indptr + np.arange(n + 1, dtype=np.int64)
    for i in range(n):
        lo, hi = csr.indptr[i], csr.indptr[i + 1]
        indices[indptr[i] : indptr[i + 1] - 1] = csr.indices[lo:hi]
        values[indptr[i] : indptr[i + 1] - 1] = csr.values[lo:hi]
        indices[indptr[i + 1] - 1] = csr.dim
        values[indptr[i + 1] - 1] = 1.0
    return _Csr(indptr=indptr, indices=indices, values=values, dim=csr.dim + 1)


def _train_csr(csr: _Csr, ys: np.ndarray, hp: SvmHyperparams) -> tuple:
    """Run the epoch loop; returns (weights, bias, objective_history)."""
    n = csr.n
    lam = 1.0 / (hp.c * n)
    rng = np.random.default_rng(hp.seed)
    aug = _augment_bias_column(csr)
    v = np.zeros(aug.dim, dtype=np.float64)
    xnorm2 = _row_norms_sq(aug)
    t, s, wnorm2 = 0, 1.0, 0.0
    history = []
    for _ in range(hp.epochs):
        order = rng.permutation(n).astype(np.int64)
        t, s, wnorm2 = _kernel.run_epoch(
            v, aug.indices, aug.values, aug.indptr, ys, xnorm2, order, t, lam, s, wnorm2
        )
        w_aug = v * s
        history.append(_objective_csr(w_aug[:-1], float(w_aug[-1]), csr, ys, lam))
    w_aug = v * s
    return w_aug[:-1], float(w_aug[-1]), tuple(history)


def train_linear_svm(
    xs: Sequence[FeatureVector],
    ys: Sequence[int],
    hp: SvmHyperparams | None = None,
    label: Optional[NfrLabel] = None,
) -> LinearModel:
    """Train one binary soft-margin linear classifier.

    ``ys`` entries must be +1 or -1. If they are all equal the returned
    model is a constant classifier for that class.
    """
    hp = hp or SvmHyperparams()
    xs = list(xs)
    if not xs:
        raise EmptyTrainingSet("no training instances")
    if len(xs) != len(ys):
        raise ValueError(f"{len(xs)} feature vectors but {len(ys)} targets")
    ys_arr = np.asarray(ys, dtype=np.float64)
    if not np.all(np.isin(ys_arr, (-1.0, 1.0))):
        raise ValueError("targets must be +1 or -1")
    csr = _to_csr(xs)
    return _train_validated(csr, ys_arr, hp, label)


def _train_validated(
    csr: _Csr, ys_arr: np.ndarray, hp: SvmHyperparams, label: Optional[NfrLabel]
) -> LinearModel:
    if np.all(ys_arr == ys_arr[0]):
        return LinearModel(
            weights=np.zeros(csr.dim, dtype=np.float64),
            bias=0.0,
            label=label,
            constant_class=int(ys_arr[0]),
            hyperparams=hp,
        )
    weights, bias, history = _train_csr(csr, ys_arr, hp)
    return LinearModel(
        weights=weights,
        bias=bias,
        label=label,
        constant_class=None,
        hyperparams=hp,
        objective_history=history,
    )


def train_binary_relevance(
    xs: Sequence[FeatureVector], gold: Sequence[LabelSet], hp: SvmHyperparams | None = None
) -> BrModel:
    """Decompose into one binary problem per label and train them all.

    Instance i is a positive for label l iff l is in gold[i]. Each label's
    training is independent and seeded identically from ``hp.seed``, so
    retraining any single label reproduces its model bit-for-bit.
    """
    hp = hp or SvmHyperparams()
    xs = list(xs)
    if not xs:
        raise EmptyTrainingSet("no training instances")
    if len(xs) != len(gold):
        raise ValueError(f"{len(xs)} feature vectors but {len(gold)} label sets")
    csr = _to_csr(xs)
    models = {}
    for lbl in NfrLabel:
        ys_arr = np.array(
            [1.0 if lbl in g else -1.0 for g in gold], dtype=np.float64
        )
        models[lbl] = _train_validated(csr, ys_arr, hp, lbl)
    return BrModel(models=models)


# -- prediction ----------------------------------------------------------------


def decision(model: LinearModel, x: FeatureVector) -> float:
    """Signed distance surrogate w . x + b (saturated for constant models)."""
    if x.dim != model.dim:
        raise DimensionMismatch(model.dim, x.dim)
    if model.constant_class is not None:
        return CONSTANT_SENTINEL if model.constant_class > 0 else -CONSTANT_SENTINEL
    if x.kind == "sparse":
        dot = float(np.dot(model.weights[x.indices], x.values)) if x.indices.size else 0.0
    else:
        dot = float(np.dot(model.weights, x.values))
    return dot + model.bias


def predict_binary(model: LinearModel, x: FeatureVector) -> int:
    """+1 iff the decision value is >= 0 (ties go positive)."""
    return 1 if decision(model, x) >= 0.0 else -1


def predict_labels(br: BrModel, x: FeatureVector) -> tuple:
    """Union of per-label positive predictions, plus all decision scores.

    Returns ``(labels, scores)`` where ``labels`` may be empty and
    ``scores`` maps every taxonomy label to its decision value.
    """
    scores = {lbl: decision(m, x) for lbl, m in br.models.items()}
    labels = frozenset(lbl for lbl, sc in scores.items() if sc >= 0.0)
    return labels, scores


def predict_labels_batch(br: BrModel, xs: Sequence[FeatureVector]) -> list:
    """Vectorized :func:`predict_labels` over many instances."""
    if not xs:
        return []
    csr = _to_csr(list(xs))
    if csr.dim != br.dim:
        raise DimensionMismatch(br.dim, csr.dim)
    score_matrix = np.empty((csr.n, len(NfrLabel)), dtype=np.float64)
    for col, lbl in enumerate(NfrLabel):
        m = br.models[lbl]
        if m.constant_class is not None:
            score_matrix[:, col] = (
                CONSTANT_SENTINEL if m.constant_class > 0 else -CONSTANT_SENTINEL
            )
        else:
            score_matrix[:, col] = _csr_matvec(csr, m.weights) + m.bias
    out = []
    for row in range(csr.n):
        scores = {lbl: float(score_matrix[row, col]) for col, lbl in enumerate(NfrLabel)}
        labels = frozenset(lbl for lbl, sc in scores.items() if sc >= 0.0)
        out.append((labels, scores))
    return out
