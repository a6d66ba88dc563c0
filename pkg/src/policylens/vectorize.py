"""Feature vectors: TF-IDF over a fitted vocabulary, or averaged pretrained
word embeddings.

Vectorizers and embedding tables are immutable after fit/load; transforms
are pure functions and freely parallel.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import log, sqrt
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyFile,
    EmptyTrainingSet,
    InconsistentDimension,
    MalformedFloat,
    ZeroVector,
)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Sparse or dense feature vector.

    Sparse vectors hold strictly increasing indices with no explicit zeros;
    dense vectors store ``dim`` ordered reals.
    """

    kind: str  # "sparse" | "dense"
    dim: int
    values: np.ndarray  # float64
    indices: np.ndarray | None = None  # int64, sparse only

    @staticmethod
    def sparse(dim: int, indices, values) -> "FeatureVector":
        idx = np.asarray(indices, dtype=np.int64)
        val = np.asarray(values, dtype=np.float64)
        if idx.shape != val.shape:
            raise ValueError("indices and values must have equal length")
        if idx.size and (idx.min() < 0 or idx.max() >= dim):
            raise ValueError(f"sparse index out of range for dim {dim}")
        keep = val != 0.0
        idx, val = idx[keep], val[keep]
        order = np.argsort(idx, kind="stable")
        return FeatureVector(kind="sparse", dim=dim, values=val[order], indices=idx[order])

    @staticmethod
    def dense(values) -> "FeatureVector":
        val = np.asarray(values, dtype=np.float64)
        return FeatureVector(kind="dense", dim=int(val.shape[0]), values=val)

    def to_dense(self) -> np.ndarray:
        if self.kind == "dense":
            return self.values
        out = np.zeros(self.dim, dtype=np.float64)
        out[self.indices] = self.values
        return out

    def to_dict(self) -> dict[int, float]:
        if self.kind == "dense":
            return {i: float(v) for i, v in enumerate(self.values) if v != 0.0}
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}


# -- TF-IDF --------------------------------------------------------------------

@dataclass(frozen=True)
class TfidfVectorizer:
    """Vocabulary plus smoothed inverse document frequencies.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 over N training sequences, which
    stays positive even for terms present in every sequence.
    """

    vocabulary: dict  # term -> index, indices 0..|V|-1 without gaps
    idf: np.ndarray  # float64, aligned with vocabulary indices
    n_train_docs: int

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


def fit_tfidf(train: list) -> TfidfVectorizer:
    """Fit vocabulary and idf weights on training token sequences."""
    if not train:
        raise EmptyTrainingSet("cannot fit TF-IDF on zero sequences")
    df: Counter = Counter()
    for tokens in train:
        df.update(set(tokens))
    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    n = len(train)
    idf = np.empty(len(vocabulary), dtype=np.float64)
    for term, i in vocabulary.items():
        idf[i] = log((1.0 + n) / (1.0 + df[term])) + 1.0
    return TfidfVectorizer(vocabulary=vocabulary, idf=idf, n_train_docs=n)


def transform_tfidf(vectorizer: TfidfVectorizer, tokens: list) -> FeatureVector:
    """Raw term counts times idf, L2-normalized.

    Out-of-vocabulary tokens are ignored; an input with no in-vocabulary
    tokens maps to the zero vector.
    """
    counts = Counter(t for t in tokens if t in vectorizer.vocabulary)
    if not counts:
        return FeatureVector.sparse(vectorizer.dim, [], [])
    indices = np.array(
        sorted(vectorizer.vocabulary[t] for t in counts), dtype=np.int64
    )
    values = np.empty(indices.shape[0], dtype=np.float64)
    index_to_count = {vectorizer.vocabulary[t]: c for t, c in counts.items()}
    for k, i in enumerate(indices):
        values[k] = index_to_count[int(i)] * vectorizer.idf[i]
    norm = sqrt(float(np.dot(values, values)))
    values /= norm
    return FeatureVector(kind="sparse", dim=vectorizer.dim, values=values, indices=indices)


def tfidf_to_json(vectorizer: TfidfVectorizer) -> str:
    return json.dumps(
        {
            "vocabulary": vectorizer.vocabulary,
            "idf": [float(x) for x in vectorizer.idf],
            "n_train_docs": vectorizer.n_train_docs,
        },
        sort_keys=True,
    )


def tfidf_from_json(text: str) -> TfidfVectorizer:
    payload = json.loads(text)
    return TfidfVectorizer(
        vocabulary=payload["vocabulary"],
        idf=np.asarray(payload["idf"], dtype=np.float64),
        n_train_docs=payload["n_train_docs"],
    )


# -- pretrained embeddings ------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict  # word -> np.ndarray(float64, dim)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a whitespace-delimited ``word v1 ... vD`` embedding file.

    The dimension is inferred from the first line; later duplicates of a
    word overwrite earlier ones.
    """
    return parse_embeddings(Path(path).read_text(encoding="utf-8"))


def parse_embeddings(text: str) -> EmbeddingTable:
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        word, raw_values = parts[0], parts[1:]
        if dim is None:
            dim = len(raw_values)
            if dim == 0:
                raise InconsistentDimension(line_no, 1, 0)
        elif len(raw_values) != dim:
            raise InconsistentDimension(line_no, dim, len(raw_values))
        try:
            vectors[word] = np.array([float(v) for v in raw_values], dtype=np.float64)
        except ValueError:
            bad = next(v for v in raw_values if not _is_float(v))
            raise MalformedFloat(line_no, bad) from None
    if dim is None:
        raise EmptyFile("embedding file has no content")
    return EmbeddingTable(dim=dim, vectors=vectors)


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def serialize_embeddings(table: EmbeddingTable) -> str:
    """Inverse of :func:`parse_embeddings`; float values round-trip bit-equal."""
    lines = [
        word + " " + " ".join(repr(float(x)) for x in vec)
        for word, vec in table.vectors.items()
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def embed_average(table: EmbeddingTable, tokens: list) -> FeatureVector:
    """Unweighted mean of the in-vocabulary token vectors.

    Duplicates count per occurrence and out-of-vocabulary tokens are
    skipped; no in-vocabulary tokens yields the zero vector. Tokens are
    accumulated in sorted order so the result is exactly
    permutation-invariant.
    """
    known = sorted(t for t in tokens if t in table.vectors)
    if not known:
        return FeatureVector.dense(np.zeros(table.dim, dtype=np.float64))
    acc = np.zeros(table.dim, dtype=np.float64)
    for t in known:
        acc += table.vectors[t]
    return FeatureVector.dense(acc / len(known))


def cosine_similarity(x, y) -> float:
    """Cosine of the angle between two non-zero dense vectors."""
    xv = x.values if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)
    yv = y.values if isinstance(y, FeatureVector) else np.asarray(y, dtype=np.float64)
    if xv.shape[0] != yv.shape[0]:
        raise DimensionMismatch(xv.shape[0], yv.shape[0])
    nx = sqrt(float(np.dot(xv, xv)))
    ny = sqrt(float(np.dot(yv, yv)))
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("cosine similarity of a zero vector")
    return float(np.dot(xv, yv)) / (nx * ny)
