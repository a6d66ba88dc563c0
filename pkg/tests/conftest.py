"""Shared fixtures: tiny corpora, separable point clouds, trained models."""

from __future__ import annotations

import json

import numpy as np
import pytest

from policylens.corpus import Corpus, loads_corpus
from policylens.learner import SvmHyperparams, train_binary_relevance
from policylens.synthetic import synthetic_corpus
from policylens.textprep import load_stop_words, preprocess
from policylens.vectorize import FeatureVector, fit_tfidf, transform_tfidf


@pytest.fixture(scope="session")
def stops():
    return load_stop_words()


def make_doc_record(doc_id: str, texts, golds) -> dict:
    """Build a JSONL document record from statement texts and gold lists."""
    raw = " ".join(texts)
    statements = []
    cursor = 0
    for i, (text, gold) in enumerate(zip(texts, golds)):
        start = raw.index(text, cursor)
        end = start + len(text)
        cursor = end
        statements.append(
            {"id": f"{doc_id}-s{i}", "start": start, "end": end, "gold": gold}
        )
    return {
        "id": doc_id,
        "app_name": doc_id,
        "domain_category": "delivery",
        "source_url": "https://example.test/policy",
        "raw_text": raw,
        "statements": statements,
    }


def corpus_from_records(records) -> Corpus:
    return loads_corpus("\n".join(json.dumps(r) for r in records))


@pytest.fixture
def tiny_corpus() -> Corpus:
    record = make_doc_record(
        "doc-1",
        ["We encrypt your payment data.", "We personalize your feed."],
        [["Security"], ["Customizability", "Usability"]],
    )
    return corpus_from_records([record])


def make_blobs(n: int = 100, seed: int = 7, gap: float = 0.25):
    """Two 2-D clouds separated by at least 2*gap along a diagonal axis."""
    rng = np.random.default_rng(seed)
    axis = np.array([1.0, 1.0]) / np.sqrt(2.0)
    tangent = np.array([1.0, -1.0]) / np.sqrt(2.0)
    center = np.array([1.5, 0.5])
    xs, ys = [], []
    for sign, m in ((+1, n // 2), (-1, n - n // 2)):
        dist = gap + np.abs(rng.normal(0.0, 0.6, size=m))
        tang = rng.normal(0.0, 1.0, size=m)
        points = center + sign * dist[:, None] * axis + tang[:, None] * tangent
        xs.extend(FeatureVector.dense(p) for p in points)
        ys.extend([sign] * m)
    return xs, ys


@pytest.fixture(scope="session")
def small_trained():
    """A trained TF-IDF + BR pair over an 88-statement keyword corpus."""
    corpus = synthetic_corpus(statements_per_label=8, seed=5)
    stop_list = load_stop_words()
    statements = corpus.statements()
    tokens = [preprocess(s.text, stop_list) for s in statements]
    vectorizer = fit_tfidf(tokens)
    xs = [transform_tfidf(vectorizer, t) for t in tokens]
    br = train_binary_relevance(
        xs, [s.gold for s in statements], SvmHyperparams(epochs=60)
    )
    return corpus, vectorizer, br
