#!/usr/bin/env python3
"""Regenerate the viewer test fixtures from the policylens package.

Produces an annotated HTML page and its annotation JSON exactly as the
`policylens annotate` pipeline emits them, using a deterministic keyword
model, so viewer tests exercise the real page contract. Run from this
directory (requires policylens installed):

    python scripts/generate_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from policylens.annotator import annotate_document, render_html, render_json
from policylens.corpus import NfrLabel, segment_document
from policylens.learner import BrModel, LinearModel
from policylens.textprep import load_stop_words
from policylens.vectorize import fit_tfidf

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"

POLICY = (
    "We encrypt payment information in transit. "
    "We simplify forms and encrypt stored records. "
    "We bake fresh bread every morning. "
    "We tune the cache to answer requests faster."
)


def keyword_model(vectorizer, keyed: dict) -> BrModel:
    dim = vectorizer.dim
    models = {
        lbl: LinearModel(np.zeros(dim), 0.0, label=lbl, constant_class=-1)
        for lbl in NfrLabel
    }
    for lbl, (word, weight) in keyed.items():
        w = np.zeros(dim)
        w[vectorizer.vocabulary[word]] = weight
        models[lbl] = LinearModel(w, -0.05, label=lbl)
    return BrModel(models=models)


def main() -> None:
    stops = load_stop_words()
    vectorizer = fit_tfidf(
        [
            ["encrypt", "payment", "transit"],
            ["simplify", "form", "record"],
            ["bake", "bread", "morning"],
            ["tune", "cache", "request", "faster"],
        ]
    )
    br = keyword_model(
        vectorizer,
        {
            NfrLabel.SECURITY: ("encrypt", 1.0),
            NfrLabel.USABILITY: ("simplify", 10.0),
            NfrLabel.PERFORMANCE: ("cache", 2.0),
        },
    )
    doc = segment_document("fixture-policy", POLICY)
    ad = annotate_document(
        doc, br, vectorizer, stops, model_descriptor="fixture keyword model"
    )
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "fixture-policy.html").write_text(render_html(ad), encoding="utf-8")
    (OUT / "fixture-policy.annotations.json").write_text(
        render_json(ad) + "\n", encoding="utf-8"
    )
    predicted = sum(1 for a in ad.annotated if a.predicted)
    print(f"wrote fixtures to {OUT} ({len(ad.annotated)} statements, {predicted} annotated)")


if __name__ == "__main__":
    main()
