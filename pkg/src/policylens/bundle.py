"""Persistence for a trained Binary Relevance model plus its vectorizer.

One self-contained JSON file holds the eleven per-label linear models
(label, weights, bias, constant_class, hyperparams, vectorizer_hash each)
together with the vectorizer they were trained against. Serialization is
canonical, so retraining with the same seed writes byte-identical bundles.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import NfrLabel, parse_label
from .learner import BrModel, LinearModel, SvmHyperparams
from .vectorize import (
    parse_embeddings,
    serialize_embeddings,
    tfidf_from_json,
    tfidf_to_json,
)

_FORMAT = "policylens-bundle-v1"


@dataclass(frozen=True)
class ModelBundle:
    kind: str  # "tfidf" | "embedding"
    vectorizer: object  # TfidfVectorizer | EmbeddingTable
    br_model: BrModel
    hyperparams: SvmHyperparams
    model_descriptor: str
    vectorizer_hash: str


def _hash_vectorizer(kind: str, vectorizer) -> str:
    if kind == "tfidf":
        payload = tfidf_to_json(vectorizer)
    else:
        payload = serialize_embeddings(vectorizer)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_bundle(
    kind: str,
    vectorizer,
    br_model: BrModel,
    hyperparams: SvmHyperparams,
    model_descriptor: str = "",
) -> ModelBundle:
    if kind not in ("tfidf", "embedding"):
        raise ValueError(f"unknown vectorizer kind: {kind!r}")
    return ModelBundle(
        kind=kind,
        vectorizer=vectorizer,
        br_model=br_model,
        hyperparams=hyperparams,
        model_descriptor=model_descriptor,
        vectorizer_hash=_hash_vectorizer(kind, vectorizer),
    )


def _hp_dict(hp: SvmHyperparams) -> dict:
    return {"c": hp.c, "epochs": hp.epochs, "seed": hp.seed}


def dumps_bundle(bundle: ModelBundle) -> str:
    models = {}
    for lbl in NfrLabel:
        m = bundle.br_model.models[lbl]
        models[lbl.value] = {
            "label": lbl.value,
            "weights": [float(x) for x in m.weights],
            "bias": m.bias,
            "constant_class": m.constant_class,
            "hyperparams": _hp_dict(m.hyperparams),
            "vectorizer_hash": bundle.vectorizer_hash,
        }
    payload = {
        "format": _FORMAT,
        "kind": bundle.kind,
        "model_descriptor": bundle.model_descriptor,
        "hyperparams": _hp_dict(bundle.hyperparams),
        "vectorizer_hash": bundle.vectorizer_hash,
        "vectorizer": (
            json.loads(tfidf_to_json(bundle.vectorizer))
            if bundle.kind == "tfidf"
            else serialize_embeddings(bundle.vectorizer)
        ),
        "models": models,
    }
    return json.dumps(payload, sort_keys=True)


def save_bundle(bundle: ModelBundle, path: str | Path) -> None:
    Path(path).write_text(dumps_bundle(bundle), encoding="utf-8")


def loads_bundle(text: str) -> ModelBundle:
    payload = json.loads(text)
    if payload.get("format") != _FORMAT:
        raise ValueError("not a policylens model bundle")
    kind = payload["kind"]
    if kind == "tfidf":
        vectorizer = tfidf_from_json(json.dumps(payload["vectorizer"]))
    elif kind == "embedding":
        vectorizer = parse_embeddings(payload["vectorizer"])
    else:
        raise ValueError(f"unknown vectorizer kind: {kind!r}")
    hp = SvmHyperparams(**payload["hyperparams"])
    models = {}
    for name, rec in payload["models"].items():
        lbl = parse_label(name)
        models[lbl] = LinearModel(
            weights=np.asarray(rec["weights"], dtype=np.float64),
            bias=float(rec["bias"]),
            label=lbl,
            constant_class=rec["constant_class"],
            hyperparams=SvmHyperparams(**rec["hyperparams"]),
        )
    return ModelBundle(
        kind=kind,
        vectorizer=vectorizer,
        br_model=BrModel(models=models),
        hyperparams=hp,
        model_descriptor=payload.get("model_descriptor", ""),
        vectorizer_hash=payload["vectorizer_hash"],
    )


def load_bundle(path: str | Path) -> ModelBundle:
    return loads_bundle(Path(path).read_text(encoding="utf-8"))
