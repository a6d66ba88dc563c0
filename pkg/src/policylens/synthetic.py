"""Deterministic synthetic keyword corpora for demos, tests and benchmarks.

Each taxonomy label owns a disjoint 20-word vocabulary; every generated
statement draws its words from its gold label's vocabulary, except that a
``bleed`` fraction of word slots is filled from the other labels'
vocabularies instead. ``bleed=0`` gives a near-separable corpus, larger
values make the labels progressively harder to tell apart.

Run as a module to write a corpus file:

    python -m policylens.synthetic --out corpus.jsonl --seed 42 --bleed 0.0
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from .corpus import Corpus, NfrLabel, PolicyDocument, Statement, save_corpus

_SUFFIXES = (
    "ax", "bex", "cor", "dun", "el", "fim", "gor", "hax", "ir", "jut",
    "kel", "lom", "mer", "nox", "op", "pir", "qua", "rez", "sul", "tor",
)


def label_vocabulary(label: NfrLabel) -> list:
    """The 20 keywords owned by ``label``; disjoint across labels."""
    prefix = label.value.lower()
    return [prefix + suffix for suffix in _SUFFIXES]


def synthetic_corpus(
    statements_per_label: int = 40,
    words_per_statement: int = 8,
    bleed: float = 0.0,
    seed: int = 42,
) -> Corpus:
    """One document per label, ``statements_per_label`` statements each."""
    if not 0.0 <= bleed <= 1.0:
        raise ValueError("bleed must be in [0, 1]")
    rng = np.random.default_rng(seed)
    vocab = {lbl: label_vocabulary(lbl) for lbl in NfrLabel}
    documents = []
    for lbl in NfrLabel:
        own = vocab[lbl]
        foreign = [w for other in NfrLabel if other is not lbl for w in vocab[other]]
        texts = []
        for _ in range(statements_per_label):
            words = []
            for _slot in range(words_per_statement):
                if bleed > 0.0 and rng.random() < bleed:
                    words.append(foreign[int(rng.integers(len(foreign)))])
                else:
                    words.append(own[int(rng.integers(len(own)))])
            words[0] = words[0].capitalize()
            texts.append(" ".join(words) + ".")
        raw_text = " ".join(texts)
        statements = []
        cursor = 0
        for i, text in enumerate(texts):
            start = raw_text.index(text, cursor)
            end = start + len(text)
            cursor = end
            statements.append(
                Statement(
                    id=f"{lbl.value.lower()}-{i:03d}",
                    doc_id=f"doc-{lbl.value.lower()}",
                    text=text,
                    start=start,
                    end=end,
                    gold=frozenset([lbl]),
                )
            )
        documents.append(
            PolicyDocument(
                id=f"doc-{lbl.value.lower()}",
                app_name=f"Synthetic {lbl.value}",
                domain_category="synthetic",
                source_url="",
                raw_text=raw_text,
                statements=tuple(statements),
            )
        )
    return Corpus(documents=tuple(documents))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output corpus JSONL path")
    parser.add_argument("--statements-per-label", type=int, default=40)
    parser.add_argument("--words-per-statement", type=int, default=8)
    parser.add_argument("--bleed", type=float, default=0.0)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)
    corpus = synthetic_corpus(
        statements_per_label=args.statements_per_label,
        words_per_statement=args.words_per_statement,
        bleed=args.bleed,
        seed=args.seed,
    )
    save_corpus(corpus, Path(args.out))
    n = sum(len(d.statements) for d in corpus.documents)
    print(f"wrote {len(corpus.documents)} documents, {n} statements to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
