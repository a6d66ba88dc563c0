#!/usr/bin/env python3
"""Benchmark the compiled training kernel against the pure-Python fallback.

Times full Binary Relevance training on a synthetic keyword corpus through
both backends and checks that they produce bit-identical models.

    python benchmarks/bench_kernels.py --statements-per-label 40 --epochs 100
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def _train_all(kernel_module, xs, gold, hp):
    """Run BR training with ``learner`` temporarily pinned to one kernel."""
    from policylens import learner

    previous = learner._kernel
    learner._kernel = kernel_module
    try:
        start = time.perf_counter()
        br = learner.train_binary_relevance(xs, gold, hp)
        elapsed = time.perf_counter() - start
    finally:
        learner._kernel = previous
    return br, elapsed


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--statements-per-label", type=int, default=40)
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    from policylens.learner import SvmHyperparams
    from policylens.synthetic import synthetic_corpus
    from policylens.textprep import load_stop_words, preprocess
    from policylens.vectorize import fit_tfidf, transform_tfidf

    corpus = synthetic_corpus(
        statements_per_label=args.statements_per_label, seed=args.seed
    )
    stops = load_stop_words()
    statements = corpus.statements()
    tokens = [preprocess(s.text, stops) for s in statements]
    vectorizer = fit_tfidf(tokens)
    xs = [transform_tfidf(vectorizer, t) for t in tokens]
    gold = [s.gold for s in statements]
    hp = SvmHyperparams(epochs=args.epochs, seed=args.seed)
    n_updates = len(xs) * args.epochs * 11
    print(
        f"problem: {len(xs)} statements, dim={vectorizer.dim}, "
        f"{args.epochs} epochs x 11 labels = {n_updates:,} kernel steps"
    )

    py_kernel = importlib.import_module("policylens._pegasos_py")
    br_py, t_py = _train_all(py_kernel, xs, gold, hp)
    print(f"python   kernel: {t_py:8.3f}s  ({n_updates / t_py / 1e6:6.2f} M steps/s)")

    try:
        cy_kernel = importlib.import_module("policylens._pegasos_cy")
    except ImportError:
        print("compiled kernel: not built (pip install -e . compiles it)")
        return 0
    br_cy, t_cy = _train_all(cy_kernel, xs, gold, hp)
    print(f"compiled kernel: {t_cy:8.3f}s  ({n_updates / t_cy / 1e6:6.2f} M steps/s)")
    print(f"speedup: {t_py / t_cy:.1f}x")

    from policylens.corpus import NfrLabel

    for lbl in NfrLabel:
        a, b = br_py.models[lbl], br_cy.models[lbl]
        assert np.array_equal(a.weights, b.weights) and a.bias == b.bias, lbl
    print("bit-identical models: yes")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
