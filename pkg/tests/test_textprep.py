"""Tokenization, the preprocessing pipeline and the rule lemmatizer."""

from __future__ import annotations

import hashlib
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from policylens.textprep import (
    lemmatize,
    load_stop_words,
    preprocess,
    tokenize,
)

STOPWORDS_SHA256 = "49594205781e35d98815fc2de5858c4c07ca3850fc27287798d0fb360f4039f1"


class TestStopWords:
    def test_bundled_list_is_frozen(self):
        data = (
            resources.files("policylens").joinpath("data/stopwords.txt").read_bytes()
        )
        assert hashlib.sha256(data).hexdigest() == STOPWORDS_SHA256

    def test_size_and_contents(self, stops):
        assert 150 <= len(stops) <= 220
        for word in ("the", "in", "will", "we"):
            assert word in stops
        for word in ("collect", "visit", "data", "location"):
            assert word not in stops

    def test_custom_file(self, tmp_path):
        path = tmp_path / "stops.txt"
        path.write_text("alpha\nbeta\n", encoding="utf-8")
        custom = load_stop_words(path)
        assert "alpha" in custom and len(custom) == 2


class TestTokenize:
    def test_url_like_text_splits_at_boundaries(self):
        assert tokenize("Visit https://x.io now") == ["Visit", "https", "x", "io", "now"]

    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_is_boundary(self):
        assert tokenize("GPS-based") == ["GPS", "based"]


class TestPreprocess:
    def test_digit_tokens_and_stops_removed(self, stops):
        assert preprocess("We collect DATA123 securely", stops) == [
            "collect",
            "securely",
        ]

    def test_url_stripped_before_tokenizing(self, stops):
        assert preprocess("Visit https://x.io", stops) == ["visit"]
        assert preprocess("See www.example.com today", stops) == ["see", "today"]

    def test_empty(self, stops):
        assert preprocess("", stops) == []

    def test_non_ascii_tokens_removed(self, stops):
        assert preprocess("Café collects data", stops) == ["collect", "data"]

    @settings(max_examples=300)
    @given(st.text(max_size=200))
    def test_output_invariants(self, text):
        stops = load_stop_words()
        for token in preprocess(text, stops):
            assert token
            assert token == token.lower()
            assert token.isascii() and token.isalpha()
            assert token not in stops

    @given(st.text(max_size=200))
    def test_deterministic(self, text):
        stops = load_stop_words()
        assert preprocess(text, stops) == preprocess(text, stops)


LEMMA_CASES = [
    ("services", "service"),
    ("data", "data"),
    ("collected", "collect"),
    ("policies", "policy"),
    ("applied", "apply"),
    ("boxes", "box"),
    ("churches", "church"),
    ("running", "run"),
    ("billing", "bill"),
    ("passing", "pass"),
    ("stopped", "stop"),
    ("shared", "share"),
    ("using", "use"),
    ("children", "child"),
    ("settings", "set"),
    ("address", "address"),
    ("status", "status"),
    ("analysis", "analysis"),
    ("thing", "thing"),
    ("securely", "securely"),
]


class TestLemmatize:
    @pytest.mark.parametrize("token,expected", LEMMA_CASES)
    def test_cases(self, token, expected):
        assert lemmatize(token) == expected

    def test_idempotent_over_fixture_vocabulary(self):
        vocabulary = _fixture_vocabulary()
        assert len(vocabulary) >= 1000
        for word in vocabulary:
            once = lemmatize(word)
            assert lemmatize(once) == once, word


def _fixture_vocabulary() -> list:
    """1000+ lowercase alphabetic words: bases, inflections, pseudo-words."""
    bases = [
        "collect", "share", "store", "process", "protect", "delete", "access",
        "use", "track", "verify", "encrypt", "manage", "provide", "improve",
        "serve", "request", "record", "report", "update", "transfer", "retain",
        "disclose", "combine", "analyze", "review", "monitor", "notify",
        "locate", "identify", "operate", "support", "restrict", "limit",
        "enable", "disable", "contact", "market", "advertise", "measure",
        "secure", "deliver", "customize", "personalize", "aggregate", "log",
        "map", "plan", "stop", "ship", "bill", "pass", "buzz", "refer",
    ]
    words = set(bases)
    for base in bases:
        words.add(base + "s")
        words.add(base + "es")
        words.add(base + "ed")
        words.add(base + "ing")
    # pseudo-words exercise the rules away from real English
    consonants = "bcdfgklmnprstvz"
    for a in consonants:
        for b in "aeiou":
            for c in consonants[:5]:
                stem = f"{a}{b}{c}or"
                words.add(stem)
                words.add(stem + "s")
                words.add(stem + "ing")
    return sorted(words)[:1400]
