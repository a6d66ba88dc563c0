"""Statement text preprocessing: lowercase, tokenize, filter, de-stopword,
lemmatize.

The pipeline in :func:`preprocess` runs in a fixed order:

1. strip URL substrings,
2. lowercase,
3. tokenize on non-alphanumeric boundaries,
4. drop tokens containing digits or non-ASCII characters,
5. drop stop words,
6. lemmatize (a final stop-word filter keeps lemmas out of the stop list
   too, so the output invariant holds for inputs like "cans" -> "can").

The lemmatizer is rule-based and applies its rule table to a fixed point,
which makes it idempotent:

=========================  =======================================
suffix                     rewrite
=========================  =======================================
exception word             mapped form (irregulars, e-restoration)
-ies  (len >= 5)           -y        policies -> policy
-ied  (len >= 5)           -y        applied  -> apply
-es   after ss/x/z/ch/sh   drop -es  boxes    -> box
-s    (len >= 4,           drop -s   services -> service
       not -ss/-us/-is)
-ing  (len >= 5)           drop, undouble final consonant
-ed   (len >= 5)           drop, undouble final consonant
=========================  =======================================

Stripping -ing/-ed is skipped when the stem would lose its last vowel, and
doubled l/s/z are never undoubled (billing -> bill, passing -> pass).
All functions here are pure and safe for unrestricted parallel use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

TokenSequence = list  # list[str]; lowercase ASCII-alphabetic, stop-free

_URL_RE = re.compile(r"https?://\S+|www\.\S+")
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_ASCII_ALPHA_RE = re.compile(r"[a-z]+\Z")
_VOWELS = set("aeiouy")

#: irregular forms and words the suffix rules would mangle
_LEMMA_EXCEPTIONS = {
    "data": "data",
    "media": "media",
    "children": "child",
    "men": "man",
    "women": "woman",
    "people": "people",
    "mice": "mouse",
    "feet": "foot",
    "teeth": "tooth",
    "geese": "goose",
    "criteria": "criterion",
    "analyses": "analysis",
    "buses": "bus",
    "statuses": "status",
    "agreed": "agree",
    "based": "base",
    "made": "make",
    "given": "give",
    "taken": "take",
    "written": "write",
    "held": "hold",
    "kept": "keep",
    "sent": "send",
    "built": "build",
    "sold": "sell",
    "bought": "buy",
    "found": "find",
    "left": "leave",
    "shared": "share",
    "sharing": "share",
    "used": "use",
    "using": "use",
    "stored": "store",
    "storing": "store",
    "provided": "provide",
    "providing": "provide",
    "received": "receive",
    "receiving": "receive",
    "required": "require",
    "requiring": "require",
    "improved": "improve",
    "improving": "improve",
    "enabled": "enable",
    "enabling": "enable",
    "managed": "manage",
    "managing": "manage",
    "ensured": "ensure",
    "ensuring": "ensure",
    "served": "serve",
    "serving": "serve",
    "combined": "combine",
    "combining": "combine",
    "described": "describe",
    "describing": "describe",
    "deleted": "delete",
    "deleting": "delete",
    "updated": "update",
    "updating": "update",
    "created": "create",
    "creating": "create",
    "saved": "save",
    "saving": "save",
}


@dataclass(frozen=True)
class StopWordList:
    words: frozenset

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


def load_stop_words(path: str | Path | None = None) -> StopWordList:
    """Load the bundled stop-word list, or a custom one-word-per-line file."""
    if path is None:
        text = (
            resources.files("policylens").joinpath("data/stopwords.txt").read_text("utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = frozenset(w for w in (line.strip() for line in text.splitlines()) if w)
    if not words:
        raise ValueError("stop-word list is empty")
    return StopWordList(words=words)


def tokenize(text: str) -> list[str]:
    """Split on any non-alphanumeric boundary, preserving case."""
    return _TOKEN_RE.findall(text)


def _strip_verbal_suffix(token: str, suffix: str) -> str:
    stem = token[: -len(suffix)]
    if not _VOWELS & set(stem):
        return token
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in "lsz"
    ):
        stem = stem[:-1]
    return stem


def _apply_rules(token: str) -> str:
    if token in _LEMMA_EXCEPTIONS:
        return _LEMMA_EXCEPTIONS[token]
    if len(token) >= 5 and token.endswith("ies"):
        return token[:-3] + "y"
    if len(token) >= 5 and token.endswith("ied"):
        return token[:-3] + "y"
    if len(token) >= 4 and token.endswith("es") and token[:-2].endswith(
        ("ss", "x", "z", "ch", "sh")
    ):
        return token[:-2]
    if (
        len(token) >= 4
        and token.endswith("s")
        and not token.endswith(("ss", "us", "is"))
    ):
        return token[:-1]
    if len(token) >= 5 and token.endswith("ing"):
        return _strip_verbal_suffix(token, "ing")
    if len(token) >= 5 and token.endswith("ed"):
        return _strip_verbal_suffix(token, "ed")
    return token


def lemmatize(token: str) -> str:
    """Reduce a lowercase alphabetic token to a dictionary-plausible lemma."""
    current = token
    while True:
        if current in _LEMMA_EXCEPTIONS:
            return _LEMMA_EXCEPTIONS[current]
        rewritten = _apply_rules(current)
        if rewritten == current:
            return current
        current = rewritten


def preprocess(text: str, stops: StopWordList) -> TokenSequence:
    """Run the full six-step pipeline; see the module docstring for order."""
    without_urls = _URL_RE.sub(" ", text)
    lowered = without_urls.lower()
    tokens = tokenize(lowered)
    kept = [t for t in tokens if _ASCII_ALPHA_RE.match(t)]
    unstopped = [t for t in kept if t not in stops]
    lemmas = [lemmatize(t) for t in unstopped]
    return [t for t in lemmas if t not in stops]
