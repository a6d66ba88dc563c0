"""Policy corpora: the label taxonomy, documents, statements, loading and stats.

A corpus is a JSONL file, one policy document per line:

    {"id": ..., "app_name": ..., "domain_category": ..., "source_url": ...,
     "raw_text": ...,
     "statements": [{"id": ..., "start": ..., "end": ..., "gold": [...] | null}]}

Statement text is always the ``raw_text`` slice at ``[start, end)``; gold
labels are optional so the same format carries unlabeled annotation targets.
Corpus objects are immutable after load and safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from .errors import (
    DuplicateId,
    MalformedRecord,
    NoSentences,
    NoWords,
    SpanOutOfBounds,
    UnknownLabel,
)


class NfrLabel(Enum):
    """The closed 11-category quality-attribute taxonomy.

    Declaration order is the canonical tie-break order used throughout
    (reports, primary-label selection, palettes).
    """

    USABILITY = "Usability"
    PERFORMANCE = "Performance"
    SECURITY = "Security"
    LEGAL = "Legal"
    SAFETY = "Safety"
    CUSTOMIZABILITY = "Customizability"
    ACCURACY = "Accuracy"
    MAINTAINABILITY = "Maintainability"
    TRUST = "Trust"
    ACCESSIBILITY = "Accessibility"
    OTHER = "Other"

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]

    def __str__(self) -> str:  # serialize by exact id string
        return self.value


_DESCRIPTIONS: dict[NfrLabel, str] = {
    NfrLabel.USABILITY: (
        "Any requirement that specify the end-user-interactions with the "
        "system and the effort required to learn, operate, prepare input, "
        "and interpret any system outputs"
    ),
    NfrLabel.PERFORMANCE: (
        "Any requirement that specifies the capability of a software product "
        "to provide appropriate performance relative to the number of "
        "resources needed to perform effectively under stated conditions"
    ),
    NfrLabel.SECURITY: (
        "Any requirement which prevents unauthorized access to the system, "
        "programs, and data"
    ),
    NfrLabel.LEGAL: (
        "Any requirement that specifies the software capability to guarantee "
        "users rights to access/delete their personal data, and resolve "
        "their legal complaints against the platform"
    ),
    NfrLabel.SAFETY: (
        'Any requirement that specifies the software capability to ensure '
        'the state of being "safe", the condition of being protected from '
        "harm or other non-desirable outcomes"
    ),
    NfrLabel.CUSTOMIZABILITY: (
        "Any requirement that specifies the capability of a software product "
        "to personalize and customize services according to its users' "
        "preferences"
    ),
    NfrLabel.ACCURACY: (
        "Any requirement that is concerned with defining the precision which "
        "the system records or produces data."
    ),
    NfrLabel.MAINTAINABILITY: (
        "Any requirement that specifies the capability of a software product "
        "to operate without failure and maintain a certain level of "
        "performance when used under normal conditions during a given time "
        "period"
    ),
    NfrLabel.TRUST: (
        "Any requirement that is used to enhance users' confidence, faith, "
        "or hope in the software system"
    ),
    NfrLabel.ACCESSIBILITY: (
        "Any requirement that specifies the capability of a software product "
        "to be accessible and usable by all users, including people with "
        "disabilities"
    ),
    NfrLabel.OTHER: (
        "Statements that specify the capability of the software to provide "
        "services, enable users to refer friends, or the system to conduct "
        "research, are included in this category"
    ),
}

#: Gold/predicted label assignments. Empty sets are legal for model
#: predictions only, never for ground truth.
LabelSet = frozenset  # frozenset[NfrLabel]

_LABELS_BY_NAME = {label.value: label for label in NfrLabel}


def parse_label(name: str) -> NfrLabel:
    """Resolve a label id string, case-sensitively."""
    try:
        return _LABELS_BY_NAME[name]
    except KeyError:
        raise UnknownLabel(name) from None


def parse_label_set(names: Iterable[str]) -> LabelSet:
    return frozenset(parse_label(n) for n in names)


@dataclass(frozen=True)
class Statement:
    id: str
    doc_id: str
    text: str
    start: int
    end: int
    gold: Optional[LabelSet] = None


@dataclass(frozen=True)
class PolicyDocument:
    id: str
    app_name: str
    domain_category: str
    source_url: str
    raw_text: str
    statements: tuple[Statement, ...] = ()


@dataclass(frozen=True)
class Corpus:
    documents: tuple[PolicyDocument, ...] = ()

    def statements(self) -> list[Statement]:
        return [s for doc in self.documents for s in doc.statements]


@dataclass(frozen=True)
class CorpusStats:
    n_documents: int
    n_statements: int
    avg_words_per_policy: float
    label_histogram: dict[NfrLabel, int]
    multi_label_fraction: float
    avg_fre: float
    #: names of average fields whose denominator was zero (reported as 0)
    undefined: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "n_documents": self.n_documents,
            "n_statements": self.n_statements,
            "avg_words_per_policy": self.avg_words_per_policy,
            "label_histogram": {
                label.value: self.label_histogram.get(label, 0) for label in NfrLabel
            },
            "multi_label_fraction": self.multi_label_fraction,
            "avg_fre": self.avg_fre,
            "undefined": list(self.undefined),
        }


# -- loading and serialization ---------------------------------------------

_REQUIRED_DOC_KEYS = ("id", "app_name", "domain_category", "source_url", "raw_text")
_REQUIRED_STMT_KEYS = ("id", "start", "end")


def load_corpus(path: str | Path) -> Corpus:
    """Load and fully validate a JSONL corpus file."""
    return loads_corpus(Path(path).read_text(encoding="utf-8"))


def loads_corpus(text: str) -> Corpus:
    documents: list[PolicyDocument] = []
    seen_doc_ids: set[str] = set()
    seen_stmt_ids: set[str] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid JSON ({exc.msg})") from None
        documents.append(
            _parse_document(record, line_no, seen_doc_ids, seen_stmt_ids)
        )
    return Corpus(documents=tuple(documents))


def _parse_document(
    record: object,
    line_no: int,
    seen_doc_ids: set[str],
    seen_stmt_ids: set[str],
) -> PolicyDocument:
    if not isinstance(record, dict):
        raise MalformedRecord(line_no, "record is not a JSON object")
    for key in _REQUIRED_DOC_KEYS:
        if key not in record or not isinstance(record[key], str):
            raise MalformedRecord(line_no, f"missing or non-string field {key!r}")
    doc_id = record["id"]
    if doc_id in seen_doc_ids:
        raise DuplicateId(doc_id)
    seen_doc_ids.add(doc_id)

    raw_text = record["raw_text"]
    raw_statements = record.get("statements", [])
    if not isinstance(raw_statements, list):
        raise MalformedRecord(line_no, "'statements' is not a list")

    statements: list[Statement] = []
    prev_end = -1
    for raw in raw_statements:
        if not isinstance(raw, dict):
            raise MalformedRecord(line_no, "statement is not a JSON object")
        for key in _REQUIRED_STMT_KEYS:
            if key not in raw:
                raise MalformedRecord(line_no, f"statement missing field {key!r}")
        stmt_id = raw["id"]
        if not isinstance(stmt_id, str):
            raise MalformedRecord(line_no, "statement 'id' is not a string")
        if stmt_id in seen_stmt_ids:
            raise DuplicateId(stmt_id)
        seen_stmt_ids.add(stmt_id)
        start, end = raw["start"], raw["end"]
        if not isinstance(start, int) or not isinstance(end, int):
            raise MalformedRecord(line_no, "statement span is not integer")
        if not (0 <= start < end <= len(raw_text)):
            raise SpanOutOfBounds(stmt_id, f"[{start}, {end}) in text of length {len(raw_text)}")
        if start < prev_end:
            raise MalformedRecord(
                line_no, f"statement {stmt_id!r} overlaps or is out of order"
            )
        prev_end = end
        gold_raw = raw.get("gold")
        gold: Optional[LabelSet]
        if gold_raw is None:
            gold = None
        elif isinstance(gold_raw, list):
            if not gold_raw:
                raise MalformedRecord(
                    line_no, f"statement {stmt_id!r} has an empty gold label list"
                )
            gold = parse_label_set(gold_raw)
        else:
            raise MalformedRecord(line_no, "statement 'gold' is not a list or null")
        statements.append(
            Statement(
                id=stmt_id,
                doc_id=doc_id,
                text=raw_text[start:end],
                start=start,
                end=end,
                gold=gold,
            )
        )
    return PolicyDocument(
        id=doc_id,
        app_name=record["app_name"],
        domain_category=record["domain_category"],
        source_url=record["source_url"],
        raw_text=raw_text,
        statements=tuple(statements),
    )


def serialize_corpus(corpus: Corpus) -> str:
    """Inverse of :func:`loads_corpus`; round-trips any valid corpus."""
    lines = []
    for doc in corpus.documents:
        record = {
            "id": doc.id,
            "app_name": doc.app_name,
            "domain_category": doc.domain_category,
            "source_url": doc.source_url,
            "raw_text": doc.raw_text,
            "statements": [
                {
                    "id": s.id,
                    "start": s.start,
                    "end": s.end,
                    "gold": sorted(l.value for l in s.gold) if s.gold is not None else None,
                }
                for s in doc.statements
            ],
        }
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(serialize_corpus(corpus), encoding="utf-8")


# -- statement segmentation --------------------------------------------------

#: characters treated as list-bullet markers when they lead a segment
_BULLET_CHARS = "-*•·–—"

#: dotted tokens that never terminate a statement
_ABBREVIATIONS = frozenset({"e.g.", "i.e.", "etc.", "inc.", "u.s."})

_TERMINALS = ".!?;"


def _is_abbreviation(text: str, dot_index: int) -> bool:
    """True when the '.' at ``dot_index`` ends a known abbreviation."""
    if text[dot_index] != ".":
        return False
    j = dot_index
    while j > 0 and (text[j - 1].isalpha() or text[j - 1] == "."):
        j -= 1
    return text[j : dot_index + 1].lower() in _ABBREVIATIONS


def segment(raw_text: str) -> list[tuple[int, int]]:
    """Split policy text into statement spans.

    A statement boundary occurs after '.', '!', '?' or ';' when the next
    non-delimiter character is uppercase (or the text ends), and at a
    newline that leads into a capitalized token. Bullet markers and
    whitespace between statements are treated as delimiters and excluded
    from spans; an abbreviation list suppresses false sentence breaks.
    """
    n = len(raw_text)
    cuts = [0]
    for i, ch in enumerate(raw_text):
        if ch in _TERMINALS:
            if _is_abbreviation(raw_text, i):
                continue
            j = i + 1
            while j < n and (raw_text[j].isspace() or raw_text[j] in _BULLET_CHARS):
                j += 1
            # at least one delimiter char must separate punct and capital
            if j == n or (j > i + 1 and raw_text[j].isupper()):
                cuts.append(i + 1)
        elif ch == "\n":
            j = i + 1
            while j < n and (raw_text[j].isspace() or raw_text[j] in _BULLET_CHARS):
                j += 1
            if j < n and raw_text[j].isupper():
                cuts.append(i + 1)
    cuts.append(n)

    spans: list[tuple[int, int]] = []
    for start, end in zip(cuts, cuts[1:]):
        while start < end and (
            raw_text[start].isspace() or raw_text[start] in _BULLET_CHARS
        ):
            start += 1
        while end > start and raw_text[end - 1].isspace():
            end -= 1
        if start < end:
            spans.append((start, end))
    return spans


def segment_document(
    doc_id: str, raw_text: str, id_prefix: str | None = None
) -> PolicyDocument:
    """Build a document with auto-segmented, unlabeled statements."""
    prefix = id_prefix if id_prefix is not None else doc_id
    statements = tuple(
        Statement(
            id=f"{prefix}-s{k:04d}",
            doc_id=doc_id,
            text=raw_text[a:b],
            start=a,
            end=b,
            gold=None,
        )
        for k, (a, b) in enumerate(segment(raw_text))
    )
    return PolicyDocument(
        id=doc_id,
        app_name=doc_id,
        domain_category="",
        source_url="",
        raw_text=raw_text,
        statements=statements,
    )


# -- readability --------------------------------------------------------------

_WORD_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)*")
_SENT_END_RE = re.compile(r"[.!?]+")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def count_syllables(word: str) -> int:
    """Heuristic syllable count: vowel groups, minus a terminal silent 'e'
    (kept for words ending in 'le'), floor of one."""
    w = word.lower()
    count = len(_VOWEL_GROUP_RE.findall(w))
    if w.endswith("e") and not w.endswith("le"):
        count -= 1
    return max(count, 1)


def _count_sentences(text: str) -> int:
    """Number of terminal-punctuation groups that close at least one word."""
    count = 0
    cursor = 0
    for match in _SENT_END_RE.finditer(text):
        if _WORD_RE.search(text, cursor, match.start()):
            count += 1
        cursor = match.end()
    return count


def flesch_reading_ease(text: str) -> float:
    """Flesch Reading Ease, unclamped.

    206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)
    """
    words = _WORD_RE.findall(text)
    if not words:
        raise NoWords("no words in text")
    sentences = _count_sentences(text)
    if sentences == 0:
        raise NoSentences("no terminated sentences in text")
    syllables = sum(count_syllables(w) for w in words)
    return (
        206.835
        - 1.015 * (len(words) / sentences)
        - 84.6 * (syllables / len(words))
    )


# -- corpus statistics ---------------------------------------------------------

def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Summary counts, the gold-label histogram and average readability.

    Averages with an empty denominator are reported as 0 and named in
    ``undefined`` so stats still run on partial or unlabeled corpora.
    """
    undefined: list[str] = []
    n_documents = len(corpus.documents)
    statements = corpus.statements()
    n_statements = len(statements)

    if n_documents:
        total_words = sum(
            len(_WORD_RE.findall(doc.raw_text)) for doc in corpus.documents
        )
        avg_words = total_words / n_documents
    else:
        avg_words = 0.0
        undefined.append("avg_words_per_policy")

    histogram: dict[NfrLabel, int] = {label: 0 for label in NfrLabel}
    labeled = 0
    multi = 0
    for stmt in statements:
        if stmt.gold is None:
            continue
        labeled += 1
        if len(stmt.gold) > 1:
            multi += 1
        for label in stmt.gold:
            histogram[label] += 1
    if labeled:
        multi_fraction = multi / labeled
    else:
        multi_fraction = 0.0
        undefined.append("multi_label_fraction")

    fre_values = []
    for doc in corpus.documents:
        try:
            fre_values.append(flesch_reading_ease(doc.raw_text))
        except (NoWords, NoSentences):
            continue
    if fre_values:
        avg_fre = sum(fre_values) / len(fre_values)
    else:
        avg_fre = 0.0
        undefined.append("avg_fre")

    return CorpusStats(
        n_documents=n_documents,
        n_statements=n_statements,
        avg_words_per_policy=avg_words,
        label_histogram=histogram,
        multi_label_fraction=multi_fraction,
        avg_fre=avg_fre,
        undefined=tuple(undefined),
    )
