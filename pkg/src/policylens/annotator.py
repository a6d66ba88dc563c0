"""Apply a trained model to a policy and render annotated output.

The HTML renderer emits one standalone, fully escaped document per policy:
classified statements become color-coded ``<span class="nfr-<label>">``
highlights with the label descriptions as comments, a collapsed key panel
explains every category, and the annotation JSON is inlined for the
optional browser viewer, which the document references by relative path
but never requires.

The class-name contract ``nfr-<lowercased label id>`` and the annotation
JSON schema are stable interfaces for that viewer. Rendering is pure:
equal inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from html import escape
from typing import Optional

from .corpus import LabelSet, NfrLabel, PolicyDocument, parse_label
from .learner import BrModel, predict_labels
from .textprep import StopWordList, preprocess
from .vectorize import EmbeddingTable, TfidfVectorizer, embed_average, transform_tfidf

#: default highlight colors, one distinct colorblind-aware hex per label
DEFAULT_PALETTE: dict = {
    NfrLabel.USABILITY: "#88ccee",
    NfrLabel.PERFORMANCE: "#44aa99",
    NfrLabel.SECURITY: "#117733",
    NfrLabel.LEGAL: "#332288",
    NfrLabel.SAFETY: "#ddcc77",
    NfrLabel.CUSTOMIZABILITY: "#999933",
    NfrLabel.ACCURACY: "#cc6677",
    NfrLabel.MAINTAINABILITY: "#882255",
    NfrLabel.TRUST: "#aa4499",
    NfrLabel.ACCESSIBILITY: "#ee8866",
    NfrLabel.OTHER: "#bbbbbb",
}

#: labels whose highlight needs light text for contrast
_DARK_BACKGROUNDS = {
    NfrLabel.SECURITY,
    NfrLabel.LEGAL,
    NfrLabel.MAINTAINABILITY,
}


@dataclass(frozen=True)
class AnnotatedStatement:
    statement: object  # corpus.Statement
    predicted: LabelSet
    scores: dict  # NfrLabel -> float
    primary_label: Optional[NfrLabel]
    comment: str


@dataclass(frozen=True)
class AnnotatedDocument:
    doc: PolicyDocument
    annotated: tuple  # AnnotatedStatement, in document order
    palette: dict  # NfrLabel -> color hex, all 11 labels
    model_descriptor: str


def _ranked(predicted: LabelSet, scores: dict) -> list:
    """Predicted labels by descending score, taxonomy order breaking ties."""
    order = {lbl: i for i, lbl in enumerate(NfrLabel)}
    return sorted(predicted, key=lambda lbl: (-scores[lbl], order[lbl]))


def build_comment(predicted: LabelSet, scores: dict) -> str:
    """Concatenated taxonomy descriptions of the predicted labels."""
    return " ".join(lbl.description for lbl in _ranked(predicted, scores))


def annotate_document(
    doc: PolicyDocument,
    br_model: BrModel,
    vec,
    stops: StopWordList,
    palette: dict | None = None,
    model_descriptor: str = "",
) -> AnnotatedDocument:
    """Classify every statement of ``doc`` and assemble render-ready output.

    ``vec`` is a fitted :class:`TfidfVectorizer` or a pretrained
    :class:`EmbeddingTable`. Statements with no positive prediction carry
    no highlight and no comment.
    """
    palette = dict(palette) if palette is not None else dict(DEFAULT_PALETTE)
    missing = [lbl for lbl in NfrLabel if lbl not in palette]
    if missing:
        raise ValueError(f"palette is missing labels: {missing}")
    if len(set(palette[lbl] for lbl in NfrLabel)) != len(NfrLabel):
        raise ValueError("palette colors must be distinct")

    annotated = []
    for stmt in doc.statements:
        tokens = preprocess(stmt.text, stops)
        if isinstance(vec, TfidfVectorizer):
            x = transform_tfidf(vec, tokens)
        elif isinstance(vec, EmbeddingTable):
            x = embed_average(vec, tokens)
        else:
            raise TypeError(f"unsupported vectorizer: {type(vec).__name__}")
        predicted, scores = predict_labels(br_model, x)
        ranked = _ranked(predicted, scores)
        annotated.append(
            AnnotatedStatement(
                statement=stmt,
                predicted=predicted,
                scores=scores,
                primary_label=ranked[0] if ranked else None,
                comment=build_comment(predicted, scores),
            )
        )
    return AnnotatedDocument(
        doc=doc,
        annotated=tuple(annotated),
        palette=palette,
        model_descriptor=model_descriptor,
    )


# -- HTML rendering ------------------------------------------------------------

_CSS = """\
body { font-family: Georgia, 'Times New Roman', serif; margin: 2rem auto;
       max-width: 46rem; line-height: 1.6; color: #1a1a1a; padding: 0 1rem; }
header h1 { font-size: 1.4rem; margin-bottom: 0.2rem; }
.nfr-model { color: #666; font-size: 0.85rem; margin-top: 0; }
.nfr-policy { white-space: pre-wrap; }
.nfr-policy span[class^="nfr-"] { border-radius: 3px; padding: 0 2px; }
.nfr-light { color: #f5f5f5; }
.nfr-chips { white-space: normal; }
.nfr-chip { font-size: 0.7rem; font-family: sans-serif; border-radius: 8px;
            padding: 0 6px; margin-left: 3px; vertical-align: super; }
.nfr-note { display: block; font-size: 0.85rem; font-family: sans-serif;
            background: #f3f3f3; border-left: 3px solid #999;
            margin: 0.3rem 0; padding: 0.3rem 0.6rem; white-space: normal; }
.nfr-note[hidden] { display: none; }
.nfr-dim { opacity: 0.25; }
.nfr-key { margin-top: 2rem; border-top: 1px solid #ccc; padding-top: 1rem;
           font-family: sans-serif; font-size: 0.9rem; }
.nfr-key ul { list-style: none; padding-left: 0; }
.nfr-key li { margin: 0.4rem 0; }
.nfr-swatch { display: inline-block; width: 0.9rem; height: 0.9rem;
              border-radius: 3px; margin-right: 0.5rem; vertical-align: middle; }
.nfr-error { background: #ffdddd; border: 1px solid #cc0000; padding: 0.5rem;
             font-family: sans-serif; }
"""


def render_html(ad: AnnotatedDocument) -> str:
    """Render a complete standalone HTML document for an annotated policy."""
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        '<meta name="viewport" content="width=device-width, initial-scale=1">',
        f"<title>{escape(ad.doc.app_name, quote=True)} privacy policy (annotated)</title>",
        f"<style>\n{_CSS}</style>",
        "</head>",
        "<body>",
        "<header>",
        f"<h1>{escape(ad.doc.app_name, quote=True)} privacy policy</h1>",
        f'<p class="nfr-model">{escape(ad.model_descriptor, quote=True)}</p>',
        "</header>",
        '<main class="nfr-policy" id="nfr-policy">',
    ]
    raw = ad.doc.raw_text
    cursor = 0
    body: list[str] = []
    for ann in ad.annotated:
        stmt = ann.statement
        body.append(escape(raw[cursor:stmt.start], quote=True))
        text = escape(raw[stmt.start:stmt.end], quote=True)
        if ann.predicted:
            color = ad.palette[ann.primary_label]
            light = " nfr-light" if ann.primary_label in _DARK_BACKGROUNDS else ""
            comment = escape(ann.comment, quote=True)
            css_class = f"nfr-{ann.primary_label.value.lower()}"
            body.append(
                f'<span class="{css_class}{light}" style="background:{color}"'
                f' title="{comment}" data-statement-id="{escape(stmt.id, quote=True)}">'
                f"{text}</span>"
            )
            chips = []
            for lbl in _ranked(ann.predicted, ann.scores):
                chip_light = " nfr-light" if lbl in _DARK_BACKGROUNDS else ""
                chips.append(
                    f'<span class="nfr-chip{chip_light}"'
                    f' style="background:{ad.palette[lbl]}">{escape(lbl.value)}</span>'
                )
            body.append(f'<span class="nfr-chips">{"".join(chips)}</span>')
            body.append(f'<span class="nfr-note" hidden>{comment}</span>')
        else:
            body.append(text)
        cursor = stmt.end
    body.append(escape(raw[cursor:], quote=True))
    parts.append("".join(body))
    parts.append("</main>")

    parts.append('<details class="nfr-key" id="nfr-key">')
    parts.append("<summary>Annotation key</summary>")
    parts.append("<ul>")
    for lbl in NfrLabel:
        parts.append(
            f'<li data-label="{lbl.value.lower()}">'
            f'<span class="nfr-swatch" style="background:{ad.palette[lbl]}"></span>'
            f"<strong>{escape(lbl.value)}</strong>: {escape(lbl.description, quote=True)}</li>"
        )
    parts.append("</ul>")
    parts.append("</details>")

    inline = render_json(ad).replace("</", "<\\/")
    parts.append(f'<script type="application/json" id="nfr-data">{inline}</script>')
    parts.append('<script type="module" src="viewer.js"></script>')
    parts.append("</body>")
    parts.append("</html>")
    return "\n".join(parts) + "\n"


# -- annotation JSON --------------------------------------------------------------


def _payload(ad: AnnotatedDocument) -> dict:
    return {
        "doc_id": ad.doc.id,
        "app_name": ad.doc.app_name,
        "model_descriptor": ad.model_descriptor,
        "palette": {lbl.value: ad.palette[lbl] for lbl in NfrLabel},
        "annotations": [
            {
                "statement_id": ann.statement.id,
                "start": ann.statement.start,
                "end": ann.statement.end,
                "labels": [lbl.value for lbl in _ranked(ann.predicted, ann.scores)],
                "primary": ann.primary_label.value if ann.primary_label else None,
                "scores": {
                    lbl.value: round(ann.scores[lbl], 6) for lbl in NfrLabel
                },
                "comment": ann.comment,
            }
            for ann in ad.annotated
        ],
    }


def render_payload(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1)


def render_json(ad: AnnotatedDocument) -> str:
    """Serialize the annotation set; scores carry six decimals."""
    return render_payload(_payload(ad))


def parse_annotations(text: str) -> dict:
    """Validate and return an annotation payload produced by :func:`render_json`.

    ``render_payload(parse_annotations(s)) == s`` for any ``s`` this module
    produced.
    """
    payload = json.loads(text)
    for key in ("doc_id", "app_name", "model_descriptor", "palette", "annotations"):
        if key not in payload:
            raise ValueError(f"annotation payload missing field {key!r}")
    for name in payload["palette"]:
        parse_label(name)
    if set(payload["palette"]) != {lbl.value for lbl in NfrLabel}:
        raise ValueError("palette must cover exactly the 11 taxonomy labels")
    for ann in payload["annotations"]:
        for key in ("statement_id", "start", "end", "labels", "primary", "scores", "comment"):
            if key not in ann:
                raise ValueError(f"annotation missing field {key!r}")
        for name in ann["labels"]:
            parse_label(name)
        if ann["primary"] is not None:
            primary = parse_label(ann["primary"])
            if primary.value not in ann["labels"]:
                raise ValueError("primary label must be among predicted labels")
        for name in ann["scores"]:
            parse_label(name)
        if not (isinstance(ann["start"], int) and isinstance(ann["end"], int)):
            raise ValueError("annotation span must be integer")
    return payload
