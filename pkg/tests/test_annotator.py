"""Annotation assembly, HTML rendering and the annotation JSON interface."""

from __future__ import annotations

import json
import re

import numpy as np
import pytest

from policylens.annotator import (
    DEFAULT_PALETTE,
    annotate_document,
    build_comment,
    parse_annotations,
    render_html,
    render_json,
    render_payload,
)
from policylens.corpus import NfrLabel, PolicyDocument, Statement, segment_document
from policylens.learner import BrModel, LinearModel
from policylens.textprep import load_stop_words
from policylens.vectorize import fit_tfidf

_LABEL_CLASS_RE = re.compile(
    r'class="nfr-(?:' + "|".join(l.value.lower() for l in NfrLabel) + r')\b'
)


def _doc(texts, doc_id="doc-1", app_name="ExampleApp"):
    raw = " ".join(texts)
    statements = []
    cursor = 0
    for i, text in enumerate(texts):
        start = raw.index(text, cursor)
        cursor = start + len(text)
        statements.append(
            Statement(
                id=f"{doc_id}-s{i}", doc_id=doc_id, text=text,
                start=start, end=cursor, gold=None,
            )
        )
    return PolicyDocument(
        id=doc_id, app_name=app_name, domain_category="delivery",
        source_url="", raw_text=raw, statements=tuple(statements),
    )


@pytest.fixture(scope="module")
def keyed():
    """Vectorizer plus a hand-keyed model: Security fires on 'encrypt'
    (strongly), Usability on 'simplify' (very strongly); others constant -1."""
    vectorizer = fit_tfidf(
        [["encrypt", "payment", "data"], ["simplify", "form"], ["log", "visit"]]
    )
    dim = vectorizer.dim
    models = {
        lbl: LinearModel(np.zeros(dim), 0.0, label=lbl, constant_class=-1)
        for lbl in NfrLabel
    }
    w_sec = np.zeros(dim)
    w_sec[vectorizer.vocabulary["encrypt"]] = 1.0
    models[NfrLabel.SECURITY] = LinearModel(w_sec, -0.05, label=NfrLabel.SECURITY)
    w_usa = np.zeros(dim)
    w_usa[vectorizer.vocabulary["simplify"]] = 10.0
    models[NfrLabel.USABILITY] = LinearModel(w_usa, -0.05, label=NfrLabel.USABILITY)
    return vectorizer, BrModel(models=models)


@pytest.fixture(scope="module")
def annotated(keyed):
    vectorizer, br = keyed
    doc = _doc(
        [
            "We encrypt payment data.",
            "We simplify forms and encrypt them.",
            "Nothing notable happens here.",
        ]
    )
    return annotate_document(
        doc, br, vectorizer, load_stop_words(), model_descriptor="keyed test model"
    )


class TestAnnotateDocument:
    def test_single_label_path(self, annotated):
        first = annotated.annotated[0]
        assert first.predicted == frozenset([NfrLabel.SECURITY])
        assert first.primary_label is NfrLabel.SECURITY
        assert first.comment == NfrLabel.SECURITY.description

    def test_unannotated_statement(self, annotated):
        last = annotated.annotated[2]
        assert last.predicted == frozenset()
        assert last.primary_label is None
        assert last.comment == ""

    def test_multi_label_primary_is_argmax(self, annotated):
        second = annotated.annotated[1]
        assert second.predicted == frozenset([NfrLabel.USABILITY, NfrLabel.SECURITY])
        assert second.scores[NfrLabel.USABILITY] > second.scores[NfrLabel.SECURITY]
        assert second.primary_label is NfrLabel.USABILITY
        assert NfrLabel.USABILITY.description in second.comment
        assert NfrLabel.SECURITY.description in second.comment

    def test_comment_concatenates_descriptions_in_score_order(self, annotated):
        second = annotated.annotated[1]
        assert second.comment == build_comment(second.predicted, second.scores)
        assert second.comment == (
            NfrLabel.USABILITY.description + " " + NfrLabel.SECURITY.description
        )

    def test_order_matches_document(self, annotated):
        ids = [a.statement.id for a in annotated.annotated]
        assert ids == [s.id for s in annotated.doc.statements]

    def test_palette_must_cover_all_labels(self, keyed):
        vectorizer, br = keyed
        doc = _doc(["We encrypt payment data."])
        bad = dict(DEFAULT_PALETTE)
        del bad[NfrLabel.OTHER]
        with pytest.raises(ValueError):
            annotate_document(doc, br, vectorizer, load_stop_words(), palette=bad)

    def test_palette_colors_must_be_distinct(self, keyed):
        vectorizer, br = keyed
        doc = _doc(["We encrypt payment data."])
        bad = dict(DEFAULT_PALETTE)
        bad[NfrLabel.OTHER] = bad[NfrLabel.USABILITY]
        with pytest.raises(ValueError):
            annotate_document(doc, br, vectorizer, load_stop_words(), palette=bad)

    def test_default_palette_is_distinct_and_total(self):
        assert set(DEFAULT_PALETTE) == set(NfrLabel)
        assert len(set(DEFAULT_PALETTE.values())) == 11


class TestRenderHtml:
    def test_highlight_span_count_matches_predictions(self, annotated):
        html = render_html(annotated)
        n_predicted = sum(1 for a in annotated.annotated if a.predicted)
        assert len(_LABEL_CLASS_RE.findall(html)) == n_predicted == 2

    def test_byte_deterministic(self, annotated):
        assert render_html(annotated) == render_html(annotated)

    def test_zero_annotation_document(self, keyed):
        vectorizer, br = keyed
        doc = _doc(["Nothing here.", "Still nothing."])
        ad = annotate_document(doc, br, vectorizer, load_stop_words())
        html = render_html(ad)
        assert _LABEL_CLASS_RE.search(html) is None
        assert "Nothing here. Still nothing." in html
        assert html.count('class="nfr-swatch"') == 11

    def test_key_panel_lists_all_labels_collapsed(self, annotated):
        html = render_html(annotated)
        assert html.count('class="nfr-swatch"') == 11
        for lbl in NfrLabel:
            assert f"<strong>{lbl.value}</strong>" in html
        details = re.search(r'<details class="nfr-key"[^>]*>', html)
        assert details and "open" not in details.group(0)

    def test_script_tag_escaped(self, keyed):
        vectorizer, br = keyed
        doc = _doc(["We encrypt <script>alert(1)</script> data."])
        ad = annotate_document(doc, br, vectorizer, load_stop_words())
        html = render_html(ad)
        assert "&lt;script&gt;alert(1)&lt;/script&gt;" in html
        assert "<script>alert(1)" not in html

    def test_highlight_style_uses_primary_color(self, annotated):
        html = render_html(annotated)
        sec = re.search(r'<span class="nfr-security[^>]*>', html)
        assert sec and f"background:{DEFAULT_PALETTE[NfrLabel.SECURITY]}" in sec.group(0)

    def test_comment_in_title_and_hidden_note(self, annotated):
        html = render_html(annotated)
        assert 'title="' in html
        assert '<span class="nfr-note" hidden>' in html

    def test_chips_for_every_predicted_label(self, annotated):
        html = render_html(annotated)
        chips = re.findall(r'class="nfr-chip[" ]', html)
        assert len(chips) == 3  # 1 + 2 predicted labels

    def test_viewer_referenced_by_relative_path(self, annotated):
        html = render_html(annotated)
        assert '<script type="module" src="viewer.js">' in html

    def test_inline_annotation_data_parses(self, annotated):
        html = render_html(annotated)
        match = re.search(
            r'<script type="application/json" id="nfr-data">(.*?)</script>',
            html,
            re.DOTALL,
        )
        payload = json.loads(match.group(1).replace("<\\/", "</"))
        assert payload["doc_id"] == annotated.doc.id


class TestAnnotationJson:
    def test_schema_fields(self, annotated):
        payload = json.loads(render_json(annotated))
        assert set(payload) == {
            "doc_id", "app_name", "model_descriptor", "palette", "annotations",
        }
        entry = payload["annotations"][0]
        assert set(entry) == {
            "statement_id", "start", "end", "labels", "primary", "scores", "comment",
        }
        assert set(payload["palette"]) == {l.value for l in NfrLabel}

    def test_empty_annotations_array(self, keyed):
        vectorizer, br = keyed
        doc = PolicyDocument(
            id="empty", app_name="Empty", domain_category="", source_url="",
            raw_text="no statements at all", statements=(),
        )
        ad = annotate_document(doc, br, vectorizer, load_stop_words())
        payload = json.loads(render_json(ad))
        assert payload["annotations"] == []

    def test_round_trip_identity(self, annotated):
        text = render_json(annotated)
        assert render_payload(parse_annotations(text)) == text

    def test_scores_rounded_to_six_decimals(self, annotated):
        payload = json.loads(render_json(annotated))
        for entry in payload["annotations"]:
            for value in entry["scores"].values():
                assert value == round(value, 6)

    def test_label_ids_round_trip(self, keyed):
        vectorizer, br = keyed
        doc = _doc(["We encrypt payment data."])
        ad = annotate_document(doc, br, vectorizer, load_stop_words())
        payload = parse_annotations(render_json(ad))
        assert payload["annotations"][0]["labels"] == ["Security"]
        assert "Customizability" in payload["palette"]

    def test_parse_rejects_unknown_label(self, annotated):
        payload = json.loads(render_json(annotated))
        payload["annotations"][0]["labels"] = ["Speed"]
        from policylens.errors import UnknownLabel

        with pytest.raises(UnknownLabel):
            parse_annotations(json.dumps(payload))

    def test_parse_rejects_missing_field(self, annotated):
        payload = json.loads(render_json(annotated))
        del payload["palette"]
        with pytest.raises(ValueError):
            parse_annotations(json.dumps(payload))


class TestSegmentedEndToEnd:
    def test_auto_segmented_document_annotates(self, keyed):
        vectorizer, br = keyed
        doc = segment_document("raw", "We encrypt payment data. We log visits.")
        ad = annotate_document(doc, br, vectorizer, load_stop_words())
        assert len(ad.annotated) == 2
        assert ad.annotated[0].predicted == frozenset([NfrLabel.SECURITY])
