"""Structural lint findings and their set semantics."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from caseconf import build_graph, graph_to_document, structural_lint
from caseconf.lint import DEFEATER_BAD_TARGET, MISSING_WARRANT, UNSUPPORTED_LEAF

from conftest import random_case_doc


def test_bundled_fragment_is_clean(cyber_case):
    assert structural_lint(cyber_case) == []


def test_missing_decomposition_warrant_is_found(cyber_case):
    doc = graph_to_document(cyber_case)
    for block in doc["blocks"]:
        if block["id"] == "A2.2.1":
            del block["warrant"]
    doc["claims"] = [c for c in doc["claims"] if c["id"] != "W2.2.1"]
    del doc["assignments"]["warrant_conf"]["W2.2.1"]
    findings = structural_lint(build_graph(doc))
    assert [(f.code, f.node) for f in findings] == [(MISSING_WARRANT, "A2.2.1")]


def test_missing_substitution_warrant_is_found():
    doc = {
        "case": {"id": "sub", "title": "", "top_claim": "C1"},
        "claims": [
            {"id": "C1", "statement": "useful form", "is_top_level": True},
            {"id": "C2", "statement": "measured form"},
        ],
        "evidence": [{"id": "E1", "description": "measurement"}],
        "blocks": [
            {"id": "A1", "kind": "substitution", "parent_claim": "C1", "children": ["C2"]},
            {"id": "A2", "kind": "evidence_incorporation", "parent_claim": "C2",
             "children": ["E1"]},
        ],
        "defeaters": [],
        "residual_doubts": [],
        "assignments": {"posterior": {"C2": 0.9}},
    }
    findings = structural_lint(build_graph(doc))
    assert (MISSING_WARRANT, "A1") in {(f.code, f.node) for f in findings}


def test_unsupported_leaf_is_found():
    doc = {
        "case": {"id": "bare", "title": "", "top_claim": "C1"},
        "claims": [{"id": "C1", "statement": "floating claim", "is_top_level": True}],
        "evidence": [],
        "blocks": [],
        "defeaters": [],
        "residual_doubts": [],
        "assignments": {},
    }
    findings = structural_lint(build_graph(doc))
    assert [(f.code, f.node) for f in findings] == [(UNSUPPORTED_LEAF, "C1")]


def test_defeater_on_non_argument_role_is_found():
    doc = {
        "case": {"id": "meta", "title": "", "top_claim": "C1"},
        "claims": [{"id": "C1", "statement": "claim", "is_top_level": True}],
        "evidence": [{"id": "E1", "description": "datum"}],
        "blocks": [{
            "id": "A1", "kind": "evidence_incorporation",
            "parent_claim": "C1", "children": ["E1"],
        }],
        "defeaters": [
            {"id": "D1", "text": "doubt", "target": "E1",
             "defeater_type": "undermining", "class": "exploratory"},
            {"id": "D2", "text": "doubt about the doubt", "target": "D1",
             "defeater_type": "rebutting", "class": "exploratory"},
        ],
        "residual_doubts": [],
        "assignments": {"posterior": {"C1": 0.5}},
    }
    findings = structural_lint(build_graph(doc))
    assert [(f.code, f.node) for f in findings] == [(DEFEATER_BAD_TARGET, "D2")]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_lint_is_idempotent_and_deterministic(seed):
    rng = random.Random(seed)
    graph = build_graph(random_case_doc(
        rng, max_nodes=rng.randint(3, 24), warrant_prob=rng.random(),
        defeater_count=rng.randint(0, 3),
    ))
    first = structural_lint(graph)
    second = structural_lint(graph)
    assert first == second
    assert len(set(first)) == len(first)
    assert first == sorted(first)
