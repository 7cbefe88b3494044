"""Shared fixtures: the bundled example case and random case generators.

The random generators build schema-valid documents (trees rooted at one top
claim) so structural, soundness and confidence properties can be checked
over many shapes. Oracles used against the engine live in the test modules
that need them, written as independent traversals.
"""

from __future__ import annotations

import math
import random

import pytest

from caseconf import build_graph, example_case_path, load_case


@pytest.fixture()
def cyber_case():
    return load_case(example_case_path())


@pytest.fixture()
def lifecycle_case():
    return load_case(example_case_path("lifecycle_fragment"))


def random_case_doc(
    rng: random.Random,
    max_nodes: int = 30,
    warrant_prob: float = 1.0,
    defeater_count: int = 0,
    assign_low: float = 0.0,
    assign_high: float = 1.0,
    decomposition_only: bool = False,
) -> dict:
    """Random tree-shaped case document with complete assignments.

    ``max_nodes`` bounds claims + evidence + blocks. Warrants appear with
    probability ``warrant_prob`` per block (below 1.0 the document will lint
    with missing-warrant findings on deductive blocks).
    """
    claims = []
    evidence = []
    blocks = []
    posterior: dict[str, float] = {}
    warrant_conf: dict[str, float] = {}
    counters = {"C": 0, "E": 0, "W": 0, "A": 0}

    def fresh(prefix: str) -> str:
        counters[prefix] += 1
        return f"{prefix}{counters[prefix]}"

    def assigned() -> float:
        return rng.uniform(assign_low, assign_high)

    top = fresh("C")
    claims.append({"id": top, "statement": f"claim {top}", "is_top_level": True})
    budget = max_nodes - 1
    frontier = [top]

    def maybe_warrant(block: dict) -> None:
        nonlocal budget
        if budget >= 1 and rng.random() < warrant_prob:
            wid = fresh("W")
            claims.append({"id": wid, "statement": f"warrant {wid}", "is_side_claim": True})
            warrant_conf[wid] = assigned()
            block["warrant"] = wid
            budget -= 1

    while frontier:
        claim_id = frontier.pop()
        block_id = fresh("A")
        budget -= 1
        # leaf when the budget is tight or by chance
        if budget < 4 or rng.random() < 0.35:
            eid = fresh("E")
            evidence.append({"id": eid, "description": f"evidence {eid}"})
            budget -= 1
            block = {
                "id": block_id,
                "kind": "evidence_incorporation",
                "parent_claim": claim_id,
                "children": [eid],
            }
            posterior[claim_id] = assigned()
        else:
            if decomposition_only:
                kind = "decomposition"
            else:
                kind = rng.choice(["decomposition", "decomposition", "substitution"])
            n_children = 1 if kind == "substitution" else rng.randint(1, 3)
            n_children = min(n_children, max(1, budget // 3))
            children = []
            for _ in range(n_children):
                cid = fresh("C")
                claims.append({"id": cid, "statement": f"claim {cid}"})
                children.append(cid)
                frontier.append(cid)
                budget -= 1
            block = {
                "id": block_id,
                "kind": kind,
                "parent_claim": claim_id,
                "children": children,
            }
        maybe_warrant(block)
        blocks.append(block)

    doc = {
        "case": {"id": "random-case", "title": "random case", "top_claim": top},
        "claims": claims,
        "evidence": evidence,
        "blocks": blocks,
        "defeaters": [],
        "residual_doubts": [],
        "assignments": {"posterior": posterior, "warrant_conf": warrant_conf},
    }
    if defeater_count:
        argument_nodes = (
            [c["id"] for c in claims] + [e["id"] for e in evidence] + [b["id"] for b in blocks]
        )
        for k in range(defeater_count):
            doc["defeaters"].append({
                "id": f"D{k + 1}",
                "text": f"doubt {k + 1}",
                "target": rng.choice(argument_nodes),
                "defeater_type": rng.choice(["rebutting", "undermining", "undercutting"]),
                "class": rng.choice(["exploratory", "exact"]),
                "status": rng.choice(["unresolved", "sustained", "refuted"]),
            })
    return doc


def random_graph(rng: random.Random, **kwargs):
    return build_graph(random_case_doc(rng, **kwargs))


def scale_doc_assignments(doc: dict, scale: float) -> dict:
    """Move every assignment toward 1: doubt (1 - a) shrinks by ``scale``."""
    out = {
        **doc,
        "assignments": {
            "posterior": {
                k: 1.0 - (1.0 - v) * scale for k, v in doc["assignments"]["posterior"].items()
            },
            "warrant_conf": {
                k: 1.0 - (1.0 - v) * scale
                for k, v in doc["assignments"]["warrant_conf"].items()
            },
        },
    }
    return out


def total_doubt(doc: dict) -> float:
    return math.fsum(
        1.0 - v
        for section in ("posterior", "warrant_conf")
        for v in doc["assignments"][section].values()
    )
