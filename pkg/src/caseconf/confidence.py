"""Weight-of-evidence measures and probabilistic confidence propagation.

Two propagation methods are supported. For a block with warrant confidence
w and support confidences s1..sn:

* product:        w * s1 * ... * sn            (mutual independence)
* sum of doubts:  w + s1 + ... + sn - n        (conservative lower bound)

Values propagate bottom-up. After each block the optional factor_f is
applied multiplicatively, then the value is clamped to [0, 1] (the pre-clamp
value is kept for diagnostics); an override replaces the value outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from .errors import (
    CaseConfError,
    InvalidAssignmentError,
    MissingAssignmentError,
    MissingWarrantError,
    UndefinedMeasureError,
)
from .lint import MISSING_WARRANT, structural_lint
from .model import ArgumentGraph, BlockKind, LeafAssignments
from .soundness import ValidityState, evaluate_validity

SUM_OF_DOUBTS = "sum_of_doubts"
PRODUCT = "product"
METHODS = (SUM_OF_DOUBTS, PRODUCT)

#: Decimal places used for reported confidences. Refutation impacts are
#: measured on confidences rounded to this precision, which is how such
#: tables are conventionally reported (0.17 -> 0.25 reads as +0.08).
REPORT_DECIMALS = 2


def _check_method(method: str) -> str:
    if method not in METHODS:
        raise CaseConfError(f"unknown propagation method {method!r}; use one of {METHODS}")
    return method


def report_round(value: float) -> float:
    return round(value, REPORT_DECIMALS)


# -- weight-of-evidence measures ---------------------------------------------


def keynes(prior: float, posterior: float) -> float:
    """Log-ratio confirmation measure, base 10: log10(posterior / prior)."""
    if not 0.0 <= prior <= 1.0 or not 0.0 <= posterior <= 1.0:
        raise UndefinedMeasureError("prior and posterior must lie in [0, 1]")
    if prior == 0.0:
        raise UndefinedMeasureError("keynes is undefined for prior = 0")
    if posterior == 0.0:
        raise UndefinedMeasureError("keynes is undefined for posterior = 0")
    return math.log10(posterior / prior)


def eells(prior: float, posterior: float) -> float:
    """Difference confirmation measure: posterior - prior, in [-1, 1]."""
    if not 0.0 <= prior <= 1.0 or not 0.0 <= posterior <= 1.0:
        raise UndefinedMeasureError("prior and posterior must lie in [0, 1]")
    return posterior - prior


def diversity_ratio(p_e2_given_c_and_e1: float, p_e2_given_e1: float) -> float:
    """Proportional confidence boost from adding secondary evidence E2.

    Equals P(E2 | C and E1) / P(E2 | E1): large when E2 is surprising on its
    own but expected given the claim, i.e. when E2 is diverse w.r.t. E1.
    """
    if not 0.0 <= p_e2_given_c_and_e1 <= 1.0 or not 0.0 <= p_e2_given_e1 <= 1.0:
        raise UndefinedMeasureError("conditional probabilities must lie in [0, 1]")
    if p_e2_given_e1 == 0.0:
        raise UndefinedMeasureError("diversity ratio is undefined for P(E2|E1) = 0")
    return p_e2_given_c_and_e1 / p_e2_given_e1


# -- propagation ---------------------------------------------------------------


@dataclass
class ConfidenceValuation:
    """Per-node confidence under one propagation method.

    ``per_node`` holds the clamped values for every computed claim;
    ``raw_per_node`` the pre-clamp values (sum-of-doubts may go negative);
    for an overridden block it keeps the computed value the override replaced.
    ``flags`` marks nodes whose probabilistic value needs a caveat: clamping,
    a warrant assumed 1.0, or a validity state other than SUPPORTED (such
    values are only meaningful for what-if exploration).
    """

    method: str
    per_node: dict[str, float] = field(default_factory=dict)
    raw_per_node: dict[str, float] = field(default_factory=dict)
    adjustments_applied: list[dict] = field(default_factory=list)
    flags: dict[str, list[str]] = field(default_factory=dict)

    def top_value(self, graph: ArgumentGraph) -> float:
        return self.per_node[graph.top_claim]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "per_node": dict(self.per_node),
            "raw_per_node": dict(self.raw_per_node),
            "adjustments_applied": [dict(a) for a in self.adjustments_applied],
            "flags": {k: list(v) for k, v in self.flags.items()},
        }

    def _flag(self, node: str, flag: str) -> None:
        self.flags.setdefault(node, [])
        if flag not in self.flags[node]:
            self.flags[node].append(flag)


def _assigned(mapping: Mapping[str, float], key: str, what: str) -> float:
    if key not in mapping:
        raise MissingAssignmentError(f"no {what} assigned for {key!r}")
    value = mapping[key]
    if not 0.0 <= value <= 1.0:
        raise InvalidAssignmentError(f"{what} for {key!r} is {value!r}, outside [0, 1]")
    return value


def propagate(
    graph: ArgumentGraph,
    assign: LeafAssignments,
    method: str,
    *,
    allow_missing_warrant: bool = False,
) -> ConfidenceValuation:
    """Bottom-up confidence propagation over the whole graph.

    Requires a posterior for every evidence-bearing claim and a confidence
    for every warrant. Blocks that lint flags for a missing warrant are
    rejected unless ``allow_missing_warrant`` is set, in which case the
    warrant is treated as 1.0 and the node is flagged.
    """
    _check_method(method)
    missing = [f.node for f in structural_lint(graph) if f.code == MISSING_WARRANT]
    if missing and not allow_missing_warrant:
        raise MissingWarrantError(
            f"blocks {missing} lack warrants; pass allow_missing_warrant=True to "
            "treat them as confidence 1.0"
        )

    valuation = ConfidenceValuation(method=method)
    visiting: set[str] = set()

    def claim_conf(claim_id: str) -> float:
        if claim_id in valuation.per_node:
            return valuation.per_node[claim_id]
        if claim_id in visiting:  # construction guarantees acyclicity
            raise CaseConfError(f"cyclic support at {claim_id!r}")
        visiting.add(claim_id)
        block_id = graph.supporting_block.get(claim_id)
        if block_id is None:
            raise MissingAssignmentError(
                f"claim {claim_id!r} has no supporting block, so no confidence "
                "can be derived for it"
            )
        block = graph.blocks[block_id]
        if block.warrant is not None:
            warrant_conf = _assigned(assign.warrant_conf, block.warrant, "warrant confidence")
        else:
            warrant_conf = 1.0
            valuation._flag(claim_id, "missing_warrant_assumed_1.0")
        if block.kind is BlockKind.EVIDENCE_INCORPORATION:
            supports = [_assigned(assign.posterior, claim_id, "leaf posterior")]
        else:
            supports = [claim_conf(child) for child in block.children]
        if method == PRODUCT:
            value = warrant_conf * math.prod(supports)
        else:
            value = warrant_conf + math.fsum(supports) - len(supports)

        adjustment = block.adjustment
        if adjustment is not None and adjustment.override is not None:
            raw = value
            value = adjustment.override
            valuation.adjustments_applied.append(
                {"block": block.id, "override": adjustment.override}
            )
        else:
            if adjustment is not None and adjustment.factor_f != 1.0:
                value *= adjustment.factor_f
                valuation.adjustments_applied.append(
                    {"block": block.id, "factor_f": adjustment.factor_f}
                )
            raw = value
            value = min(1.0, max(0.0, value))
            if value != raw:
                valuation._flag(claim_id, "clamped")
        valuation.per_node[claim_id] = value
        valuation.raw_per_node[claim_id] = raw
        visiting.discard(claim_id)
        return value

    for claim_id in graph.supporting_block:
        claim_conf(claim_id)

    for node, state in evaluate_validity(graph).items():
        if node in valuation.per_node and state is not ValidityState.SUPPORTED:
            valuation._flag(node, state.name)

    valuation.flags = {k: valuation.flags[k] for k in sorted(valuation.flags)}
    return valuation


def uniform_required_confidence(target: float, n_assigned: int, method: str) -> float:
    """Uniform per-assignment confidence needed to reach ``target`` overall.

    ``n_assigned`` counts the flattened assigned probabilities (leaf
    posteriors plus all warrants). Inverts the flat conjunction: with the
    sum-of-doubts method target = n*p - (n-1); with the product method
    target = p**n.
    """
    _check_method(method)
    if not 0.0 < target < 1.0:
        raise CaseConfError(f"target must lie in (0, 1), got {target!r}")
    if n_assigned < 1:
        raise CaseConfError(f"n_assigned must be >= 1, got {n_assigned!r}")
    if method == SUM_OF_DOUBTS:
        return (target + n_assigned - 1) / n_assigned
    return target ** (1.0 / n_assigned)


def whatif(
    graph: ArgumentGraph,
    assign: LeafAssignments,
    method: str,
    overrides: Mapping[str, float],
    *,
    allow_missing_warrant: bool = False,
) -> tuple[ConfidenceValuation, float]:
    """Re-propagate with some assignments overridden.

    Returns the overridden valuation and the signed change in top-claim
    confidence. The delta is measured on report-rounded confidences (see
    ``REPORT_DECIMALS``), so a move from 0.17 to 0.25 reads as +0.08.
    """
    _check_method(method)
    posterior = dict(assign.posterior)
    warrant_conf = dict(assign.warrant_conf)
    for node, value in overrides.items():
        if not 0.0 <= value <= 1.0:
            raise InvalidAssignmentError(f"override for {node!r} is {value!r}, outside [0, 1]")
        if node in posterior:
            posterior[node] = value
        elif node in warrant_conf:
            warrant_conf[node] = value
        else:
            raise MissingAssignmentError(
                f"override target {node!r} is not an assigned node"
            )
    baseline = propagate(graph, assign, method, allow_missing_warrant=allow_missing_warrant)
    overridden = propagate(
        graph,
        replace(assign, posterior=posterior, warrant_conf=warrant_conf),
        method,
        allow_missing_warrant=allow_missing_warrant,
    )
    delta = round(
        report_round(overridden.top_value(graph)) - report_round(baseline.top_value(graph)),
        REPORT_DECIMALS,
    )
    return overridden, delta
