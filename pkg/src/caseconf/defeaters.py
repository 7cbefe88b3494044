"""Defeater lifecycle analytics.

Prioritisation follows a three-step strategy: defeaters that challenge a
reasoning step come first (logical soundness is paramount), then those whose
sustaining would force a restructuring, and the remainder are ranked by a
weighted benefit/cost score

    (w_probability * probability + w_impact * impact) / (w_effort * effort)

where impact is the gain in top-claim confidence if the defeater were
refuted, probability the prior that it would be sustained, and effort a
relative 0-1 assessment of the work needed to resolve it.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional

from .confidence import whatif
from .errors import CaseConfError, ImpactUnavailableError, UnknownNodeError
from .model import ArgumentGraph, DefeaterStatus, LeafAssignments


@dataclass(frozen=True)
class PrioritisationWeights:
    w_probability: float = 1.0
    w_impact: float = 1.0
    w_effort: float = 1.0

    def __post_init__(self):
        for name in ("w_probability", "w_impact", "w_effort"):
            if getattr(self, name) <= 0:
                raise CaseConfError(f"{name} must be strictly positive")

    def to_dict(self) -> dict:
        return {
            "w_probability": self.w_probability,
            "w_impact": self.w_impact,
            "w_effort": self.w_effort,
        }


UNIT_WEIGHTS = PrioritisationWeights()

INDEPENDENCE_NOTE = (
    "Ranking assumes the defeaters are mutually independent; interdependent "
    "defeaters need a joint assessment."
)


@dataclass(frozen=True)
class ScoredDefeater:
    id: str
    probability: float
    impact: float
    effort: float
    score: float

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "probability": self.probability,
            "impact": self.impact,
            "effort": self.effort,
            "score": self.score,
        }


@dataclass
class PrioritisationPlan:
    stage1: list[str]
    stage2: list[str]
    stage3: list[ScoredDefeater]
    unscoreable: list[dict]
    weights: PrioritisationWeights
    rationale: dict[str, str] = field(default_factory=dict)
    assumptions: str = INDEPENDENCE_NOTE

    def stage3_order(self) -> list[str]:
        return [entry.id for entry in self.stage3]

    def to_dict(self) -> dict:
        return {
            "assumptions": self.assumptions,
            "weights": self.weights.to_dict(),
            "stage1": list(self.stage1),
            "stage2": list(self.stage2),
            "stage3": [entry.to_dict() for entry in self.stage3],
            "unscoreable": [dict(u) for u in self.unscoreable],
            "rationale": dict(self.rationale),
        }


def impact_of_refutation(
    graph: ArgumentGraph,
    assign: LeafAssignments,
    method: str,
    defeater: str,
) -> float:
    """Change in top-claim confidence if the defeater were refuted.

    Propagates the baseline, then propagates with the defeater's
    counterfactual refuted posteriors substituted, and returns the top
    difference (measured at report precision). Counterfactuals are analyst
    inputs; the tool never invents them. A negative impact is allowed but
    warned about, since refutation is expected to raise confidence.
    """
    d = graph.defeaters.get(defeater)
    if d is None:
        raise UnknownNodeError(f"unknown defeater {defeater!r}")
    if not d.refuted_posterior:
        raise ImpactUnavailableError(
            f"defeater {defeater!r} has no refuted_posterior; supply the "
            "counterfactual leaf posteriors to compute its impact"
        )
    _, delta = whatif(graph, assign, method, d.refuted_posterior)
    if delta < 0:
        warnings.warn(
            f"refuting {defeater} lowers top-claim confidence by {-delta}; "
            "check its counterfactual posteriors",
            stacklevel=2,
        )
    return delta


def prioritisation_score(
    probability: float,
    impact: float,
    effort: float,
    weights: PrioritisationWeights = UNIT_WEIGHTS,
) -> float:
    """Weighted benefit/cost score for one defeater."""
    if effort <= 0:
        raise CaseConfError("effort must be strictly positive")
    return (
        weights.w_probability * probability + weights.w_impact * impact
    ) / (weights.w_effort * effort)


def prioritise(
    graph: ArgumentGraph,
    assign: LeafAssignments,
    method: str,
    weights: PrioritisationWeights = UNIT_WEIGHTS,
) -> PrioritisationPlan:
    """Order the unresolved defeaters for investigation.

    Stage 1: challenges to reasoning steps. Stage 2: defeaters whose
    sustaining would require restructuring (and are not already in stage 1).
    Stage 3: the remainder, scored and sorted descending (ties broken by
    ascending id). Defeaters missing a probability, effort or counterfactual
    land in ``unscoreable`` instead of failing the plan.
    """
    plan = PrioritisationPlan(
        stage1=[], stage2=[], stage3=[], unscoreable=[], weights=weights
    )
    scored: list[ScoredDefeater] = []
    for d in sorted(graph.defeaters.values(), key=lambda d: d.id):
        if d.status is not DefeaterStatus.UNRESOLVED:
            continue
        if d.challenges_reasoning_step:
            plan.stage1.append(d.id)
            plan.rationale[d.id] = (
                "challenges a reasoning step: logical soundness comes before "
                "probabilistic ranking"
            )
            continue
        if d.requires_restructuring:
            plan.stage2.append(d.id)
            plan.rationale[d.id] = (
                "sustaining it would require restructuring the argument or "
                "wide-scope system modification"
            )
            continue
        missing = []
        if d.prior_sustain_probability is None:
            missing.append("prior_sustain_probability")
        if d.effort is None:
            missing.append("effort")
        if not d.refuted_posterior:
            missing.append("refuted_posterior")
        if missing:
            reason = f"missing {', '.join(missing)}"
            plan.unscoreable.append({"id": d.id, "reason": reason})
            plan.rationale[d.id] = f"cannot be scored: {reason}"
            continue
        impact = impact_of_refutation(graph, assign, method, d.id)
        score = prioritisation_score(d.prior_sustain_probability, impact, d.effort, weights)
        scored.append(ScoredDefeater(
            id=d.id,
            probability=d.prior_sustain_probability,
            impact=impact,
            effort=d.effort,
            score=score,
        ))
        plan.rationale[d.id] = (
            f"score {score:.2f} from probability {d.prior_sustain_probability}, "
            f"impact {impact}, effort {d.effort}"
        )
    plan.stage3 = sorted(scored, key=lambda entry: (-entry.score, entry.id))
    return plan


def prioritisation_sensitivity(
    graph: ArgumentGraph,
    assign: LeafAssignments,
    method: str,
    weight_grid: Iterable[PrioritisationWeights],
) -> list[dict]:
    """Re-run prioritisation over a caller-supplied weight grid.

    Returns one row per weight vector with the resulting stage-3 order, so
    order changes across the grid are easy to spot. No default grid is
    provided: choosing the sweep is the analyst's call.
    """
    rows = []
    for weights in weight_grid:
        plan = prioritise(graph, assign, method, weights)
        rows.append({"weights": weights.to_dict(), "order": plan.stage3_order()})
    return rows


@dataclass(frozen=True)
class ChecklistItem:
    category: str
    name: str
    prompt: str
    example: str

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "name": self.name,
            "prompt": self.prompt,
            "example": self.example,
        }


@lru_cache(maxsize=1)
def _load_checklist() -> tuple[ChecklistItem, ...]:
    raw = json.loads(
        resources.files("caseconf.data").joinpath("defeater_checklist.json").read_text("utf-8")
    )
    return tuple(ChecklistItem(**item) for item in raw["items"])


def checklist(category: Optional[str] = None) -> list[ChecklistItem]:
    """The bundled defeater checklist, optionally filtered by category.

    Four categories are shipped (fallacious reasoning, future-related
    uncertainty, completeness uncertainty, cognitive biases). An unknown
    category yields an empty list.
    """
    items = list(_load_checklist())
    if category is None:
        return items
    wanted = category.casefold()
    return [item for item in items if item.category.casefold() == wanted]
