"""Data model for CAE argument graphs.

A case is a directed acyclic graph of claims, argument blocks, evidence,
warrants (side-claims) and attached defeaters. Three block kinds are
supported: decomposition, substitution and evidence incorporation. All
values are immutable; analyses never mutate a graph, they return new ones.
"""

from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import InvalidNodeIdError, UnknownNodeError

_NODE_ID_RE = re.compile(r"^[A-Za-z]\S*$")


def validate_node_id(token: str, where: str = "node") -> str:
    """Check the id token grammar: leading letter, no whitespace, non-empty."""
    if not isinstance(token, str) or not _NODE_ID_RE.match(token):
        raise InvalidNodeIdError(
            f"invalid id {token!r} in {where}: ids start with a letter and "
            "contain no whitespace"
        )
    return token


class BlockKind(str, enum.Enum):
    DECOMPOSITION = "decomposition"
    SUBSTITUTION = "substitution"
    EVIDENCE_INCORPORATION = "evidence_incorporation"


class DefeaterType(str, enum.Enum):
    REBUTTING = "rebutting"          # challenges a claim directly
    UNDERMINING = "undermining"      # challenges evidence
    UNDERCUTTING = "undercutting"    # challenges an inference step


class DefeaterClass(str, enum.Enum):
    EXPLORATORY = "exploratory"      # sustained -> target unsupported
    EXACT = "exact"                  # sustained -> target false


class DefeaterStatus(str, enum.Enum):
    UNRESOLVED = "unresolved"
    SUSTAINED = "sustained"
    REFUTED = "refuted"


class DefeaterProvenance(str, enum.Enum):
    TEAM_INTERNAL = "team_internal"
    ORG_INTERNAL = "org_internal"
    EXTERNAL = "external"


class DoubtCategory(str, enum.Enum):
    DEDUCTIVENESS = "deductiveness"
    EVIDENTIAL = "evidential"
    INTERIOR = "interior"
    CONTEXTUAL = "contextual"


class DoubtSeverity(str, enum.Enum):
    MINOR = "minor"
    SIGNIFICANT = "significant"


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    is_top_level: bool = False
    is_side_claim: bool = False


@dataclass(frozen=True)
class Evidence:
    id: str
    description: str
    provenance: str = ""


@dataclass(frozen=True)
class PropagationAdjustment:
    """Manual adjustment applied after a block's propagation formula.

    ``factor_f`` multiplies the computed value (then the result is clamped to
    [0, 1]); ``override``, when present, replaces the value outright and
    ``factor_f`` is ignored.
    """

    factor_f: float = 1.0
    override: Optional[float] = None


@dataclass(frozen=True)
class ArgumentBlock:
    id: str
    kind: BlockKind
    parent_claim: str
    children: tuple[str, ...]
    warrant: Optional[str] = None
    adjustment: Optional[PropagationAdjustment] = None
    comment: Optional[str] = None


@dataclass(frozen=True)
class Defeater:
    id: str
    text: str
    target: str
    defeater_type: DefeaterType
    defeater_class: DefeaterClass        # serialized under the key "class"
    status: DefeaterStatus = DefeaterStatus.UNRESOLVED
    provenance: DefeaterProvenance = DefeaterProvenance.TEAM_INTERNAL
    prior_sustain_probability: Optional[float] = None
    effort: Optional[float] = None
    refuted_posterior: Optional[Mapping[str, float]] = None
    requires_restructuring: bool = False
    challenges_reasoning_step: bool = False


@dataclass(frozen=True)
class ResidualDoubt:
    id: str
    category: DoubtCategory
    description: str
    severity: Optional[DoubtSeverity] = None
    likelihood: Optional[float | str] = None   # probability or ordinal band
    accepted: bool = False
    acceptance_rationale: str = ""


@dataclass(frozen=True)
class LeafAssignments:
    """Assigned probabilities consumed by confidence propagation.

    ``posterior`` maps each evidence-bearing claim to P(C|E); ``warrant_conf``
    maps each warrant to its confidence. ``prior`` and ``likelihoods`` are
    optional inputs for weight-of-evidence measures only.
    """

    posterior: Mapping[str, float] = field(default_factory=dict)
    warrant_conf: Mapping[str, float] = field(default_factory=dict)
    prior: Optional[Mapping[str, float]] = None
    likelihoods: Optional[Mapping[str, Mapping[str, float]]] = None

    def assigned_ids(self) -> set[str]:
        return set(self.posterior) | set(self.warrant_conf)


@dataclass(frozen=True)
class ArgumentGraph:
    """An immutable, validated safety case.

    The derived indexes are built once by ``build_graph`` and describe the
    single line of support: ``supporting_block`` maps a claim to the block
    that establishes it, ``child_block`` maps a child node (sub-claim or
    evidence) to the block it feeds, and ``warrant_block`` maps a side-claim
    to the block it warrants.
    """

    case_id: str
    title: str
    top_claim: str
    claims: Mapping[str, Claim]
    evidence: Mapping[str, Evidence]
    blocks: Mapping[str, ArgumentBlock]
    defeaters: Mapping[str, Defeater]
    residual_doubts: Mapping[str, ResidualDoubt]
    assignments: LeafAssignments
    supporting_block: Mapping[str, str]
    child_block: Mapping[str, str]
    warrant_block: Mapping[str, str]

    # -- lookups -----------------------------------------------------------

    def node_role(self, node_id: str) -> str:
        if node_id in self.claims:
            return "warrant" if self.claims[node_id].is_side_claim else "claim"
        if node_id in self.evidence:
            return "evidence"
        if node_id in self.blocks:
            return "block"
        if node_id in self.defeaters:
            return "defeater"
        if node_id in self.residual_doubts:
            return "residual_doubt"
        raise UnknownNodeError(f"unknown node {node_id!r}")

    def argument_node_ids(self) -> list[str]:
        """Claims, evidence and blocks, in document order."""
        return [*self.claims, *self.evidence, *self.blocks]

    def parent_of(self, node_id: str) -> Optional[str]:
        """Next node up the support chain, or None at the top claim."""
        if node_id in self.evidence:
            return self.child_block.get(node_id)
        if node_id in self.blocks:
            return self.blocks[node_id].parent_claim
        claim = self.claims.get(node_id)
        if claim is None:
            raise UnknownNodeError(f"unknown node {node_id!r}")
        if claim.is_side_claim:
            return self.warrant_block.get(node_id)
        return self.child_block.get(node_id)

    def defeaters_on(self, target: str) -> list[Defeater]:
        return [d for d in self.defeaters.values() if d.target == target]

    # -- functional updates -------------------------------------------------

    def with_defeater(self, defeater: Defeater) -> "ArgumentGraph":
        """New graph with one defeater replaced (same id, new state)."""
        if defeater.id not in self.defeaters:
            raise UnknownNodeError(f"unknown defeater {defeater.id!r}")
        updated = dict(self.defeaters)
        updated[defeater.id] = defeater
        return dataclasses.replace(self, defeaters=updated)

    def with_assignments(self, assignments: LeafAssignments) -> "ArgumentGraph":
        return dataclasses.replace(self, assignments=assignments)
