"""Structural linting of argument graphs.

Lint never fails and never mutates: it reports, as a deterministic sorted
list, the places where a well-formed graph still falls short of a complete
deductive case (deductive blocks without warrants, claims with no line of
support, defeaters aimed at nodes that play no argument role).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ArgumentGraph, BlockKind

MISSING_WARRANT = "missing_warrant"
UNSUPPORTED_LEAF = "unsupported_leaf"
DEFEATER_BAD_TARGET = "defeater_bad_target"


@dataclass(frozen=True, order=True)
class Finding:
    severity: str
    node: str
    code: str
    message: str


def structural_lint(graph: ArgumentGraph) -> list[Finding]:
    """Return lint findings as a sorted, duplicate-free list."""
    findings: set[Finding] = set()

    for block in graph.blocks.values():
        if block.kind is BlockKind.EVIDENCE_INCORPORATION:
            continue
        if block.warrant is None:
            findings.add(Finding(
                severity="warning",
                node=block.id,
                code=MISSING_WARRANT,
                message=(
                    f"{block.kind.value} block lacks a warrant side-claim, so the "
                    "deductive step cannot be closed"
                ),
            ))

    for claim in graph.claims.values():
        if claim.is_side_claim:
            continue
        if claim.id not in graph.supporting_block:
            findings.add(Finding(
                severity="error",
                node=claim.id,
                code=UNSUPPORTED_LEAF,
                message="claim has no supporting block and no evidence",
            ))

    argument_roles = set(graph.claims) | set(graph.evidence) | set(graph.blocks)
    for defeater in graph.defeaters.values():
        if defeater.target not in argument_roles:
            findings.add(Finding(
                severity="warning",
                node=defeater.id,
                code=DEFEATER_BAD_TARGET,
                message=(
                    f"defeater targets {defeater.target!r}, which is not a claim, "
                    "evidence, warrant or block"
                ),
            ))

    return sorted(findings)
