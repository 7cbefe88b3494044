"""Logical validity of every node under the current defeater verdicts.

An unresolved defeater, or a sustained exploratory one, makes its target
UNSUPPORTED; a sustained exact defeater makes it FALSE; refuted defeaters
have no effect. Severity then travels up the support chain (target, its
block, the parent claim, and every ancestor to the top claim), each node
keeping the maximum severity that reaches it.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Mapping

from .errors import DefeaterStateError, UnknownNodeError
from .model import (
    ArgumentGraph,
    Defeater,
    DefeaterClass,
    DefeaterStatus,
)


class ValidityState(enum.IntEnum):
    """Ordered by severity; combining child states takes the maximum."""

    SUPPORTED = 0
    UNSUPPORTED = 1
    FALSE = 2


def resolve_defeater(
    graph: ArgumentGraph, defeater: str, verdict: DefeaterStatus | str
) -> ArgumentGraph:
    """Record a verdict on an unresolved defeater; returns a new graph.

    Only the transitions unresolved -> sustained and unresolved -> refuted
    are legal; anything else signals a workflow error.
    """
    verdict = DefeaterStatus(verdict)
    if verdict is DefeaterStatus.UNRESOLVED:
        raise DefeaterStateError(f"{defeater}: verdict must be sustained or refuted")
    current = graph.defeaters.get(defeater)
    if current is None:
        raise UnknownNodeError(f"unknown defeater {defeater!r}")
    if current.status is not DefeaterStatus.UNRESOLVED:
        raise DefeaterStateError(
            f"{defeater} is already resolved ({current.status.value})"
        )
    return graph.with_defeater(dataclasses.replace(current, status=verdict))


def _defeater_severity(defeater: Defeater) -> ValidityState | None:
    if defeater.status is DefeaterStatus.REFUTED:
        return None
    if defeater.status is DefeaterStatus.UNRESOLVED:
        return ValidityState.UNSUPPORTED
    # sustained
    if defeater.defeater_class is DefeaterClass.EXACT:
        return ValidityState.FALSE
    return ValidityState.UNSUPPORTED


def _walk(graph: ArgumentGraph):
    states: dict[str, ValidityState] = {
        node: ValidityState.SUPPORTED for node in graph.argument_node_ids()
    }
    causes: dict[str, set[str]] = {node: set() for node in states}
    for defeater in graph.defeaters.values():
        severity = _defeater_severity(defeater)
        if severity is None:
            continue
        node: str | None = defeater.target
        if node not in states:
            # Target plays no argument role (lint flags this); nothing to mark.
            continue
        while node is not None:
            states[node] = max(states[node], severity)
            causes[node].add(defeater.id)
            node = graph.parent_of(node)
    return states, causes


def evaluate_validity(graph: ArgumentGraph) -> dict[str, ValidityState]:
    """Validity of every claim, evidence node and block in the graph."""
    states, _ = _walk(graph)
    return states


def validity_report(graph: ArgumentGraph) -> list[dict]:
    """Rows of (node, state, cause chain) for rendering, sorted by node id."""
    states, causes = _walk(graph)
    return [
        {"node": node, "state": states[node].name, "causes": sorted(causes[node])}
        for node in sorted(states)
    ]


def validity_to_names(states: Mapping[str, ValidityState]) -> dict[str, str]:
    return {node: state.name for node, state in states.items()}
