"""Case document parsing, validation and serialization.

The on-disk syntax is a JSON object with the keys ``case``, ``claims``,
``evidence``, ``blocks``, ``defeaters``, ``residual_doubts`` and
``assignments``. ``build_graph`` is total over that schema: every document
either yields a validated :class:`ArgumentGraph` or raises a diagnostic that
names the offending node.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import (
    BlockArityError,
    CaseStructureError,
    CycleError,
    DanglingReferenceError,
    DuplicateIdError,
    TopClaimError,
)
from .model import (
    ArgumentBlock,
    ArgumentGraph,
    BlockKind,
    Claim,
    Defeater,
    DefeaterClass,
    DefeaterProvenance,
    DefeaterStatus,
    DefeaterType,
    DoubtCategory,
    DoubtSeverity,
    Evidence,
    LeafAssignments,
    PropagationAdjustment,
    ResidualDoubt,
    validate_node_id,
)

_TOP_KEYS = {
    "case", "claims", "evidence", "blocks", "defeaters",
    "residual_doubts", "assignments",
}


def _require(obj: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in obj:
        raise CaseStructureError(f"missing field {key!r}", node=where)
    return obj[key]


def _as_mapping(value: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise CaseStructureError("expected an object", node=where)
    return value


def _as_list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise CaseStructureError("expected a list", node=where)
    return value


def _as_text(value: Any, where: str, key: str) -> str:
    if not isinstance(value, str):
        raise CaseStructureError(f"field {key!r} must be a string", node=where)
    return value


def _as_bool(value: Any, where: str, key: str) -> bool:
    if not isinstance(value, bool):
        raise CaseStructureError(f"field {key!r} must be a boolean", node=where)
    return value


def _as_unit(value: Any, where: str, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CaseStructureError(f"field {key!r} must be a number", node=where)
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise CaseStructureError(f"field {key!r} must lie in [0, 1]", node=where)
    return v


def _as_enum(enum_cls, value: Any, where: str, key: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise CaseStructureError(
            f"field {key!r} must be one of: {allowed} (got {value!r})", node=where
        ) from None


def build_graph(doc: Mapping[str, Any]) -> ArgumentGraph:
    """Validate a parsed case document and return the argument graph.

    Raises a :class:`CaseStructureError` subclass naming the offending node
    for duplicate ids, dangling references, cycles, multiple top-level
    claims, and block-arity violations.
    """
    doc = _as_mapping(doc, "document")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise CaseStructureError(
            f"unknown top-level keys: {sorted(unknown)}", node="document"
        )
    case = _as_mapping(_require(doc, "case", "document"), "case")
    case_id = _as_text(_require(case, "id", "case"), "case", "id")
    title = _as_text(case.get("title", ""), "case", "title")
    top_claim_ref = _as_text(_require(case, "top_claim", "case"), "case", "top_claim")

    seen: set[str] = set()

    def claim_id(raw: Mapping[str, Any], where: str) -> str:
        node_id = validate_node_id(_require(raw, "id", where), where)
        if node_id in seen:
            raise DuplicateIdError("duplicate id", node=node_id)
        seen.add(node_id)
        return node_id

    claims: dict[str, Claim] = {}
    for i, raw in enumerate(_as_list(doc.get("claims", []), "claims")):
        where = f"claims[{i}]"
        raw = _as_mapping(raw, where)
        node_id = claim_id(raw, where)
        claims[node_id] = Claim(
            id=node_id,
            statement=_as_text(_require(raw, "statement", node_id), node_id, "statement"),
            is_top_level=_as_bool(raw.get("is_top_level", False), node_id, "is_top_level"),
            is_side_claim=_as_bool(raw.get("is_side_claim", False), node_id, "is_side_claim"),
        )

    evidence: dict[str, Evidence] = {}
    for i, raw in enumerate(_as_list(doc.get("evidence", []), "evidence")):
        where = f"evidence[{i}]"
        raw = _as_mapping(raw, where)
        node_id = claim_id(raw, where)
        evidence[node_id] = Evidence(
            id=node_id,
            description=_as_text(
                _require(raw, "description", node_id), node_id, "description"
            ),
            provenance=_as_text(raw.get("provenance", ""), node_id, "provenance"),
        )

    blocks: dict[str, ArgumentBlock] = {}
    for i, raw in enumerate(_as_list(doc.get("blocks", []), "blocks")):
        where = f"blocks[{i}]"
        raw = _as_mapping(raw, where)
        node_id = claim_id(raw, where)
        adjustment = None
        if "adjustment" in raw and raw["adjustment"] is not None:
            adj = _as_mapping(raw["adjustment"], node_id)
            factor = adj.get("factor_f", 1.0)
            if isinstance(factor, bool) or not isinstance(factor, (int, float)) or factor <= 0:
                raise CaseStructureError(
                    "field 'factor_f' must be a positive number", node=node_id
                )
            override = adj.get("override")
            if override is not None:
                override = _as_unit(override, node_id, "override")
            adjustment = PropagationAdjustment(factor_f=float(factor), override=override)
        children = tuple(
            _as_text(c, node_id, "children")
            for c in _as_list(_require(raw, "children", node_id), node_id)
        )
        warrant = raw.get("warrant")
        if warrant is not None:
            warrant = _as_text(warrant, node_id, "warrant")
        comment = raw.get("comment")
        if comment is not None:
            comment = _as_text(comment, node_id, "comment")
        blocks[node_id] = ArgumentBlock(
            id=node_id,
            kind=_as_enum(BlockKind, _require(raw, "kind", node_id), node_id, "kind"),
            parent_claim=_as_text(_require(raw, "parent_claim", node_id), node_id, "parent_claim"),
            children=children,
            warrant=warrant,
            adjustment=adjustment,
            comment=comment,
        )

    defeaters: dict[str, Defeater] = {}
    for i, raw in enumerate(_as_list(doc.get("defeaters", []), "defeaters")):
        where = f"defeaters[{i}]"
        raw = _as_mapping(raw, where)
        node_id = claim_id(raw, where)
        prior = raw.get("prior_sustain_probability")
        if prior is not None:
            prior = _as_unit(prior, node_id, "prior_sustain_probability")
        effort = raw.get("effort")
        if effort is not None:
            effort = _as_unit(effort, node_id, "effort")
            if effort == 0.0:
                raise CaseStructureError("field 'effort' must be in (0, 1]", node=node_id)
        refuted_posterior = None
        if raw.get("refuted_posterior") is not None:
            rp = _as_mapping(raw["refuted_posterior"], node_id)
            refuted_posterior = {
                validate_node_id(k, node_id): _as_unit(v, node_id, f"refuted_posterior[{k}]")
                for k, v in rp.items()
            }
        defeaters[node_id] = Defeater(
            id=node_id,
            text=_as_text(_require(raw, "text", node_id), node_id, "text"),
            target=_as_text(_require(raw, "target", node_id), node_id, "target"),
            defeater_type=_as_enum(
                DefeaterType, _require(raw, "defeater_type", node_id), node_id, "defeater_type"
            ),
            defeater_class=_as_enum(
                DefeaterClass, _require(raw, "class", node_id), node_id, "class"
            ),
            status=_as_enum(DefeaterStatus, raw.get("status", "unresolved"), node_id, "status"),
            provenance=_as_enum(
                DefeaterProvenance, raw.get("provenance", "team_internal"), node_id, "provenance"
            ),
            prior_sustain_probability=prior,
            effort=effort,
            refuted_posterior=refuted_posterior,
            requires_restructuring=_as_bool(
                raw.get("requires_restructuring", False), node_id, "requires_restructuring"
            ),
            challenges_reasoning_step=_as_bool(
                raw.get("challenges_reasoning_step", False), node_id, "challenges_reasoning_step"
            ),
        )

    residual_doubts: dict[str, ResidualDoubt] = {}
    for i, raw in enumerate(_as_list(doc.get("residual_doubts", []), "residual_doubts")):
        where = f"residual_doubts[{i}]"
        raw = _as_mapping(raw, where)
        node_id = claim_id(raw, where)
        severity = raw.get("severity")
        if severity is not None:
            severity = _as_enum(DoubtSeverity, severity, node_id, "severity")
        likelihood = raw.get("likelihood")
        if likelihood is not None and not isinstance(likelihood, str):
            likelihood = _as_unit(likelihood, node_id, "likelihood")
        accepted = _as_bool(raw.get("accepted", False), node_id, "accepted")
        rationale = _as_text(raw.get("acceptance_rationale", ""), node_id, "acceptance_rationale")
        if accepted and (severity is None or likelihood is None or not rationale):
            raise CaseStructureError(
                "accepted residual doubts need severity, likelihood and "
                "acceptance_rationale",
                node=node_id,
            )
        residual_doubts[node_id] = ResidualDoubt(
            id=node_id,
            category=_as_enum(DoubtCategory, _require(raw, "category", node_id), node_id, "category"),
            description=_as_text(_require(raw, "description", node_id), node_id, "description"),
            severity=severity,
            likelihood=likelihood,
            accepted=accepted,
            acceptance_rationale=rationale,
        )

    assignments = _parse_assignments(doc.get("assignments", {}))

    graph = _link_and_check(
        case_id, title, top_claim_ref, claims, evidence, blocks,
        defeaters, residual_doubts, assignments,
    )
    return graph


def _parse_assignments(raw: Any) -> LeafAssignments:
    raw = _as_mapping(raw, "assignments")
    unknown = set(raw) - {"posterior", "warrant_conf", "prior", "likelihoods"}
    if unknown:
        raise CaseStructureError(
            f"unknown assignment keys: {sorted(unknown)}", node="assignments"
        )

    def unit_map(key: str) -> dict[str, float]:
        section = _as_mapping(raw.get(key, {}), f"assignments.{key}")
        return {
            k: _as_unit(v, f"assignments.{key}", k) for k, v in section.items()
        }

    likelihoods = None
    if raw.get("likelihoods") is not None:
        likelihoods = {
            claim: {
                term: _as_unit(v, f"assignments.likelihoods.{claim}", term)
                for term, v in _as_mapping(rec, f"assignments.likelihoods.{claim}").items()
            }
            for claim, rec in _as_mapping(raw["likelihoods"], "assignments.likelihoods").items()
        }
    prior = unit_map("prior") if raw.get("prior") is not None else None
    return LeafAssignments(
        posterior=unit_map("posterior"),
        warrant_conf=unit_map("warrant_conf"),
        prior=prior,
        likelihoods=likelihoods,
    )


def _link_and_check(
    case_id, title, top_claim_ref, claims, evidence, blocks,
    defeaters, residual_doubts, assignments,
) -> ArgumentGraph:
    tops = [c.id for c in claims.values() if c.is_top_level]
    if len(tops) != 1:
        raise TopClaimError(
            f"exactly one claim must have is_top_level=true (found {len(tops)}: {tops})",
            node="case",
        )
    if top_claim_ref not in claims:
        raise DanglingReferenceError(
            f"case.top_claim references unknown claim {top_claim_ref!r}", node="case"
        )
    if top_claim_ref != tops[0]:
        raise TopClaimError(
            f"case.top_claim is {top_claim_ref!r} but the top-level claim is {tops[0]!r}",
            node="case",
        )
    if claims[top_claim_ref].is_side_claim:
        raise TopClaimError("the top-level claim cannot be a side-claim", node=top_claim_ref)

    supporting_block: dict[str, str] = {}
    child_block: dict[str, str] = {}
    warrant_block: dict[str, str] = {}

    for block in blocks.values():
        parent = block.parent_claim
        if parent not in claims:
            raise DanglingReferenceError(
                f"parent_claim {parent!r} does not resolve to a claim", node=block.id
            )
        if claims[parent].is_side_claim:
            raise BlockArityError(
                f"parent_claim {parent!r} is a side-claim; side-claim confidence "
                "is assigned directly, not argued by a block",
                node=block.id,
            )
        if parent in supporting_block:
            raise BlockArityError(
                f"claim {parent!r} already has supporting block "
                f"{supporting_block[parent]!r} (single line of support)",
                node=block.id,
            )
        supporting_block[parent] = block.id

        if not block.children:
            raise BlockArityError("block has no children", node=block.id)
        if block.kind is BlockKind.EVIDENCE_INCORPORATION:
            if len(block.children) != 1 or block.children[0] not in evidence:
                raise BlockArityError(
                    "evidence_incorporation needs exactly one child, an evidence node",
                    node=block.id,
                )
        elif block.kind is BlockKind.SUBSTITUTION:
            if len(block.children) != 1 or block.children[0] not in claims:
                raise BlockArityError(
                    "substitution needs exactly one child, a claim", node=block.id
                )
        else:  # decomposition
            bad = [c for c in block.children if c not in claims]
            if bad:
                raise BlockArityError(
                    f"decomposition children must be claims (bad: {bad})", node=block.id
                )
        for child in block.children:
            if child in claims and claims[child].is_side_claim:
                raise BlockArityError(
                    f"side-claim {child!r} cannot be a block child", node=block.id
                )
            if child == parent:
                raise CycleError(f"block lists its parent {parent!r} as a child", node=block.id)
            if child in child_block:
                raise BlockArityError(
                    f"node {child!r} is already a child of block {child_block[child]!r}",
                    node=block.id,
                )
            child_block[child] = block.id
        if block.warrant is not None:
            if block.warrant not in claims:
                raise DanglingReferenceError(
                    f"warrant {block.warrant!r} does not resolve to a claim", node=block.id
                )
            if not claims[block.warrant].is_side_claim:
                raise BlockArityError(
                    f"warrant {block.warrant!r} must be a side-claim", node=block.id
                )
            if block.warrant in warrant_block:
                raise BlockArityError(
                    f"side-claim {block.warrant!r} already warrants block "
                    f"{warrant_block[block.warrant]!r}",
                    node=block.id,
                )
            warrant_block[block.warrant] = block.id

    for ev in evidence.values():
        if ev.id not in child_block:
            raise BlockArityError(
                "evidence must be incorporated by exactly one block", node=ev.id
            )
    for claim in claims.values():
        if claim.is_side_claim and claim.id not in warrant_block:
            raise BlockArityError(
                "side-claim must be attached to exactly one block", node=claim.id
            )

    all_ids = set(claims) | set(evidence) | set(blocks) | set(defeaters) | set(residual_doubts)
    for d in defeaters.values():
        if d.target not in all_ids:
            raise DanglingReferenceError(
                f"defeater target {d.target!r} does not exist", node=d.id
            )
        for k in d.refuted_posterior or {}:
            if k not in all_ids:
                raise DanglingReferenceError(
                    f"refuted_posterior references unknown node {k!r}", node=d.id
                )

    for section_name, section in (
        ("posterior", assignments.posterior),
        ("warrant_conf", assignments.warrant_conf),
        ("prior", assignments.prior or {}),
        ("likelihoods", assignments.likelihoods or {}),
    ):
        for k in section:
            if k not in all_ids:
                raise DanglingReferenceError(
                    f"assignments.{section_name} references unknown node {k!r}",
                    node="assignments",
                )

    _check_acyclic(claims, evidence, blocks, child_block, warrant_block)

    return ArgumentGraph(
        case_id=case_id,
        title=title,
        top_claim=top_claim_ref,
        claims=claims,
        evidence=evidence,
        blocks=blocks,
        defeaters=defeaters,
        residual_doubts=residual_doubts,
        assignments=assignments,
        supporting_block=supporting_block,
        child_block=child_block,
        warrant_block=warrant_block,
    )


def _check_acyclic(claims, evidence, blocks, child_block, warrant_block) -> None:
    """DFS over the support relation (child -> block -> parent claim, and
    warrant -> block). A cycle means some node transitively supports itself."""

    def outgoing(node: str) -> list[str]:
        if node in blocks:
            return [blocks[node].parent_claim]
        nxt = child_block.get(node) or warrant_block.get(node)
        return [nxt] if nxt else []

    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys([*claims, *evidence, *blocks], WHITE)
    for start in colour:
        if colour[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        colour[start] = GREY
        while stack:
            node, idx = stack[-1]
            succ = outgoing(node)
            if idx < len(succ):
                stack[-1] = (node, idx + 1)
                nxt = succ[idx]
                if colour[nxt] == GREY:
                    raise CycleError(
                        f"cycle detected through {nxt!r}: a node supports itself",
                        node=nxt,
                    )
                if colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, 0))
            else:
                colour[node] = BLACK
                stack.pop()


# -- serialization -----------------------------------------------------------


def graph_to_document(graph: ArgumentGraph) -> dict:
    """Serialize back to the case-document object model (round-trip safe)."""
    doc: dict[str, Any] = {
        "case": {"id": graph.case_id, "title": graph.title, "top_claim": graph.top_claim},
        "claims": [
            {
                "id": c.id,
                "statement": c.statement,
                "is_top_level": c.is_top_level,
                "is_side_claim": c.is_side_claim,
            }
            for c in graph.claims.values()
        ],
        "evidence": [
            {"id": e.id, "description": e.description, "provenance": e.provenance}
            for e in graph.evidence.values()
        ],
        "blocks": [],
        "defeaters": [],
        "residual_doubts": [],
        "assignments": {},
    }
    for b in graph.blocks.values():
        raw: dict[str, Any] = {
            "id": b.id,
            "kind": b.kind.value,
            "parent_claim": b.parent_claim,
            "children": list(b.children),
        }
        if b.warrant is not None:
            raw["warrant"] = b.warrant
        if b.adjustment is not None:
            adj: dict[str, Any] = {"factor_f": b.adjustment.factor_f}
            if b.adjustment.override is not None:
                adj["override"] = b.adjustment.override
            raw["adjustment"] = adj
        if b.comment is not None:
            raw["comment"] = b.comment
        doc["blocks"].append(raw)
    for d in graph.defeaters.values():
        raw = {
            "id": d.id,
            "text": d.text,
            "target": d.target,
            "defeater_type": d.defeater_type.value,
            "class": d.defeater_class.value,
            "status": d.status.value,
            "provenance": d.provenance.value,
            "requires_restructuring": d.requires_restructuring,
            "challenges_reasoning_step": d.challenges_reasoning_step,
        }
        if d.prior_sustain_probability is not None:
            raw["prior_sustain_probability"] = d.prior_sustain_probability
        if d.effort is not None:
            raw["effort"] = d.effort
        if d.refuted_posterior is not None:
            raw["refuted_posterior"] = dict(d.refuted_posterior)
        doc["defeaters"].append(raw)
    for rd in graph.residual_doubts.values():
        raw = {
            "id": rd.id,
            "category": rd.category.value,
            "description": rd.description,
            "accepted": rd.accepted,
            "acceptance_rationale": rd.acceptance_rationale,
        }
        if rd.severity is not None:
            raw["severity"] = rd.severity.value
        if rd.likelihood is not None:
            raw["likelihood"] = rd.likelihood
        doc["residual_doubts"].append(raw)
    assignments: dict[str, Any] = {
        "posterior": dict(graph.assignments.posterior),
        "warrant_conf": dict(graph.assignments.warrant_conf),
    }
    if graph.assignments.prior is not None:
        assignments["prior"] = dict(graph.assignments.prior)
    if graph.assignments.likelihoods is not None:
        assignments["likelihoods"] = {
            k: dict(v) for k, v in graph.assignments.likelihoods.items()
        }
    doc["assignments"] = assignments
    return doc


def load_case(path: str | Path) -> ArgumentGraph:
    """Read a case document from a JSON file and build the graph."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseStructureError(f"not valid JSON: {exc}", node=str(path)) from exc
    return build_graph(doc)


def dump_case(graph: ArgumentGraph, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_document(graph), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def canonical_json(obj: Any) -> str:
    """Deterministic JSON used wherever byte-stable output is promised."""
    return json.dumps(obj, indent=2, sort_keys=True)
