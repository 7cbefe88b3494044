"""Decision-maker outputs: the multi-factor visual summary and the
sentencing statement.

Both outputs are pure functions of their inputs, byte-stable across runs.
Risk is framed negatively throughout: the summary reports residual doubt,
never a percentage of safety.
"""

from __future__ import annotations

import textwrap
from dataclasses import dataclass
from typing import Mapping
from xml.sax.saxutils import escape

from .confidence import ConfidenceValuation
from .errors import CaseConfError
from .model import ArgumentGraph, DefeaterStatus
from .soundness import ValidityState, evaluate_validity

ORDINAL_MAX = 5

UNSUPPORTED_STAMP = "LOGICALLY {state} — confidence shown for what-if only"


@dataclass(frozen=True)
class SummaryAxes:
    """The four communication axes of the visual summary.

    The three ordinal axes are analyst judgements on a 1-5 scale; nothing in
    the case derives them. Quantified confidence carries its propagation
    method label.
    """

    evidence_quality: int
    argumentation_quality: int
    scientific_agreement: int
    quantified_confidence: float
    method: str

    def __post_init__(self):
        for name in ("evidence_quality", "argumentation_quality", "scientific_agreement"):
            value = getattr(self, name)
            if not isinstance(value, int) or not 1 <= value <= ORDINAL_MAX:
                raise CaseConfError(f"{name} must be an integer in 1..{ORDINAL_MAX}")
        if not 0.0 <= self.quantified_confidence <= 1.0:
            raise CaseConfError("quantified_confidence must lie in [0, 1]")

    @classmethod
    def from_valuation(
        cls,
        graph: ArgumentGraph,
        valuation: ConfidenceValuation,
        evidence_quality: int,
        argumentation_quality: int,
        scientific_agreement: int,
    ) -> "SummaryAxes":
        return cls(
            evidence_quality=evidence_quality,
            argumentation_quality=argumentation_quality,
            scientific_agreement=scientific_agreement,
            quantified_confidence=valuation.top_value(graph),
            method=valuation.method,
        )


def _bar(x: float, y: float, fraction: float, label: str, value_text: str) -> list[str]:
    width = 260.0
    filled = round(width * fraction, 2)
    return [
        f'<text x="{x}" y="{y + 14}" class="label">{escape(label)}</text>',
        f'<rect x="{x + 240}" y="{y}" width="{width}" height="18" class="track"/>',
        f'<rect x="{x + 240}" y="{y}" width="{filled}" height="18" class="fill"/>',
        f'<text x="{x + 240 + width + 12}" y="{y + 14}" class="value">{escape(value_text)}</text>',
    ]


def visual_summary(
    graph: ArgumentGraph,
    valuation: ConfidenceValuation,
    axes: SummaryAxes,
) -> tuple[str, dict]:
    """Render the multi-factor summary as an SVG document plus a record.

    The SVG shows the four labelled axis bars, the top-level claim verbatim,
    the quantified confidence with its method, and a caveat block listing
    unresolved defeaters and accepted residual doubts. If the top claim is
    not logically SUPPORTED the summary is stamped accordingly.
    """
    top_state = evaluate_validity(graph)[graph.top_claim]
    claim_text = graph.claims[graph.top_claim].statement
    unresolved = sorted(
        d.id for d in graph.defeaters.values() if d.status is DefeaterStatus.UNRESOLVED
    )
    accepted = sorted(
        (rd.id, rd.category.value) for rd in graph.residual_doubts.values() if rd.accepted
    )
    confidence_text = f"{axes.quantified_confidence:.2f} ({axes.method})"
    residual_doubt = 1.0 - axes.quantified_confidence

    lines: list[str] = []
    lines.append('<svg xmlns="http://www.w3.org/2000/svg" width="640" height="460" '
                 'viewBox="0 0 640 460" version="1.1">')
    lines.append("<style>"
                 "text{font-family:Helvetica,Arial,sans-serif;font-size:13px;fill:#1a1a1a}"
                 ".title{font-size:16px;font-weight:bold}"
                 ".claim{font-style:italic}"
                 ".label{font-weight:bold}"
                 ".value{fill:#333}"
                 ".caveat{fill:#5a1a1a}"
                 ".stamp{fill:#b00020;font-weight:bold}"
                 ".track{fill:#e5e5e5}"
                 ".fill{fill:#4a7fb5}"
                 "</style>")
    lines.append('<text x="20" y="30" class="title">Safety case confidence summary</text>')
    y = 52
    for chunk in textwrap.wrap(f"Top-level claim: {claim_text}", width=78) or [""]:
        lines.append(f'<text x="20" y="{y}" class="claim">{escape(chunk)}</text>')
        y += 18
    y += 8
    if top_state is not ValidityState.SUPPORTED:
        stamp = UNSUPPORTED_STAMP.format(state=top_state.name)
        lines.append(f'<text x="20" y="{y}" class="stamp">{escape(stamp)}</text>')
        y += 22
    for label, fraction, value_text in (
        ("Evidence quality", axes.evidence_quality / ORDINAL_MAX,
         f"{axes.evidence_quality}/{ORDINAL_MAX}"),
        ("Quality of argumentation", axes.argumentation_quality / ORDINAL_MAX,
         f"{axes.argumentation_quality}/{ORDINAL_MAX}"),
        ("Degree of scientific agreement", axes.scientific_agreement / ORDINAL_MAX,
         f"{axes.scientific_agreement}/{ORDINAL_MAX}"),
        ("Quantified confidence", axes.quantified_confidence, confidence_text),
    ):
        lines.extend(_bar(20, y, fraction, label, value_text))
        y += 30
    y += 10
    lines.append(
        f'<text x="20" y="{y}" class="caveat">Residual doubt in the top-level claim: '
        f'{residual_doubt:.2f} (risk framing: doubt, not safety)</text>'
    )
    y += 20
    defeater_text = ", ".join(unresolved) if unresolved else "none"
    lines.append(
        f'<text x="20" y="{y}" class="caveat">Unresolved defeaters: {escape(defeater_text)}</text>'
    )
    y += 20
    doubt_text = (
        ", ".join(f"{rid} ({cat})" for rid, cat in accepted) if accepted else "none"
    )
    lines.append(
        f'<text x="20" y="{y}" class="caveat">Accepted residual doubts: {escape(doubt_text)}</text>'
    )
    lines.append("</svg>")
    svg = "\n".join(lines) + "\n"

    record = {
        "claim": claim_text,
        "validity": top_state.name,
        "axes": {
            "evidence_quality": axes.evidence_quality,
            "argumentation_quality": axes.argumentation_quality,
            "scientific_agreement": axes.scientific_agreement,
            "quantified_confidence": axes.quantified_confidence,
            "method": axes.method,
        },
        "confidence_text": confidence_text,
        "residual_doubt": residual_doubt,
        "framing": "negative",
        "unresolved_defeaters": unresolved,
        "accepted_residual_doubts": [
            {"id": rid, "category": cat} for rid, cat in accepted
        ],
        "stamp": (
            UNSUPPORTED_STAMP.format(state=top_state.name)
            if top_state is not ValidityState.SUPPORTED else None
        ),
    }
    return svg, record


#: The eight clause stems of the sentencing statement, in fixed order.
SENTENCING_CLAUSES: tuple[tuple[str, str], ...] = (
    ("sound_judgement", "I believe my judgement of this case is sound and valid because"),
    ("context_criticality", "I understand the context and criticality of the decision"),
    ("system_understanding", "I understand the system"),
    ("reasoning_thread", "I find a clear thread of reasoning from evidence to claim"),
    ("evidence_sufficiency",
     "Evidence provided is sufficient/insufficient for evidence-based decision making"),
    ("doubts_explored", "I have actively explored doubts"),
    ("disproof_evidence",
     "I have also identified what evidence would be capable of disproving"),
    ("biases_addressed", "I have considered and addressed biases and fallacies"),
)

NOT_PROVIDED = "[NOT PROVIDED]"


def sentencing_statement(
    graph: ArgumentGraph,
    valuation: ConfidenceValuation,
    judgements: Mapping[str, str],
) -> str:
    """Fill the fixed evaluator's statement template.

    ``judgements`` supplies the eight clause bodies by key (see
    ``SENTENCING_CLAUSES``). Missing clauses are rendered as a flagged
    placeholder rather than dropped. Counts of defeaters by status and
    residual doubts by category are appended automatically.
    """
    unknown = set(judgements) - {key for key, _ in SENTENCING_CLAUSES}
    if unknown:
        raise CaseConfError(f"unknown sentencing clause keys: {sorted(unknown)}")
    claim_text = graph.claims[graph.top_claim].statement
    lines = [
        "On the basis of this case and an examination of other relevant "
        f"documentation, I judge the proposed system satisfies the claim that "
        f"‘{claim_text}’.",
        "",
    ]
    missing = 0
    for key, stem in SENTENCING_CLAUSES:
        body = judgements.get(key, "").strip()
        if not body:
            body = NOT_PROVIDED
            missing += 1
        lines.append(f"- {stem}... {body}")
    lines.append("")

    by_status = {status: 0 for status in DefeaterStatus}
    for d in graph.defeaters.values():
        by_status[d.status] += 1
    lines.append(
        "Defeaters: "
        + ", ".join(f"{by_status[s]} {s.value} defeaters" for s in DefeaterStatus)
        + "."
    )
    by_category: dict[str, int] = {}
    for rd in graph.residual_doubts.values():
        by_category[rd.category.value] = by_category.get(rd.category.value, 0) + 1
    if by_category:
        listed = ", ".join(f"{v} {k}" for k, v in sorted(by_category.items()))
        lines.append(f"Residual doubts: {listed}.")
    else:
        lines.append("Residual doubts: none recorded.")
    lines.append(
        f"Quantified confidence in the claim: {valuation.top_value(graph):.2f} "
        f"({valuation.method})."
    )
    if missing:
        lines.append(f"FLAG: {missing} clause(s) not provided.")
    return "\n".join(lines) + "\n"
