"""caseconf: build, validate, and quantify confidence in CAE assurance cases.

The package models safety cases as immutable claims/arguments/evidence
graphs with attached defeaters, evaluates logical validity under defeater
verdicts, propagates probabilistic confidence (sum-of-doubts and product
methods), prioritises defeater investigation, runs Delphi-style expert
elicitations over pluggable backends, and renders decision-maker summaries.
"""

from importlib import resources

__version__ = "0.1.0"

from .confidence import (
    METHODS,
    PRODUCT,
    SUM_OF_DOUBTS,
    ConfidenceValuation,
    diversity_ratio,
    eells,
    keynes,
    propagate,
    uniform_required_confidence,
    whatif,
)
from .defeaters import (
    ChecklistItem,
    PrioritisationPlan,
    PrioritisationWeights,
    checklist,
    impact_of_refutation,
    prioritisation_score,
    prioritisation_sensitivity,
    prioritise,
)
from .document import build_graph, dump_case, graph_to_document, load_case
from .errors import CaseConfError
from .lint import Finding, structural_lint
from .model import (
    ArgumentBlock,
    ArgumentGraph,
    BlockKind,
    Claim,
    Defeater,
    DefeaterClass,
    DefeaterStatus,
    DefeaterType,
    Evidence,
    LeafAssignments,
    PropagationAdjustment,
    ResidualDoubt,
)
from .report import SummaryAxes, sentencing_statement, visual_summary
from .soundness import ValidityState, evaluate_validity, resolve_defeater, validity_report


def example_case_path(name: str = "cyber_fragment") -> str:
    """Filesystem path of a bundled example case document."""
    return str(resources.files("caseconf.data").joinpath(f"{name}.json"))


__all__ = [
    "ArgumentBlock",
    "ArgumentGraph",
    "BlockKind",
    "CaseConfError",
    "ChecklistItem",
    "Claim",
    "ConfidenceValuation",
    "Defeater",
    "DefeaterClass",
    "DefeaterStatus",
    "DefeaterType",
    "Evidence",
    "Finding",
    "LeafAssignments",
    "METHODS",
    "PRODUCT",
    "PrioritisationPlan",
    "PrioritisationWeights",
    "PropagationAdjustment",
    "ResidualDoubt",
    "SUM_OF_DOUBTS",
    "SummaryAxes",
    "ValidityState",
    "build_graph",
    "checklist",
    "diversity_ratio",
    "dump_case",
    "eells",
    "evaluate_validity",
    "example_case_path",
    "graph_to_document",
    "impact_of_refutation",
    "keynes",
    "load_case",
    "prioritisation_score",
    "prioritisation_sensitivity",
    "prioritise",
    "propagate",
    "resolve_defeater",
    "sentencing_statement",
    "structural_lint",
    "uniform_required_confidence",
    "validity_report",
    "visual_summary",
    "whatif",
]
