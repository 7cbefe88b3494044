"""Benchmarking the elicitation pipeline against recorded forecast scenarios.

Scenario files are local fixtures: a JSON list of entries with an id, a
description, a resolution date, a reference aggregate estimate, and the
resolved outcome (0, 1, or "unresolved"). Live forecasting platforms are
deliberately not fetched.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from ..errors import ScenariosFileError
from .backends import ExpertBackend
from .panel import Panel
from .session import DelphiConfig, run_session
from .stats import calibration

METRIC = "brier"


@dataclass
class ScenarioResult:
    id: str
    estimate: float
    interval: tuple[float, float]
    reference_estimate: float
    outcome: object  # 0, 1 or "unresolved"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "estimate": self.estimate,
            "interval": list(self.interval),
            "reference_estimate": self.reference_estimate,
            "outcome": self.outcome,
        }


@dataclass
class BenchmarkReport:
    per_scenario: list[ScenarioResult]
    calibration_ours: Optional[float]
    calibration_reference: Optional[float]
    skipped: list[dict]
    metric: str = METRIC

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "per_scenario": [s.to_dict() for s in self.per_scenario],
            "calibration_ours": self.calibration_ours,
            "calibration_reference": self.calibration_reference,
            "skipped": [dict(s) for s in self.skipped],
        }


def _validate_entry(entry: object, index: int) -> dict:
    if not isinstance(entry, dict):
        raise ValueError(f"entry {index} is not an object")
    for key in ("id", "description", "resolution_date", "reference_estimate", "outcome"):
        if key not in entry:
            raise ValueError(f"entry {index} is missing {key!r}")
    ref = entry["reference_estimate"]
    if isinstance(ref, bool) or not isinstance(ref, (int, float)) or not 0.0 <= ref <= 1.0:
        raise ValueError(f"entry {index}: reference_estimate must lie in [0, 1]")
    if entry["outcome"] not in (0, 1, "unresolved"):
        raise ValueError(f"entry {index}: outcome must be 0, 1 or 'unresolved'")
    return entry


def run_benchmark(
    scenarios_file: str | Path,
    panel: Panel,
    config: DelphiConfig,
    backend: ExpertBackend,
    max_workers: int = 1,
) -> BenchmarkReport:
    """Run a session per scenario and compare calibration with the reference.

    Malformed entries are skipped with a warning; an empty or unreadable
    file is an error. Calibration is the mean Brier score over the resolved
    scenarios, for our estimates and the reference estimates alike.
    """
    path = Path(scenarios_file)
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ScenariosFileError(f"scenarios file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ScenariosFileError(f"scenarios file is not valid JSON: {exc}") from exc
    if not isinstance(entries, list) or not entries:
        raise ScenariosFileError(f"scenarios file {path} holds no scenarios")

    results: list[ScenarioResult] = []
    skipped: list[dict] = []
    for index, raw in enumerate(entries):
        try:
            entry = _validate_entry(raw, index)
        except ValueError as exc:
            warnings.warn(f"skipping malformed scenario: {exc}", stacklevel=2)
            skipped.append({"index": index, "reason": str(exc)})
            continue
        seed = int.from_bytes(
            hashlib.sha256(f"{config.seed}|scenario|{entry['id']}".encode()).digest()[:8],
            "big",
        )
        session = run_session(
            entry["description"], panel, replace(config, seed=seed), backend,
            max_workers=max_workers,
        )
        results.append(ScenarioResult(
            id=str(entry["id"]),
            estimate=session.final_estimate,
            interval=session.credible_interval,
            reference_estimate=float(entry["reference_estimate"]),
            outcome=entry["outcome"],
        ))
    if not results:
        raise ScenariosFileError(
            f"scenarios file {path} yielded no usable scenarios "
            f"({len(skipped)} skipped)"
        )

    resolved = [r for r in results if r.outcome in (0, 1)]
    calibration_ours = calibration_reference = None
    if resolved:
        outcomes = [int(r.outcome) for r in resolved]
        calibration_ours = calibration([r.estimate for r in resolved], outcomes)
        calibration_reference = calibration(
            [r.reference_estimate for r in resolved], outcomes
        )
    return BenchmarkReport(
        per_scenario=results,
        calibration_ours=calibration_ours,
        calibration_reference=calibration_reference,
        skipped=skipped,
    )
