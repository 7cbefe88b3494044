"""Multi-round Delphi elicitation over a panel of pluggable expert backends."""

from .backends import (
    ExpertBackend,
    RemoteBackend,
    ScriptedBackend,
    SimulatedBackend,
    extract_probability,
)
from .benchmark import BenchmarkReport, ScenarioResult, run_benchmark
from .panel import Expert, Panel, assign_roles, default_roles
from .session import (
    DelphiConfig,
    DelphiSession,
    ProbabilityEstimate,
    Round,
    estimate_defeater_probability,
    format_probability,
    run_session,
)
from .stats import calibration, credible_interval

__all__ = [
    "BenchmarkReport",
    "DelphiConfig",
    "DelphiSession",
    "Expert",
    "ExpertBackend",
    "Panel",
    "ProbabilityEstimate",
    "RemoteBackend",
    "Round",
    "ScenarioResult",
    "ScriptedBackend",
    "SimulatedBackend",
    "assign_roles",
    "calibration",
    "credible_interval",
    "default_roles",
    "estimate_defeater_probability",
    "extract_probability",
    "format_probability",
    "run_benchmark",
    "run_session",
]
