"""Delphi session engine: rounds, consensus, weighting, repeated runs.

Each round prompts every panel expert with the scenario plus a summary of
the previous round (mean, std and the individual responses). The session
stops when the panel's population standard deviation drops below the
consensus threshold, or after the configured maximum number of rounds.

The final estimate is a weighted mean of the final-round responses with
weight 1 / (sigma_i + epsilon), where sigma_i is the population std of
expert i's responses across the rounds they took part in: consistent
experts count for more. A single-round session uses uniform weights.
"""

from __future__ import annotations

import hashlib
import math
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from ..errors import CaseConfError, SessionFailedError
from .backends import ExpertBackend
from .panel import Panel
from .stats import credible_interval

# one initial request plus up to three re-requests before the expert is
# dropped from the round
MAX_RESPONSE_ATTEMPTS = 4


@dataclass(frozen=True)
class DelphiConfig:
    max_rounds: int = 5
    consensus_sigma: float = 0.10      # on the [0, 1] probability scale
    temperature_hint: float = 1.5
    weight_epsilon: float = 1e-6
    seed: int = 0
    pseudo_counts: int = 10
    interval_level: float = 0.95

    def __post_init__(self):
        if self.max_rounds < 1:
            raise CaseConfError("max_rounds must be >= 1")
        if not 0.0 < self.consensus_sigma < 1.0:
            raise CaseConfError("consensus_sigma must lie in (0, 1)")
        if self.weight_epsilon <= 0.0:
            raise CaseConfError("weight_epsilon must be strictly positive")


@dataclass
class Round:
    number: int
    responses: dict[int, float]
    mean: float
    std: float
    summary_text: str
    dropped: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "responses": {str(k): v for k, v in self.responses.items()},
            "mean": self.mean,
            "std": self.std,
            "summary_text": self.summary_text,
            "dropped": list(self.dropped),
        }


@dataclass
class DelphiSession:
    scenario: str
    panel: Panel
    rounds: list[Round]
    final_estimate: float
    credible_interval: tuple[float, float]
    consensus_reached_at: Optional[int]
    final_weights: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "panel": self.panel.to_dict(),
            "rounds": [r.to_dict() for r in self.rounds],
            "final_estimate": self.final_estimate,
            "credible_interval": list(self.credible_interval),
            "consensus_reached_at": self.consensus_reached_at,
            "final_weights": {str(k): v for k, v in self.final_weights.items()},
        }


def _derived_rng(seed: int, *parts) -> random.Random:
    """Deterministic per-(run, round, expert, attempt) stream.

    Hash-derived so the draw an expert sees does not depend on scheduling
    order; concurrent submission would not perturb transcripts.
    """
    key = "|".join(str(p) for p in (seed, *parts)).encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


def _round_summary(number: int, mean: float, std: float, responses: dict[int, float]) -> str:
    listed = ", ".join(f"{v:.4f}" for v in sorted(responses.values()))
    return f"Round {number}: mean={mean:.4f}, std={std:.4f}, responses=[{listed}]"


def _elicit(
    backend: ExpertBackend,
    scenario: str,
    config: DelphiConfig,
    number: int,
    prior_summary: Optional[str],
    expert,
) -> Optional[float]:
    """One expert's response for one round, or None after exhausted retries."""
    for attempt in range(MAX_RESPONSE_ATTEMPTS):
        rng = _derived_rng(config.seed, "round", number, "expert", expert.index,
                           "attempt", attempt)
        candidate = backend.submit(
            expert.index, number - 1, expert.role, scenario,
            prior_summary, config.temperature_hint, rng,
        )
        if isinstance(candidate, (int, float)) and 0.0 <= candidate <= 1.0:
            return float(candidate)
    return None


def run_session(
    scenario: str,
    panel: Panel,
    config: DelphiConfig,
    backend: ExpertBackend,
    max_workers: int = 1,
) -> DelphiSession:
    """Run one elicitation session to consensus or the round limit.

    With ``max_workers`` > 1 the experts of a round are prompted
    concurrently (useful for remote backends); each round still closes with
    a barrier before aggregation, and because every (expert, round, attempt)
    has its own derived stream the transcript is identical either way.
    """
    rounds: list[Round] = []
    consensus_at: Optional[int] = None
    prior_summary: Optional[str] = None

    for number in range(1, config.max_rounds + 1):
        responses: dict[int, float] = {}
        dropped: list[int] = []
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                values = list(pool.map(
                    lambda expert: _elicit(
                        backend, scenario, config, number, prior_summary, expert
                    ),
                    panel.experts,
                ))
        else:
            values = [
                _elicit(backend, scenario, config, number, prior_summary, expert)
                for expert in panel.experts
            ]
        for expert, value in zip(panel.experts, values):
            if value is None:
                dropped.append(expert.index)
            else:
                responses[expert.index] = value
        if not responses:
            raise SessionFailedError(
                f"round {number}: every expert was dropped", partial=rounds
            )
        values = [responses[i] for i in sorted(responses)]
        mean = statistics.fmean(values)
        std = statistics.pstdev(values)
        summary = _round_summary(number, mean, std, responses)
        rounds.append(Round(
            number=number, responses=responses, mean=mean, std=std,
            summary_text=summary, dropped=tuple(dropped),
        ))
        prior_summary = summary
        if std < config.consensus_sigma:
            consensus_at = number
            break

    final_round = rounds[-1]
    participants = sorted(final_round.responses)
    if len(rounds) == 1:
        weights = {i: 1.0 for i in participants}
    else:
        weights = {}
        for i in participants:
            history = [r.responses[i] for r in rounds if i in r.responses]
            sigma_i = statistics.pstdev(history) if len(history) > 1 else 0.0
            weights[i] = 1.0 / (sigma_i + config.weight_epsilon)
    total = math.fsum(weights.values())
    final_weights = {i: w / total for i, w in weights.items()}
    final_estimate = math.fsum(
        final_weights[i] * final_round.responses[i] for i in participants
    )
    interval = credible_interval(
        final_estimate, pseudo_counts=config.pseudo_counts, level=config.interval_level
    )
    return DelphiSession(
        scenario=scenario,
        panel=panel,
        rounds=rounds,
        final_estimate=final_estimate,
        credible_interval=interval,
        consensus_reached_at=consensus_at,
        final_weights=final_weights,
    )


def format_probability(mean: float, std: float) -> str:
    """Report form for an elicited probability: rounded percentages.

    Rounding avoids conveying overconfidence; 0.71 / 0.06 renders as
    "71% ± 6%".
    """
    return f"{round(mean * 100)}% ± {round(std * 100)}%"


@dataclass
class ProbabilityEstimate:
    mean: float
    std: float
    estimates: tuple[float, ...]

    def formatted(self) -> str:
        return format_probability(self.mean, self.std)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "estimates": list(self.estimates),
            "formatted": self.formatted(),
        }


def estimate_defeater_probability(
    scenario: str,
    panel: Panel,
    config: DelphiConfig,
    backend: ExpertBackend,
    runs: int = 10,
    max_workers: int = 1,
) -> ProbabilityEstimate:
    """Mean and population std of the final estimate over repeated sessions.

    Each run gets its own derived seed stream. A failed session aborts the
    estimate; the completed runs ride along on the raised error.
    """
    if runs < 2:
        raise CaseConfError(f"need at least 2 runs for a spread, got {runs}")
    estimates: list[float] = []
    for k in range(runs):
        run_seed = int.from_bytes(
            hashlib.sha256(f"{config.seed}|run|{k}".encode()).digest()[:8], "big"
        )
        try:
            session = run_session(scenario, panel, replace(config, seed=run_seed),
                                  backend, max_workers=max_workers)
        except SessionFailedError as exc:
            raise SessionFailedError(
                f"run {k + 1} of {runs} failed: {exc}", partial=tuple(estimates)
            ) from exc
        estimates.append(session.final_estimate)
    return ProbabilityEstimate(
        mean=statistics.fmean(estimates),
        std=statistics.pstdev(estimates),
        estimates=tuple(estimates),
    )
