"""Credible intervals and calibration scoring for elicited probabilities."""

from __future__ import annotations

import math
from typing import Sequence

from scipy import stats as _scipy_stats

from ..errors import CaseConfError


def credible_interval(
    p: float, pseudo_counts: int = 10, level: float = 0.95
) -> tuple[float, float]:
    """Equal-tailed Bayesian interval for an elicited probability.

    A Beta(1, 1) prior is updated with ``pseudo_counts`` fractional
    observations, p*k successes and (1-p)*k failures, giving the posterior
    Beta(1 + p*k, 1 + (1-p)*k); the interval is its central ``level`` mass.
    """
    if not 0.0 <= p <= 1.0:
        raise CaseConfError(f"probability must lie in [0, 1], got {p}")
    if not 0.0 < level < 1.0:
        raise CaseConfError(f"level must lie in (0, 1), got {level}")
    if pseudo_counts < 0:
        raise CaseConfError(f"pseudo_counts must be non-negative, got {pseudo_counts}")
    a = 1.0 + p * pseudo_counts
    b = 1.0 + (1.0 - p) * pseudo_counts
    lo = float(_scipy_stats.beta.ppf((1.0 - level) / 2.0, a, b))
    hi = float(_scipy_stats.beta.ppf((1.0 + level) / 2.0, a, b))
    return lo, hi


def calibration(predictions: Sequence[float], outcomes: Sequence[int]) -> float:
    """Mean Brier score of probabilistic forecasts against 0/1 outcomes.

    Lower is better; a perfect forecaster scores 0, constant 0.5 scores
    0.25 regardless of the outcomes.
    """
    if len(predictions) != len(outcomes):
        raise CaseConfError(
            f"length mismatch: {len(predictions)} predictions, {len(outcomes)} outcomes"
        )
    if not predictions:
        raise CaseConfError("calibration needs at least one forecast")
    for p in predictions:
        if not 0.0 <= p <= 1.0:
            raise CaseConfError(f"prediction {p!r} outside [0, 1]")
    for o in outcomes:
        if o not in (0, 1):
            raise CaseConfError(f"outcome {o!r} must be 0 or 1")
    return math.fsum((p - o) ** 2 for p, o in zip(predictions, outcomes)) / len(predictions)
