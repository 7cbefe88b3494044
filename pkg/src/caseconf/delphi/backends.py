"""Expert backends: scripted schedules, seeded simulation, and a remote
text-generation client.

A backend returns one probability per (expert, round) request. Responses
outside [0, 1] (including NaN) are rejected by the session, which re-requests
with a fresh attempt-derived stream up to three times before dropping the
expert from the round.
"""

from __future__ import annotations

import abc
import math
import os
import random
import re
from typing import Mapping, Optional, Sequence, Union

import requests

from ..errors import CaseConfError

Schedule = Sequence[Sequence[float]]


class ExpertBackend(abc.ABC):
    """One elicitation request to a (virtual) expert."""

    @abc.abstractmethod
    def submit(
        self,
        expert_index: int,
        round_index: int,
        role: str,
        scenario: str,
        prior_round_summary: Optional[str],
        temperature_hint: float,
        rng: random.Random,
    ) -> float:
        """Return the expert's probability estimate in [0, 1]."""


class ScriptedBackend(ExpertBackend):
    """Fixed response schedules, for tests and reproducible fixtures.

    ``plan`` is either one schedule (rows = experts, columns = rounds) or a
    mapping from scenario text to such a schedule. Experts beyond the last
    row reuse rows cyclically; rounds beyond the last column repeat it.
    """

    def __init__(self, plan: Union[Schedule, Mapping[str, Schedule]]):
        self.plan = plan

    def _schedule(self, scenario: str) -> Schedule:
        if isinstance(self.plan, Mapping):
            if scenario not in self.plan:
                raise CaseConfError(f"no scripted schedule for scenario {scenario!r}")
            return self.plan[scenario]
        return self.plan

    def submit(self, expert_index, round_index, role, scenario,
               prior_round_summary, temperature_hint, rng) -> float:
        schedule = self._schedule(scenario)
        if not schedule:
            raise CaseConfError("scripted schedule is empty")
        row = schedule[expert_index % len(schedule)]
        return float(row[min(round_index, len(row) - 1)])


class SimulatedBackend(ExpertBackend):
    """Seeded noisy draws around a configured true value.

    Draws are Gaussian and intentionally not clipped: with a centre near the
    boundary an out-of-range draw exercises the session's reject-and-retry
    path deterministically.
    """

    def __init__(self, center: float, noise: float = 0.0):
        if not 0.0 <= center <= 1.0:
            raise CaseConfError(f"center must lie in [0, 1], got {center}")
        if noise < 0.0:
            raise CaseConfError(f"noise must be non-negative, got {noise}")
        self.center = center
        self.noise = noise

    def submit(self, expert_index, round_index, role, scenario,
               prior_round_summary, temperature_hint, rng) -> float:
        if self.noise == 0.0:
            return self.center
        return rng.gauss(self.center, self.noise)


_PERCENT_RE = re.compile(r"(-?\d+(?:\.\d+)?)\s*%")
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")


def extract_probability(text: str) -> float:
    """Parse a probability out of free text.

    Prefers an explicit percentage ("about 37%"); otherwise takes the first
    number, read as a percentage when it exceeds 1. Returns NaN when no
    number is present so the session's range check rejects the response.
    """
    match = _PERCENT_RE.search(text)
    if match:
        return float(match.group(1)) / 100.0
    match = _NUMBER_RE.search(text)
    if not match:
        return math.nan
    value = float(match.group(0))
    return value / 100.0 if value > 1.0 else value


class RemoteBackend(ExpertBackend):
    """HTTP client for an external text-generation API.

    Sends a role-conditioned prompt and the temperature hint as JSON; the
    response body (``text`` field, or raw body) is parsed for a percentage.
    The auth token is read from an environment variable. Each request is
    retried up to three times on transport errors.
    """

    def __init__(
        self,
        endpoint: str,
        token_env: str = "CASECONF_DELPHI_TOKEN",
        timeout: float = 30.0,
        session: Optional[requests.Session] = None,
        transport_retries: int = 3,
    ):
        self.endpoint = endpoint
        self.token_env = token_env
        self.timeout = timeout
        self.session = session or requests.Session()
        self.transport_retries = transport_retries

    def build_prompt(self, role, scenario, prior_round_summary) -> str:
        parts = [
            f"You are an expert acting as: {role}.",
            "Estimate the probability (0% to 100%) that the following event "
            "occurs by its resolution date. Answer with a single percentage.",
            f"Scenario: {scenario}",
        ]
        if prior_round_summary:
            parts.append(f"Previous round: {prior_round_summary}")
        return "\n".join(parts)

    def submit(self, expert_index, round_index, role, scenario,
               prior_round_summary, temperature_hint, rng) -> float:
        payload = {
            "prompt": self.build_prompt(role, scenario, prior_round_summary),
            "temperature": temperature_hint,
        }
        headers = {}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        last_error: Exception | None = None
        for _ in range(1 + self.transport_retries):
            try:
                response = self.session.post(
                    self.endpoint, json=payload, headers=headers, timeout=self.timeout
                )
                response.raise_for_status()
            except requests.RequestException as exc:
                last_error = exc
                continue
            try:
                text = response.json().get("text", response.text)
            except ValueError:
                text = response.text
            return extract_probability(str(text))
        raise CaseConfError(f"remote backend failed after retries: {last_error}")
