"""Delphi elicitation: panels, sessions, intervals, calibration, benchmark.

Frozen expected values come from independent oracles computed before the
implementation: the three-expert weighted mean was evaluated with exact
fractions (30002050021/50003000030) and the Beta(6,6) interval endpoints
with 60-digit numerical inversion of the regularized incomplete beta
function.
"""

from __future__ import annotations

import json
import math
import random
import statistics

import pytest

from caseconf.delphi import (
    DelphiConfig,
    ScriptedBackend,
    SimulatedBackend,
    assign_roles,
    calibration,
    credible_interval,
    default_roles,
    estimate_defeater_probability,
    extract_probability,
    format_probability,
    run_benchmark,
    run_session,
)
from caseconf.delphi.session import MAX_RESPONSE_ATTEMPTS
from caseconf.errors import CaseConfError, ScenariosFileError, SessionFailedError

# exact-fraction oracle: (1e6*0.6 + 0.8/0.050001 + 0.7/0.100001) / (sum of weights)
THREE_EXPERT_WEIGHTED_MEAN = 0.6000049997600114
# 60-digit inversion of the Beta(6,6) CDF at 0.025 and 0.975
BETA_6_6_95 = (0.23379359765934515, 0.76620640234065485)


# -- panel ---------------------------------------------------------------------


def test_round_robin_role_assignment():
    roles = list(default_roles())
    assert len(roles) == 40
    panel = assign_roles(50, roles)
    assert panel.n_experts == 50
    for expert in panel.experts[:40]:
        assert expert.role == roles[expert.index]
    assert panel.experts[40].role == roles[0]
    assert panel.experts[49].role == roles[9]


def test_small_panel_single_role():
    panel = assign_roles(3, ["A"])
    assert [e.role for e in panel.experts] == ["A", "A", "A"]


def test_empty_panel_rejected():
    with pytest.raises(CaseConfError):
        assign_roles(0, ["A"])
    with pytest.raises(CaseConfError):
        assign_roles(3, [])


# -- sessions ------------------------------------------------------------------


def test_uniform_scripted_panel_reaches_consensus_immediately():
    panel = assign_roles(50)
    session = run_session(
        "uniform scenario", panel, DelphiConfig(seed=1), ScriptedBackend([[0.7]])
    )
    assert len(session.rounds) == 1
    assert session.consensus_reached_at == 1
    assert session.rounds[0].std == 0.0
    assert session.final_estimate == 0.7
    assert math.isclose(sum(session.final_weights.values()), 1.0, abs_tol=1e-12)


def test_three_expert_session_matches_hand_oracle():
    panel = assign_roles(3, ["A", "B", "C"])
    backend = ScriptedBackend([[0.6, 0.6], [0.7, 0.8], [0.9, 0.7]])
    session = run_session("worked example", panel, DelphiConfig(seed=0), backend)
    # round 1 std 0.1247 > 0.10 keeps going; round 2 std 0.0816 < 0.10 stops
    assert [r.number for r in session.rounds] == [1, 2]
    assert session.consensus_reached_at == 2
    assert session.rounds[0].std == pytest.approx(0.12472191289246, abs=1e-12)
    assert session.rounds[1].std == pytest.approx(0.08164965809277, abs=1e-12)
    assert session.final_estimate == pytest.approx(THREE_EXPERT_WEIGHTED_MEAN, abs=1e-9)
    assert min(session.rounds[-1].responses.values()) <= session.final_estimate
    assert session.final_estimate <= max(session.rounds[-1].responses.values())


def test_round_limit_without_consensus():
    panel = assign_roles(2, ["A", "B"])
    backend = ScriptedBackend([[0.1], [0.9]])  # permanent disagreement
    session = run_session("split scenario", panel, DelphiConfig(seed=0), backend)
    assert len(session.rounds) == 5
    assert session.consensus_reached_at is None


def test_round_summaries_feed_forward():
    panel = assign_roles(2, ["A", "B"])
    seen: list[str | None] = []

    class Recording(ScriptedBackend):
        def submit(self, expert_index, round_index, role, scenario,
                   prior_round_summary, temperature_hint, rng):
            seen.append(prior_round_summary)
            return super().submit(expert_index, round_index, role, scenario,
                                  prior_round_summary, temperature_hint, rng)

    session = run_session(
        "summary scenario", panel,
        DelphiConfig(seed=0, max_rounds=2),
        Recording([[0.2, 0.5], [0.8, 0.5]]),
    )
    assert seen[0] is None and seen[1] is None
    assert seen[2] == session.rounds[0].summary_text
    assert "mean=0.5000" in session.rounds[0].summary_text
    assert "responses=[0.2000, 0.8000]" in session.rounds[0].summary_text


def test_simulated_backend_concentrates(cyber_case=None):
    panel = assign_roles(50)
    hits = 0
    for seed in range(100):
        session = run_session(
            "concentration scenario", panel, DelphiConfig(seed=seed),
            SimulatedBackend(center=0.71, noise=0.02),
        )
        if session.consensus_reached_at == 1:
            hits += 1
        assert abs(session.final_estimate - 0.71) <= 0.02
    assert hits == 100


def test_concurrent_submission_does_not_perturb_transcripts():
    """Per-(expert, round, attempt) derived streams make worker count moot."""
    panel = assign_roles(30)
    config = DelphiConfig(seed=42)
    backend = SimulatedBackend(center=0.55, noise=0.18)
    sequential = run_session("concurrency scenario", panel, config, backend)
    concurrent = run_session("concurrency scenario", panel, config, backend,
                             max_workers=8)
    assert json.dumps(sequential.to_dict(), sort_keys=True) == json.dumps(
        concurrent.to_dict(), sort_keys=True
    )


def test_identical_seeds_give_bit_identical_transcripts():
    panel = assign_roles(25)
    config = DelphiConfig(seed=123)
    backend = SimulatedBackend(center=0.4, noise=0.15)
    first = run_session("determinism scenario", panel, config, backend)
    second = run_session("determinism scenario", panel, config, backend)
    assert json.dumps(first.to_dict(), sort_keys=True) == json.dumps(
        second.to_dict(), sort_keys=True
    )
    third = run_session("determinism scenario", panel, DelphiConfig(seed=124), backend)
    assert json.dumps(first.to_dict(), sort_keys=True) != json.dumps(
        third.to_dict(), sort_keys=True
    )


def test_out_of_range_responses_retry_then_drop():
    panel = assign_roles(2, ["A", "B"])
    calls: dict[int, int] = {0: 0, 1: 0}

    class Stubborn(ScriptedBackend):
        def submit(self, expert_index, round_index, role, scenario,
                   prior_round_summary, temperature_hint, rng):
            calls[expert_index] += 1
            if expert_index == 0:
                return 1.7  # never in range -> dropped after the retries
            return 0.5

    session = run_session(
        "retry scenario", panel, DelphiConfig(seed=0), Stubborn([[0.5]])
    )
    assert calls[0] == MAX_RESPONSE_ATTEMPTS
    assert session.rounds[0].dropped == (0,)
    assert list(session.rounds[0].responses) == [1]
    assert session.final_estimate == 0.5


def test_all_experts_dropped_fails_session():
    panel = assign_roles(3)

    class Broken(ScriptedBackend):
        def submit(self, *args, **kwargs):
            return float("nan")

    with pytest.raises(SessionFailedError):
        run_session("broken scenario", panel, DelphiConfig(seed=0), Broken([[0.5]]))


def test_final_estimate_within_final_round_range():
    rng = random.Random(5)
    panel = assign_roles(8)
    for seed in range(20):
        noise = rng.uniform(0.01, 0.3)
        center = rng.uniform(0.2, 0.8)
        session = run_session(
            "range scenario", panel, DelphiConfig(seed=seed),
            SimulatedBackend(center=center, noise=noise),
        )
        responses = session.rounds[-1].responses.values()
        assert min(responses) - 1e-12 <= session.final_estimate <= max(responses) + 1e-12
        assert math.isclose(sum(session.final_weights.values()), 1.0, abs_tol=1e-12)


# -- credible intervals ----------------------------------------------------------


def test_beta_interval_matches_quantile_oracle():
    lo, hi = credible_interval(0.5, pseudo_counts=10, level=0.95)
    assert lo == pytest.approx(BETA_6_6_95[0], abs=1e-6)
    assert hi == pytest.approx(BETA_6_6_95[1], abs=1e-6)
    # Beta(6,6) is symmetric about 0.5
    assert lo + hi == pytest.approx(1.0, abs=1e-9)


def test_interval_narrows_with_pseudo_counts():
    widths = []
    for k in (5, 10, 50, 200, 1000):
        lo, hi = credible_interval(0.3, pseudo_counts=k)
        assert lo <= 0.3 + 1e-9
        widths.append(hi - lo)
    assert widths == sorted(widths, reverse=True)
    assert widths[-1] < 0.1


def test_interval_brackets_posterior_mean():
    for p in (0.0, 0.2, 0.5, 0.9, 1.0):
        lo, hi = credible_interval(p, pseudo_counts=10)
        posterior_mean = (1 + p * 10) / 12
        assert lo <= posterior_mean <= hi


def test_interval_validation():
    with pytest.raises(CaseConfError):
        credible_interval(1.5)
    with pytest.raises(CaseConfError):
        credible_interval(0.5, level=1.0)


# -- calibration -----------------------------------------------------------------


def test_calibration_examples():
    assert calibration([0.7], [1]) == pytest.approx(0.09, abs=1e-12)
    assert calibration([1.0, 0.0], [1, 0]) == 0.0
    assert calibration([0.5] * 8, [0, 1, 1, 0, 1, 0, 0, 1]) == pytest.approx(0.25)


def test_calibration_validation():
    with pytest.raises(CaseConfError):
        calibration([0.5], [1, 0])
    with pytest.raises(CaseConfError):
        calibration([], [])
    with pytest.raises(CaseConfError):
        calibration([0.5], [2])


def test_calibration_minimised_at_truth():
    rng = random.Random(11)
    outcomes = [rng.randint(0, 1) for _ in range(16)]
    perfect = calibration([float(o) for o in outcomes], outcomes)
    assert perfect == 0.0
    for _ in range(10):
        perturbed = [
            min(1.0, max(0.0, o + rng.uniform(-0.4, 0.4) or 0.01)) for o in outcomes
        ]
        if perturbed == [float(o) for o in outcomes]:
            continue
        assert calibration(perturbed, outcomes) > 0.0


# -- repeated runs and formatting -------------------------------------------------


def test_estimate_formatting_contract():
    assert format_probability(0.71, 0.06) == "71% ± 6%"
    assert format_probability(0.71, 0.02) == "71% ± 2%"
    assert format_probability(0.19, 0.05) == "19% ± 5%"


def test_repeated_runs_with_degenerate_noise():
    panel = assign_roles(10)
    estimate = estimate_defeater_probability(
        "точный scenario", panel, DelphiConfig(seed=3),
        SimulatedBackend(center=0.71, noise=0.0), runs=10,
    )
    assert estimate.mean == pytest.approx(0.71, abs=1e-12)
    assert estimate.std == pytest.approx(0.0, abs=1e-12)
    assert len(estimate.estimates) == 10


def test_repeated_runs_require_two():
    panel = assign_roles(3)
    with pytest.raises(CaseConfError):
        estimate_defeater_probability(
            "single scenario", panel, DelphiConfig(seed=0),
            SimulatedBackend(center=0.5, noise=0.0), runs=1,
        )


def test_failed_run_keeps_partial_results():
    panel = assign_roles(2, ["A", "B"])

    class FailsOnKeyword(ScriptedBackend):
        def __init__(self):
            super().__init__([[0.5]])
            self.count = 0

        def submit(self, expert_index, round_index, role, scenario,
                   prior_round_summary, temperature_hint, rng):
            self.count += 1
            if self.count > 8:  # two calls per run: breaks during run 5
                return float("nan")
            return 0.5

    with pytest.raises(SessionFailedError) as err:
        estimate_defeater_probability(
            "flaky scenario", panel, DelphiConfig(seed=0), FailsOnKeyword(), runs=10
        )
    assert err.value.partial == (0.5, 0.5, 0.5, 0.5)


# -- backends ---------------------------------------------------------------------


def test_extract_probability_forms():
    assert extract_probability("I'd say 37%") == pytest.approx(0.37)
    assert extract_probability("probability: 0.2") == pytest.approx(0.2)
    assert extract_probability("around 85 out of 100") == pytest.approx(0.85)
    assert math.isnan(extract_probability("no idea"))


def test_scripted_backend_per_scenario_plans():
    backend = ScriptedBackend({"s1": [[0.9]], "s2": [[0.1]]})
    rng = random.Random(0)
    assert backend.submit(0, 0, "A", "s1", None, 1.5, rng) == 0.9
    assert backend.submit(0, 0, "A", "s2", None, 1.5, rng) == 0.1
    with pytest.raises(CaseConfError):
        backend.submit(0, 0, "A", "unknown", None, 1.5, rng)


def test_simulated_backend_validation():
    with pytest.raises(CaseConfError):
        SimulatedBackend(center=1.2)
    with pytest.raises(CaseConfError):
        SimulatedBackend(center=0.5, noise=-0.1)


class _StubResponse:
    def __init__(self, payload):
        self.payload = payload
        self.text = json.dumps(payload)

    def raise_for_status(self):
        pass

    def json(self):
        return self.payload


class _StubTransport:
    """Duck-typed requests.Session that fails a configurable number of times."""

    def __init__(self, payload, failures=0):
        self.payload = payload
        self.failures = failures
        self.requests: list[dict] = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.requests.append({"url": url, "json": json, "headers": headers})
        if self.failures > 0:
            self.failures -= 1
            import requests as _requests

            raise _requests.ConnectionError("transport down")
        return _StubResponse(self.payload)


def test_remote_backend_parses_and_retries(monkeypatch):
    from caseconf.delphi import RemoteBackend

    monkeypatch.setenv("CASECONF_DELPHI_TOKEN", "sekrit")
    transport = _StubTransport({"text": "I estimate 64% odds"}, failures=2)
    backend = RemoteBackend("https://example.invalid/generate", session=transport)
    value = backend.submit(0, 0, "Economist - Macroeconomics", "scenario text",
                           "Round 1: mean=0.5", 1.5, random.Random(0))
    assert value == pytest.approx(0.64)
    assert len(transport.requests) == 3  # two transport failures, one success
    sent = transport.requests[-1]
    assert sent["headers"]["Authorization"] == "Bearer sekrit"
    assert "Economist - Macroeconomics" in sent["json"]["prompt"]
    assert "scenario text" in sent["json"]["prompt"]
    assert sent["json"]["temperature"] == 1.5


def test_remote_backend_gives_up_after_retries():
    from caseconf.delphi import RemoteBackend

    transport = _StubTransport({"text": "55%"}, failures=99)
    backend = RemoteBackend("https://example.invalid/generate", session=transport)
    with pytest.raises(CaseConfError, match="after retries"):
        backend.submit(0, 0, "A", "s", None, 1.5, random.Random(0))


# -- benchmark ---------------------------------------------------------------------


def _write_scenarios(tmp_path, entries):
    path = tmp_path / "scenarios.json"
    path.write_text(json.dumps(entries), encoding="utf-8")
    return path


def test_benchmark_perfect_scripted_forecasts(tmp_path):
    path = _write_scenarios(tmp_path, [
        {"id": "s1", "description": "event one happens", "resolution_date": "2031-01-01",
         "reference_estimate": 0.8, "outcome": 1},
        {"id": "s2", "description": "event two happens", "resolution_date": "2031-06-01",
         "reference_estimate": 0.3, "outcome": 0},
    ])
    backend = ScriptedBackend({
        "event one happens": [[1.0]],
        "event two happens": [[0.0]],
    })
    report = run_benchmark(path, assign_roles(5), DelphiConfig(seed=0), backend)
    assert report.calibration_ours == 0.0
    assert report.metric == "brier"
    assert [s.id for s in report.per_scenario] == ["s1", "s2"]


def test_benchmark_reference_comparison(tmp_path):
    path = _write_scenarios(tmp_path, [
        {"id": "s1", "description": "alpha", "resolution_date": "2031-01-01",
         "reference_estimate": 0.9, "outcome": 1},
        {"id": "s2", "description": "beta", "resolution_date": "2031-01-02",
         "reference_estimate": 0.1, "outcome": 0},
    ])
    backend = ScriptedBackend({"alpha": [[0.6]], "beta": [[0.4]]})
    report = run_benchmark(path, assign_roles(5), DelphiConfig(seed=0), backend)
    assert report.calibration_ours == pytest.approx(0.16, abs=1e-12)
    assert report.calibration_reference == pytest.approx(0.01, abs=1e-12)


def test_benchmark_skips_malformed_entries(tmp_path):
    path = _write_scenarios(tmp_path, [
        {"id": "good", "description": "gamma", "resolution_date": "2031-01-01",
         "reference_estimate": 0.5, "outcome": "unresolved"},
        {"id": "bad", "description": "delta"},
    ])
    backend = ScriptedBackend({"gamma": [[0.5]]})
    with pytest.warns(UserWarning, match="missing"):
        report = run_benchmark(path, assign_roles(3), DelphiConfig(seed=0), backend)
    assert [s.id for s in report.per_scenario] == ["good"]
    assert report.skipped[0]["index"] == 1
    assert report.calibration_ours is None  # nothing resolved


def test_benchmark_rejects_empty_file(tmp_path):
    path = _write_scenarios(tmp_path, [])
    with pytest.raises(ScenariosFileError):
        run_benchmark(path, assign_roles(3), DelphiConfig(seed=0), ScriptedBackend([[0.5]]))
    with pytest.raises(ScenariosFileError):
        run_benchmark(tmp_path / "missing.json", assign_roles(3), DelphiConfig(seed=0),
                      ScriptedBackend([[0.5]]))


def test_benchmark_is_deterministic(tmp_path):
    path = _write_scenarios(tmp_path, [
        {"id": "s1", "description": "epsilon", "resolution_date": "2031-01-01",
         "reference_estimate": 0.5, "outcome": 1},
    ])
    backend = SimulatedBackend(center=0.6, noise=0.1)
    first = run_benchmark(path, assign_roles(10), DelphiConfig(seed=9), backend)
    second = run_benchmark(path, assign_roles(10), DelphiConfig(seed=9), backend)
    assert first.to_dict() == second.to_dict()


# -- config validation -------------------------------------------------------------


def test_config_validation():
    with pytest.raises(CaseConfError):
        DelphiConfig(max_rounds=0)
    with pytest.raises(CaseConfError):
        DelphiConfig(consensus_sigma=0.0)
    with pytest.raises(CaseConfError):
        DelphiConfig(weight_epsilon=0.0)


def test_population_std_is_used():
    # spot check against statistics.pstdev on an asymmetric panel
    panel = assign_roles(3, ["A", "B", "C"])
    backend = ScriptedBackend([[0.2], [0.5], [0.8]])
    session = run_session("std scenario", panel, DelphiConfig(seed=0), backend)
    assert session.rounds[0].std == pytest.approx(statistics.pstdev([0.2, 0.5, 0.8]))
