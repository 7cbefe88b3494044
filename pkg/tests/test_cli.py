"""CLI subcommands, exit codes and machine output."""

from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from caseconf import example_case_path
from caseconf.cli import run_cli


@pytest.fixture()
def case_path():
    return example_case_path()


def run(capsys, *argv) -> tuple[int, str, str]:
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys, case_path):
    code, out, _ = run(capsys, "validate", case_path)
    assert code == 0
    assert "well-formed" in out


def test_validate_cycle_exits_1(capsys, tmp_path):
    doc = {
        "case": {"id": "cyclic", "title": "", "top_claim": "CA"},
        "claims": [
            {"id": "CA", "statement": "a", "is_top_level": True},
            {"id": "CB", "statement": "b"},
        ],
        "evidence": [],
        "blocks": [
            {"id": "A1", "kind": "substitution", "parent_claim": "CB", "children": ["CA"]},
            {"id": "A2", "kind": "substitution", "parent_claim": "CA", "children": ["CB"]},
        ],
        "defeaters": [],
        "residual_doubts": [],
        "assignments": {},
    }
    path = tmp_path / "cyclic.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run(capsys, "validate", str(path))
    assert code == 1
    assert "cycle" in err.lower()


def test_usage_error_exits_2(case_path):
    with pytest.raises(SystemExit) as err:
        run_cli(["propagate", case_path, "--method", "psychic"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run_cli(["no-such-command"])
    assert err.value.code == 2


def test_propagate_text_output(capsys, case_path):
    code, out, _ = run(capsys, "propagate", case_path, "--method", "product")
    assert code == 0
    assert "top C2.2.1: 0.17" in out
    assert "C2.2.1.1: 0.48" in out


def test_propagate_json_is_the_valuation(capsys, case_path):
    code, out, _ = run(capsys, "propagate", case_path, "--method", "product",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {
        "method", "per_node", "raw_per_node", "adjustments_applied", "flags",
    }
    assert payload["per_node"]["C2.2.1"] == pytest.approx(0.1741824)


def test_propagate_sod_alias(capsys, case_path):
    code, out, _ = run(capsys, "propagate", case_path, "--method", "sod",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "sum_of_doubts"
    assert payload["raw_per_node"]["C2.2.1"] == pytest.approx(-0.5)


def test_required_confidence(capsys):
    code, out, _ = run(capsys, "required-confidence", "--target", "0.95",
                       "--n", "7", "--method", "sod")
    assert code == 0
    assert out.strip() == "0.99286"
    code, out, _ = run(capsys, "required-confidence", "--target", "0.95",
                       "--n", "7", "--method", "product")
    assert out.strip() == "0.99270"


def test_whatif(capsys, case_path):
    code, out, _ = run(capsys, "whatif", case_path, "--set", "C2.2.1.1=0.85",
                       "--method", "product")
    assert code == 0
    assert "0.25" in out and "+0.08" in out
    code, out, _ = run(capsys, "whatif", case_path, "--set", "C2.2.1.1=0.85",
                       "--method", "product", "--format", "json")
    payload = json.loads(out)
    assert payload["top"] == 0.25
    assert payload["delta"] == 0.08


def test_defeaters_prioritise(capsys, case_path):
    code, out, _ = run(capsys, "defeaters", "prioritise", case_path)
    assert code == 0
    assert out.index("D1") < out.index("D2")
    assert "1.38" in out and "0.85" in out
    code, out, _ = run(capsys, "defeaters", "prioritise", case_path,
                       "--weights", "2,2,2", "--format", "json")
    payload = json.loads(out)
    assert [e["id"] for e in payload["stage3"]] == ["D1", "D2"]


def test_defeaters_checklist(capsys):
    code, out, _ = run(capsys, "defeaters", "checklist", "--category",
                       "Cognitive Biases", "--format", "json")
    assert code == 0
    items = json.loads(out)["items"]
    assert len(items) == 6
    code, out, _ = run(capsys, "defeaters", "checklist")
    assert code == 0
    assert out.count("[") >= 19


def test_soundness(capsys, case_path):
    code, out, _ = run(capsys, "soundness", case_path, "--format", "json")
    assert code == 0
    rows = {r["node"]: r for r in json.loads(out)["validity"]}
    assert rows["C2.2.1"]["state"] == "UNSUPPORTED"
    assert rows["C2.2.1"]["causes"] == ["D1", "D2"]


def test_delphi_run_simulated(capsys, tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"description": "will the event happen"}),
                        encoding="utf-8")
    code, out, _ = run(capsys, "delphi", "run", "--scenario", str(scenario),
                       "--backend", "simulated", "--center", "0.71",
                       "--noise", "0.02", "--runs", "10", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["mean"] - 0.71) <= 0.02
    assert "% ± " in payload["formatted"]


def test_delphi_run_scripted_session(capsys, tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"description": "scripted event"}), encoding="utf-8")
    script = tmp_path / "script.json"
    script.write_text(json.dumps([[0.7]]), encoding="utf-8")
    code, out, _ = run(capsys, "delphi", "run", "--scenario", str(scenario),
                       "--backend", "scripted", "--script", str(script),
                       "--panel-size", "5", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["final_estimate"] == 0.7
    assert payload["consensus_reached_at"] == 1


def test_delphi_bench(capsys, tmp_path):
    scenarios = tmp_path / "scenarios.json"
    scenarios.write_text(json.dumps([
        {"id": "s1", "description": "alpha", "resolution_date": "2031-01-01",
         "reference_estimate": 0.9, "outcome": 1},
        {"id": "s2", "description": "beta", "resolution_date": "2031-01-02",
         "reference_estimate": 0.1, "outcome": 0},
    ]), encoding="utf-8")
    script = tmp_path / "script.json"
    script.write_text(json.dumps({"alpha": [[0.6]], "beta": [[0.4]]}), encoding="utf-8")
    code, out, _ = run(capsys, "delphi", "bench", "--scenarios", str(scenarios),
                       "--backend", "scripted", "--script", str(script),
                       "--panel-size", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["calibration_ours"] == pytest.approx(0.16)
    assert payload["calibration_reference"] == pytest.approx(0.01)


def test_report_summary_and_sentence(capsys, tmp_path, case_path):
    out_file = tmp_path / "summary.svg"
    code, out, _ = run(capsys, "report", "summary", case_path,
                       "--axes", "4,4,2", "--out", str(out_file))
    assert code == 0
    svg = out_file.read_text(encoding="utf-8")
    assert "0.17 (product)" in svg

    judgements = tmp_path / "judgements.json"
    judgements.write_text(json.dumps({"doubts_explored": "both doubts tracked"}),
                          encoding="utf-8")
    code, out, _ = run(capsys, "report", "sentence", case_path,
                       "--judgements", str(judgements))
    assert code == 0
    assert "2 unresolved defeaters" in out
    assert out.count("[NOT PROVIDED]") == 7


def test_missing_file_exits_1(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/case.json")
    assert code == 1
    assert "error" in err


def test_console_entry_point_smoke():
    exe = shutil.which("caseconf")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "required-confidence", "--target", "0.95", "--n", "7", "--method", "sod"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.99286"
    assert sys.version_info >= (3, 10)
