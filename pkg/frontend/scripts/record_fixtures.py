#!/usr/bin/env python3
"""Record service responses as fixtures for the UI contract tests.

Run from the repository root after any engine change:

    python3 frontend/scripts/record_fixtures.py

The UI tests replay these exact payloads, so they pin the client against
the real service contract without needing a running server.
"""

from __future__ import annotations

import json
import shutil
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from caseconf import example_case_path
from caseconf.service import create_app

CASE_ID = "cyber-novel-attack-response"
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        cases = Path(tmp) / "cases"
        cases.mkdir()
        shutil.copy(example_case_path(), cases / "cyber_fragment.json")
        client = TestClient(create_app(cases_dir=cases))

        def dump(name: str, payload) -> None:
            (OUT / name).write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            print(f"wrote {OUT / name}")

        dump("cases.json", client.get("/cases").json())
        dump("case_v1.json",
             client.get(f"/cases/{CASE_ID}", params={"method": "product"}).json())
        dump("whatif_085.json", client.post(
            f"/cases/{CASE_ID}/whatif",
            json={"overrides": {"C2.2.1.1": 0.85}, "method": "product"},
        ).json())
        dump("prioritisation.json", client.get(
            f"/cases/{CASE_ID}/prioritisation", params={"wp": 1, "wi": 1, "we": 1}
        ).json())
        dump("resolve_d1.json", client.post(
            f"/cases/{CASE_ID}/defeaters/D1/resolve", json={"verdict": "refuted"}
        ).json())
        dump("case_v2.json",
             client.get(f"/cases/{CASE_ID}", params={"method": "product"}).json())


if __name__ == "__main__":
    main()
