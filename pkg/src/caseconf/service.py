"""Embedded HTTP service exposing the engine to scripts and the web UI.

All handlers operate on immutable snapshots from the :class:`CaseStore`;
state changes return the new version id. Responses use the same JSON object
model as the case documents, and the valuation payload is the exact
structure the CLI prints, so the two surfaces agree byte for byte.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Optional

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .confidence import METHODS, PRODUCT, propagate, report_round, whatif
from .defeaters import PrioritisationWeights, prioritise
from .document import build_graph, graph_to_document
from .errors import (
    CaseConfError,
    CaseStructureError,
    DefeaterStateError,
    UnknownNodeError,
)
from .lint import structural_lint
from .model import ArgumentGraph
from .report import SummaryAxes, visual_summary
from .soundness import evaluate_validity, resolve_defeater, validity_to_names
from .store import CaseStore
from .delphi import (
    DelphiConfig,
    ScriptedBackend,
    SimulatedBackend,
    assign_roles,
    run_session,
)


class ResolveRequest(BaseModel):
    verdict: str


class WhatifRequest(BaseModel):
    overrides: dict[str, float] = Field(default_factory=dict)
    method: str = PRODUCT


class DelphiSessionRequest(BaseModel):
    scenario: str
    backend: dict[str, Any]
    config: dict[str, Any] = Field(default_factory=dict)
    panel_size: int = 50


def _method_or_422(method: str) -> str:
    if method not in METHODS:
        raise HTTPException(422, f"unknown method {method!r}; use one of {list(METHODS)}")
    return method


def _case_payload(graph: ArgumentGraph, version: int, method: str) -> dict:
    payload: dict[str, Any] = {
        "version": version,
        "case": graph_to_document(graph),
        "validity": validity_to_names(evaluate_validity(graph)),
        "findings": [f.__dict__ for f in structural_lint(graph)],
        "valuation": None,
        "valuation_error": None,
    }
    try:
        payload["valuation"] = propagate(graph, graph.assignments, method).to_dict()
    except CaseConfError as exc:
        payload["valuation_error"] = str(exc)
    return payload


def _fixture_backend(spec: Mapping[str, Any]):
    kind = spec.get("type")
    if kind == "scripted":
        if "plan" not in spec:
            raise HTTPException(422, "scripted backend needs a 'plan'")
        return ScriptedBackend(spec["plan"])
    if kind == "simulated":
        try:
            return SimulatedBackend(
                center=float(spec.get("center", 0.5)),
                noise=float(spec.get("noise", 0.0)),
            )
        except (CaseConfError, TypeError, ValueError) as exc:
            raise HTTPException(422, f"bad simulated backend: {exc}") from exc
    raise HTTPException(
        422, f"backend type {kind!r} not available here; use scripted or simulated"
    )


def create_app(
    store: Optional[CaseStore] = None,
    cases_dir: Optional[str | Path] = None,
    ui_dir: Optional[str | Path] = None,
) -> FastAPI:
    store = store or CaseStore()
    if cases_dir is not None:
        store.load_directory(cases_dir)

    app = FastAPI(title="caseconf", version=__version__)
    app.state.store = store

    @app.exception_handler(CaseConfError)
    async def _domain_error(request, exc: CaseConfError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/cases")
    def list_cases() -> list[dict]:
        return store.list_cases()

    @app.get("/cases/{case_id}")
    def get_case(
        case_id: str,
        version: Optional[int] = Query(default=None),
        method: str = Query(default=PRODUCT),
    ) -> dict:
        _method_or_422(method)
        try:
            graph, found = store.get(case_id, version)
        except UnknownNodeError as exc:
            raise HTTPException(404, str(exc)) from exc
        return _case_payload(graph, found, method)

    @app.put("/cases/{case_id}")
    def put_case(case_id: str, document: dict) -> dict:
        try:
            graph = build_graph(document)
        except CaseStructureError as exc:
            raise HTTPException(422, str(exc)) from exc
        try:
            version = store.put(case_id, graph)
        except CaseConfError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"id": case_id, "version": version}

    @app.post("/cases/{case_id}/defeaters/{defeater_id}/resolve")
    def resolve(case_id: str, defeater_id: str, body: ResolveRequest) -> dict:
        if body.verdict not in ("sustained", "refuted"):
            raise HTTPException(422, f"verdict must be sustained or refuted, got {body.verdict!r}")
        try:
            graph, version = store.mutate(
                case_id, lambda g: resolve_defeater(g, defeater_id, body.verdict)
            )
        except DefeaterStateError as exc:
            raise HTTPException(409, str(exc)) from exc
        except UnknownNodeError as exc:
            raise HTTPException(404, str(exc)) from exc
        return {
            "id": case_id,
            "defeater": defeater_id,
            "verdict": body.verdict,
            "version": version,
            "validity": validity_to_names(evaluate_validity(graph)),
        }

    @app.post("/cases/{case_id}/whatif")
    def whatif_endpoint(case_id: str, body: WhatifRequest) -> dict:
        _method_or_422(body.method)
        try:
            graph, version = store.get(case_id)
        except UnknownNodeError as exc:
            raise HTTPException(404, str(exc)) from exc
        try:
            baseline = propagate(graph, graph.assignments, body.method)
            valuation, delta = whatif(graph, graph.assignments, body.method, body.overrides)
        except CaseConfError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {
            "version": version,
            "method": body.method,
            "top": report_round(valuation.top_value(graph)),
            "delta": delta,
            "top_raw": valuation.top_value(graph),
            "baseline_top_raw": baseline.top_value(graph),
            "valuation": valuation.to_dict(),
        }

    @app.get("/cases/{case_id}/prioritisation")
    def prioritisation(
        case_id: str,
        wp: float = Query(default=1.0),
        wi: float = Query(default=1.0),
        we: float = Query(default=1.0),
        method: str = Query(default=PRODUCT),
    ) -> dict:
        _method_or_422(method)
        try:
            graph, version = store.get(case_id)
        except UnknownNodeError as exc:
            raise HTTPException(404, str(exc)) from exc
        try:
            weights = PrioritisationWeights(w_probability=wp, w_impact=wi, w_effort=we)
            plan = prioritise(graph, graph.assignments, method, weights)
        except CaseConfError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"version": version, "method": method, "plan": plan.to_dict()}

    @app.get("/cases/{case_id}/report/summary.svg")
    def summary_svg(
        case_id: str,
        eq: int = Query(default=3, ge=1, le=5),
        aq: int = Query(default=3, ge=1, le=5),
        sa: int = Query(default=3, ge=1, le=5),
        method: str = Query(default=PRODUCT),
    ) -> Response:
        _method_or_422(method)
        try:
            graph, _ = store.get(case_id)
        except UnknownNodeError as exc:
            raise HTTPException(404, str(exc)) from exc
        try:
            valuation = propagate(graph, graph.assignments, method)
            axes = SummaryAxes.from_valuation(graph, valuation, eq, aq, sa)
            svg, _record = visual_summary(graph, valuation, axes)
        except CaseConfError as exc:
            raise HTTPException(422, str(exc)) from exc
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/delphi/sessions")
    def delphi_session(body: DelphiSessionRequest) -> dict:
        backend = _fixture_backend(body.backend)
        try:
            config = DelphiConfig(**body.config)
            panel = assign_roles(body.panel_size)
            session = run_session(body.scenario, panel, config, backend)
        except (CaseConfError, TypeError) as exc:
            raise HTTPException(422, str(exc)) from exc
        return session.to_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    port: int = 8000,
    cases_dir: Optional[str | Path] = None,
    ui_dir: Optional[str | Path] = None,
    host: str = "127.0.0.1",
) -> None:  # pragma: no cover - process entry point
    import uvicorn

    app = create_app(cases_dir=cases_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)
