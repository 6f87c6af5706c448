"""HTTP/JSON service over the conflict engine.

The service holds one scenario at a time.  Reads are side-effect free and
evaluations are stateless, so requests may run concurrently; replacement
goes through a lock and swaps the whole scenario reference at once, so a
request sees entirely the old or entirely the new scenario.

Endpoints (all bodies JSON):

* ``GET /api/kb`` / ``PUT /api/kb`` — fetch or replace the knowledge base
  document.  A replacement keeps constant assignments and bound series
  that are still valid against the new graph and drops the rest.
* ``POST /api/evaluate`` — logic semantics evaluates the readiness
  formulas on a flat variable state; weighted semantics propagates the
  goal graph and decides the winner, optionally at a series timestamp.
* ``POST /api/whatif`` — baseline vs adjusted evaluation with leaf or
  state overrides and optional edge-weight overrides; reports the change
  of the main goal degree.
* ``GET /api/series`` / ``POST /api/series`` — fetch or replace the bound
  per-leaf time series.
* ``GET /api/evaluate/series`` — winner and degree breakdown at every
  timestamp of the common grid.

Evaluation numbers are produced by the library and serialised with full
round-trip precision; the service adds no arithmetic of its own.
"""

from __future__ import annotations

import threading
from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict, Field

from reflexkb.graph import (
    AssignmentError,
    DocumentError,
    GoalGraph,
    GraphValidationError,
    InfluenceEdge,
    SeriesGridError,
    check_assignment,
    graph_from_document,
    graph_to_document,
    validate,
)
from reflexkb.pattern import (
    MissingPatternRoleError,
    evaluate_conflict_series,
    evaluate_with_degrees,
)
from reflexkb.reflexive import ReflexiveState, evaluate_conflict_logic
from reflexkb.scenario import Scenario

__all__ = ["ScenarioStore", "create_app"]


class ScenarioStore:
    """Single-scenario holder with atomic replacement."""

    def __init__(self, scenario: Scenario | None = None):
        self._lock = threading.Lock()
        self._scenario = scenario

    def get(self) -> Scenario | None:
        return self._scenario

    def replace(self, scenario: Scenario) -> None:
        with self._lock:
            self._scenario = scenario

    def replace_kb(self, kb: GoalGraph) -> Scenario:
        """Swap in a new graph, keeping assignments it still accepts."""
        with self._lock:
            old = self._scenario
            leaves: dict[str, float] = {}
            series: dict[str, tuple[tuple[str, float], ...]] = {}
            epsilon = 1e-9
            if old is not None:
                epsilon = old.epsilon
                for name, value in old.leaves.items():
                    if _accepts(kb, name, value):
                        leaves[name] = value
                for name, points in old.series.items():
                    if all(_accepts(kb, name, value) for _, value in points):
                        series[name] = points
            scenario = Scenario(kb=kb, leaves=leaves, series=series, epsilon=epsilon)
            self._scenario = scenario
            return scenario

    def replace_series(
        self, series: dict[str, tuple[tuple[str, float], ...]]
    ) -> Scenario:
        with self._lock:
            old = self._scenario
            if old is None:
                raise LookupError("no scenario loaded")
            scenario = Scenario(
                kb=old.kb, leaves=old.leaves, series=series, epsilon=old.epsilon
            )
            self._scenario = scenario
            return scenario


def _accepts(kb: GoalGraph, leaf: str, value: float) -> bool:
    try:
        check_assignment(kb, {leaf: value})
    except AssignmentError:
        return False
    return True


class EvaluateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    semantics: Literal["logic", "weighted"] = "weighted"
    state: dict[str, float] | None = None
    leaves: dict[str, float] | None = None
    timestamp: str | None = None


class WeightOverride(BaseModel):
    model_config = ConfigDict(extra="forbid")

    child: str
    parent: str
    weight: float


class WhatIfRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    baseline: EvaluateRequest = Field(default_factory=EvaluateRequest)
    overrides: dict[str, float] = Field(default_factory=dict)
    weight_overrides: list[WeightOverride] = Field(default_factory=list)


class SeriesBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    series: dict[str, list[tuple[str, float]]]


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def create_app(store: ScenarioStore, ui_dir: str | None = None) -> FastAPI:
    """Build the application around a scenario store.

    ``ui_dir`` optionally mounts a static single-page UI at the root; the
    API lives under ``/api`` either way.
    """
    app = FastAPI(title="reflexkb", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def require_scenario() -> Scenario:
        scenario = store.get()
        if scenario is None:
            raise HTTPException(status_code=409, detail="no scenario loaded")
        return scenario

    def evaluate(scenario: Scenario, request: EvaluateRequest) -> dict:
        if request.semantics == "logic":
            if request.leaves is not None or request.timestamp is not None:
                raise _bad_request(
                    ValueError("logic semantics takes a state, not leaves "
                               "or a timestamp")
                )
            try:
                state = ReflexiveState.from_mapping(request.state or {})
            except ValueError as exc:
                raise _bad_request(exc) from exc
            outcome = evaluate_conflict_logic(state)
            return {
                "semantics": "logic",
                "outcome": {
                    "readiness_a": outcome.readiness_a,
                    "self_esteem_a": outcome.self_esteem_a,
                    "readiness_b": outcome.readiness_b,
                    "self_esteem_b": outcome.self_esteem_b,
                },
            }

        if request.state is not None:
            raise _bad_request(
                ValueError("weighted semantics takes leaves, not a state")
            )
        assignment = _resolve_assignment(
            scenario, request.leaves or {}, request.timestamp
        )
        try:
            result, degrees = evaluate_with_degrees(
                scenario.kb, assignment, scenario.epsilon
            )
        except (AssignmentError, MissingPatternRoleError,
                GraphValidationError) as exc:
            raise _bad_request(exc) from exc
        return {
            "semantics": "weighted",
            "timestamp": request.timestamp,
            "result": _result_payload(result),
            "degrees": degrees,
        }

    @app.get("/api/kb")
    def get_kb() -> dict:
        return graph_to_document(require_scenario().kb)

    @app.put("/api/kb")
    def put_kb(document: dict) -> dict:
        try:
            kb = graph_from_document(document)
        except DocumentError as exc:
            raise _bad_request(exc) from exc
        report = validate(kb)
        if not report.ok:
            raise HTTPException(
                status_code=400,
                detail=[finding.message for finding in report.findings],
            )
        return graph_to_document(store.replace_kb(kb).kb)

    @app.post("/api/evaluate")
    def post_evaluate(request: EvaluateRequest) -> dict:
        return evaluate(require_scenario(), request)

    @app.post("/api/whatif")
    def post_whatif(request: WhatIfRequest) -> dict:
        scenario = require_scenario()
        baseline = evaluate(scenario, request.baseline)

        if request.baseline.semantics == "logic":
            if request.weight_overrides:
                raise _bad_request(
                    ValueError("weight overrides need weighted semantics")
                )
            state = dict(request.baseline.state or {})
            state.update(request.overrides)
            adjusted_request = request.baseline.model_copy(
                update={"state": state}
            )
            adjusted = evaluate(scenario, adjusted_request)
            delta = None
        else:
            leaves = dict(request.baseline.leaves or {})
            leaves.update(request.overrides)
            adjusted_request = request.baseline.model_copy(
                update={"leaves": leaves}
            )
            adjusted_scenario = scenario
            if request.weight_overrides:
                try:
                    adjusted_scenario = Scenario(
                        kb=_override_weights(scenario.kb, request.weight_overrides),
                        leaves=scenario.leaves,
                        series=scenario.series,
                        epsilon=scenario.epsilon,
                    )
                except ValueError as exc:
                    raise _bad_request(exc) from exc
            adjusted = evaluate(adjusted_scenario, adjusted_request)
            delta = adjusted["result"]["g_degree"] - baseline["result"]["g_degree"]

        return {"baseline": baseline, "adjusted": adjusted, "delta_g": delta}

    @app.get("/api/series")
    def get_series() -> dict:
        scenario = require_scenario()
        return {
            "series": {
                leaf: [[stamp, value] for stamp, value in points]
                for leaf, points in scenario.series.items()
            },
            "timestamps": scenario.timestamps(),
        }

    @app.post("/api/series")
    def post_series(body: SeriesBody) -> dict:
        require_scenario()
        series = {
            leaf: tuple((stamp, value) for stamp, value in points)
            for leaf, points in body.series.items()
        }
        try:
            store.replace_series(series)
        except LookupError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except (AssignmentError, ValueError) as exc:
            raise _bad_request(exc) from exc
        return get_series()

    @app.get("/api/evaluate/series")
    def evaluate_series() -> dict:
        scenario = require_scenario()
        if not scenario.series:
            raise _bad_request(ValueError("no series bound to any leaf"))
        try:
            points = evaluate_conflict_series(
                scenario.kb,
                scenario.series,
                constants=scenario.leaves,
                epsilon=scenario.epsilon,
            )
        except (AssignmentError, MissingPatternRoleError, SeriesGridError,
                GraphValidationError) as exc:
            raise _bad_request(exc) from exc
        return {
            "points": [
                {"timestamp": stamp, **_result_payload(result)}
                for stamp, result in points
            ]
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _result_payload(result) -> dict:
    return {
        "g_degree": result.g_degree,
        "goal_a_degree": result.goal_a_degree,
        "goal_b_degree": result.goal_b_degree,
        "self_esteem_a_degree": result.self_esteem_a_degree,
        "self_esteem_b_degree": result.self_esteem_b_degree,
        "winner": result.winner.value,
    }


def _resolve_assignment(
    scenario: Scenario, overrides: dict[str, float], timestamp: str | None
) -> dict[str, float]:
    assignment = dict(scenario.leaves)
    if timestamp is not None:
        grid = scenario.timestamps()
        if not grid:
            raise _bad_request(ValueError("no series bound, cannot evaluate "
                                          "at a timestamp"))
        if timestamp not in grid:
            raise _bad_request(ValueError(f"unknown timestamp {timestamp!r}"))
        index = grid.index(timestamp)
        for leaf, points in scenario.series.items():
            assignment[leaf] = points[index][1]
    assignment.update(overrides)
    return assignment


def _override_weights(
    kb: GoalGraph, overrides: list[WeightOverride]
) -> GoalGraph:
    replacements = {(o.child, o.parent): o.weight for o in overrides}
    known = {(edge.child, edge.parent) for edge in kb.edges}
    for pair in replacements:
        if pair not in known:
            raise _bad_request(
                ValueError(f"no edge {pair[0]!r} -> {pair[1]!r} to override")
            )
    # edge order is preserved so accumulation order, and therefore every
    # degree bit, matches an equivalent unmodified graph
    edges = tuple(
        InfluenceEdge(
            edge.child,
            edge.parent,
            replacements.get((edge.child, edge.parent), edge.weight),
        )
        for edge in kb.edges
    )
    return GoalGraph(nodes=kb.nodes, edges=edges, groups=kb.groups)
