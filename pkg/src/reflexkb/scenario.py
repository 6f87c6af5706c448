"""A scenario bundles a knowledge base with the data needed to evaluate it.

That means constant leaf degrees, optional per-leaf time series (already
normalised into [0, 1] or [-1, 1] as the leaf's role allows), and the
epsilon used by the draw band.  Scenarios are the unit the service loads,
serves, and swaps; documents with only the KB keys load with empty data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from reflexkb.graph import (
    DocumentError,
    GoalGraph,
    GraphValidationError,
    check_assignment,
    graph_from_document,
    graph_to_document,
    validate,
)

__all__ = [
    "Scenario",
    "load_scenario",
    "scenario_from_document",
    "scenario_to_document",
]


@dataclass(frozen=True)
class Scenario:
    """Validated knowledge base plus its evaluation inputs."""

    kb: GoalGraph
    leaves: Mapping[str, float] = field(default_factory=dict)
    series: Mapping[str, tuple[tuple[str, float], ...]] = field(
        default_factory=dict
    )
    epsilon: float = 1e-9

    def __post_init__(self) -> None:
        report = validate(self.kb)
        if not report.ok:
            raise GraphValidationError(report)
        object.__setattr__(self, "leaves", dict(self.leaves))
        object.__setattr__(
            self,
            "series",
            {
                leaf: tuple((str(stamp), float(value)) for stamp, value in points)
                for leaf, points in self.series.items()
            },
        )
        check_assignment(self.kb, self.leaves)
        grid: tuple[str, ...] | None = None
        for leaf, points in self.series.items():
            for _, value in points:
                check_assignment(self.kb, {leaf: value})
            stamps = tuple(stamp for stamp, _ in points)
            if any(a >= b for a, b in zip(stamps, stamps[1:])):
                raise ValueError(
                    f"series for leaf {leaf!r} must have strictly "
                    "increasing timestamps"
                )
            if grid is None:
                grid = stamps
            elif stamps != grid:
                raise ValueError(
                    f"series for leaf {leaf!r} does not share the common "
                    "timestamp grid"
                )
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon!r}")

    def timestamps(self) -> list[str]:
        """The common time grid, empty when no series are bound."""
        for points in self.series.values():
            return [stamp for stamp, _ in points]
        return []


def scenario_from_document(document: object) -> Scenario:
    """Build a scenario from a parsed JSON document.

    Accepts either a bare KB document or an object with a "kb" key plus
    optional "leaves" (flat name to value), "series" (leaf name to array
    of [timestamp, value] pairs), and "epsilon".
    """
    if not isinstance(document, dict):
        raise DocumentError("scenario document must be a JSON object")
    if "kb" not in document:
        return Scenario(kb=graph_from_document(document))

    extra = set(document) - {"kb", "leaves", "series", "epsilon"}
    if extra:
        raise DocumentError(f"unknown scenario keys: {sorted(extra)}")
    kb = graph_from_document(document["kb"])

    leaves_doc = document.get("leaves", {})
    if not isinstance(leaves_doc, dict):
        raise DocumentError('"leaves" must be an object of name to value')
    leaves = {}
    for name, value in leaves_doc.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DocumentError(f"leaf {name!r} value must be a number")
        leaves[str(name)] = float(value)

    series_doc = document.get("series", {})
    if not isinstance(series_doc, dict):
        raise DocumentError('"series" must be an object of leaf to points')
    series = {}
    for name, points in series_doc.items():
        if not isinstance(points, list):
            raise DocumentError(f"series {name!r} must be an array of pairs")
        parsed = []
        for point in points:
            if (
                not isinstance(point, (list, tuple))
                or len(point) != 2
                or not isinstance(point[1], (int, float))
                or isinstance(point[1], bool)
            ):
                raise DocumentError(
                    f"series {name!r} points must be [timestamp, value] pairs"
                )
            parsed.append((str(point[0]), float(point[1])))
        series[str(name)] = tuple(parsed)

    epsilon = document.get("epsilon", 1e-9)
    if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool):
        raise DocumentError('"epsilon" must be a number')

    try:
        return Scenario(kb=kb, leaves=leaves, series=series, epsilon=float(epsilon))
    except ValueError as exc:
        if isinstance(exc, GraphValidationError):
            raise
        raise DocumentError(str(exc)) from exc


def scenario_to_document(scenario: Scenario) -> dict:
    """Serialise a scenario to its JSON document form."""
    return {
        "kb": graph_to_document(scenario.kb),
        "leaves": dict(scenario.leaves),
        "series": {
            leaf: [[stamp, value] for stamp, value in points]
            for leaf, points in scenario.series.items()
        },
        "epsilon": scenario.epsilon,
    }


def load_scenario(path: str) -> Scenario:
    """Read a scenario (or bare KB) JSON file from disk."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_document(document)
