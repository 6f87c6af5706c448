"""Two-subject conflict modelling for information-operation analysis.

The package has three layers:

* :mod:`reflexkb.reflexive` evaluates the second-order reflexive choice and
  self-esteem formulas over graded truth values.
* :mod:`reflexkb.graph` and :mod:`reflexkb.pattern` hold the decision-support
  knowledge base: a signed, weighted goal DAG, plus the reusable two-subject
  conflict topology and its win/draw rule.
* :mod:`reflexkb.ingest`, :mod:`reflexkb.cli` and :mod:`reflexkb.service`
  connect the engine to media time series, expert estimates, scripts and an
  HTTP/JSON API.
"""

from reflexkb.graph import (
    CompatibilityGroup,
    Finding,
    GoalGraph,
    GoalNode,
    GraphValidationError,
    InfluenceEdge,
    ValidationReport,
    graph_from_document,
    graph_to_document,
    propagate,
    propagate_series,
    validate,
)
from reflexkb.pattern import (
    ConflictResult,
    SubjectSpec,
    Winner,
    build_pattern,
    decide_outcome,
    evaluate_conflict,
    extend_pattern,
)
from reflexkb.reflexive import (
    ReflexiveOutcome,
    ReflexiveState,
    SoloState,
    enumerate_truth_table,
    evaluate_conflict_dnf,
    evaluate_conflict_logic,
    evaluate_solo,
    implies,
)

__all__ = [
    "CompatibilityGroup",
    "ConflictResult",
    "Finding",
    "GoalGraph",
    "GoalNode",
    "GraphValidationError",
    "InfluenceEdge",
    "ReflexiveOutcome",
    "ReflexiveState",
    "SoloState",
    "SubjectSpec",
    "ValidationReport",
    "Winner",
    "build_pattern",
    "decide_outcome",
    "enumerate_truth_table",
    "evaluate_conflict",
    "evaluate_conflict_dnf",
    "evaluate_conflict_logic",
    "evaluate_solo",
    "extend_pattern",
    "graph_from_document",
    "graph_to_document",
    "implies",
    "propagate",
    "propagate_series",
    "validate",
]

__version__ = "0.1.0"
