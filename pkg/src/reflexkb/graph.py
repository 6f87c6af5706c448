"""Signed, weighted goal graphs: the knowledge-base layer.

A knowledge base is a DAG of goals.  Edges point from a child goal to the
parent it influences; the edge weight is a partial influence coefficient
in [-1, 1] whose sign encodes whether achieving the child helps or hurts
the parent.  Leaves receive achievement degrees from outside (media
streams, analyst input); internal goals receive the sign-weighted mean of
their children, normalised by the total absolute weight:

    degree(parent) = sum(w_i * degree(child_i)) / sum(|w_i|)

The normalisation keeps every degree inside [-1, 1] without clamping and
makes the result invariant under rescaling all of one node's incoming
weights by a positive factor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

__all__ = [
    "AssignmentError",
    "CompatibilityGroup",
    "DocumentError",
    "Finding",
    "GoalGraph",
    "GoalNode",
    "GraphValidationError",
    "GroupViolation",
    "InfluenceEdge",
    "NODE_KINDS",
    "NODE_ROLES",
    "SeriesGridError",
    "ValidationReport",
    "canonical_document",
    "compatibility_violations",
    "dumps_canonical",
    "graph_from_document",
    "graph_to_document",
    "propagate",
    "propagate_series",
    "validate",
]

NODE_KINDS = ("leaf", "internal")
NODE_ROLES = ("main", "subject_goal", "self_esteem", "reflexive_leaf", "custom")

#: Default degree above which a compatibility-group member counts as active.
DEFAULT_GROUP_THRESHOLD = 0.5


class DocumentError(ValueError):
    """A knowledge-base document does not have the expected JSON shape."""


class AssignmentError(ValueError):
    """A degree assignment references unknown leaves or is out of range."""


class SeriesGridError(ValueError):
    """Leaf series do not share a common, sorted timestamp grid."""


class GraphValidationError(ValueError):
    """Raised when an operation requires a valid graph but got findings."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(f.message for f in report.findings)
        super().__init__(f"invalid goal graph: {lines}")


@dataclass(frozen=True)
class GoalNode:
    id: str
    label: str = ""
    kind: str = "leaf"
    role: str | None = None


@dataclass(frozen=True)
class InfluenceEdge:
    """Directed influence of ``child`` on ``parent`` with a signed weight."""

    child: str
    parent: str
    weight: float


@dataclass(frozen=True)
class CompatibilityGroup:
    """Goals of which at most one should be active at a time.

    Advisory only: violations are reported after propagation but never
    change any degree.
    """

    members: tuple[str, ...]
    threshold: float = DEFAULT_GROUP_THRESHOLD

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class GoalGraph:
    nodes: tuple[GoalNode, ...] = ()
    edges: tuple[InfluenceEdge, ...] = ()
    groups: tuple[CompatibilityGroup, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "groups", tuple(self.groups))

    def node_ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes)

    def node(self, node_id: str) -> GoalNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    def leaf_ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes if node.kind == "leaf")


@dataclass(frozen=True)
class Finding:
    """One validation problem; ``subjects`` are the node ids involved."""

    code: str
    message: str
    subjects: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def codes(self) -> tuple[str, ...]:
        return tuple(f.code for f in self.findings)


@dataclass(frozen=True)
class GroupViolation:
    members: tuple[str, ...]
    active: tuple[str, ...]
    threshold: float


def validate(kb: GoalGraph) -> ValidationReport:
    """Check a graph and report all problems as data.

    Findings cover duplicate node ids, edges with missing endpoints, weights
    that are zero, non-finite or outside [-1, 1], leaves with incoming
    edges, internal nodes without any child, unknown or undersized
    compatibility groups, and cycles.  An empty report means the graph is
    valid.
    """
    findings: list[Finding] = []
    seen: set[str] = set()
    for node in kb.nodes:
        if node.id in seen:
            findings.append(
                Finding("duplicate-id", f"duplicate node id {node.id!r}", (node.id,))
            )
        seen.add(node.id)
        if node.kind not in NODE_KINDS:
            findings.append(
                Finding(
                    "bad-kind",
                    f"node {node.id!r} has unknown kind {node.kind!r}",
                    (node.id,),
                )
            )
        if node.role is not None and node.role not in NODE_ROLES:
            findings.append(
                Finding(
                    "bad-role",
                    f"node {node.id!r} has unknown role {node.role!r}",
                    (node.id,),
                )
            )

    ids = {node.id for node in kb.nodes}
    incoming_count: dict[str, int] = {node.id: 0 for node in kb.nodes}
    for edge in kb.edges:
        missing = [end for end in (edge.child, edge.parent) if end not in ids]
        if missing:
            findings.append(
                Finding(
                    "dangling-edge",
                    f"edge {edge.child!r} -> {edge.parent!r} references "
                    f"unknown node(s) {', '.join(repr(m) for m in missing)}",
                    (edge.child, edge.parent),
                )
            )
        weight_ok = (
            isinstance(edge.weight, (int, float))
            and math.isfinite(edge.weight)
            and edge.weight != 0
            and abs(edge.weight) <= 1.0
        )
        if not weight_ok:
            findings.append(
                Finding(
                    "bad-weight",
                    f"edge {edge.child!r} -> {edge.parent!r} has weight "
                    f"{edge.weight!r}; weights must be nonzero and in [-1, 1]",
                    (edge.child, edge.parent),
                )
            )
        if edge.parent in incoming_count:
            incoming_count[edge.parent] += 1

    for node in kb.nodes:
        if node.kind == "leaf" and incoming_count[node.id] > 0:
            findings.append(
                Finding(
                    "leaf-with-children",
                    f"leaf node {node.id!r} has incoming influence edges",
                    (node.id,),
                )
            )
        if node.kind == "internal" and incoming_count[node.id] == 0:
            findings.append(
                Finding(
                    "childless-internal",
                    f"internal node {node.id!r} has no incoming influence edges",
                    (node.id,),
                )
            )

    for group in kb.groups:
        unknown = [m for m in group.members if m not in ids]
        if unknown:
            findings.append(
                Finding(
                    "unknown-group-member",
                    "compatibility group references unknown node(s) "
                    + ", ".join(repr(m) for m in unknown),
                    tuple(unknown),
                )
            )
        if len(group.members) < 2:
            findings.append(
                Finding(
                    "group-too-small",
                    "compatibility group needs at least 2 members, got "
                    f"{list(group.members)}",
                    tuple(group.members),
                )
            )

    cycle = _find_cycle(kb)
    if cycle:
        findings.append(
            Finding(
                "cycle",
                "influence cycle: " + " -> ".join(cycle),
                tuple(cycle),
            )
        )
    return ValidationReport(tuple(findings))


def _find_cycle(kb: GoalGraph) -> tuple[str, ...] | None:
    sorter: TopologicalSorter[str] = TopologicalSorter()
    for node in kb.nodes:
        sorter.add(node.id)
    for edge in kb.edges:
        sorter.add(edge.parent, edge.child)
    try:
        sorter.prepare()
    except CycleError as exc:
        return tuple(exc.args[1])
    return None


def _incoming(kb: GoalGraph) -> dict[str, list[InfluenceEdge]]:
    edges: dict[str, list[InfluenceEdge]] = {node.id: [] for node in kb.nodes}
    for edge in kb.edges:
        edges[edge.parent].append(edge)
    return edges


def _topological_order(kb: GoalGraph) -> list[str]:
    sorter: TopologicalSorter[str] = TopologicalSorter()
    for node in kb.nodes:
        sorter.add(node.id)
    for edge in kb.edges:
        sorter.add(edge.parent, edge.child)
    return list(sorter.static_order())


def check_assignment(kb: GoalGraph, leaves: Mapping[str, float]) -> None:
    """Reject assignments that target unknown ids, non-leaf nodes, or
    degrees outside the node's range.

    Plain leaves take degrees in [-1, 1]; leaves carrying a reflexive role
    are grades and must stay in [0, 1].
    """
    nodes = {node.id: node for node in kb.nodes}
    for name, value in leaves.items():
        node = nodes.get(name)
        if node is None:
            raise AssignmentError(f"unknown leaf {name!r}")
        if node.kind != "leaf":
            raise AssignmentError(f"{name!r} is not a leaf node")
        degree = float(value)
        if not math.isfinite(degree):
            raise AssignmentError(f"degree for {name!r} must be finite")
        low = 0.0 if node.role == "reflexive_leaf" else -1.0
        if not low <= degree <= 1.0:
            raise AssignmentError(
                f"degree {value!r} for {name!r} outside [{low:g}, 1]"
            )


def propagate(kb: GoalGraph, leaves: Mapping[str, float]) -> dict[str, float]:
    """Compute the achievement degree of every node.

    Leaves take their assigned degree (0 when absent); internal nodes take
    the sign-weighted mean of their children, evaluated in topological
    order.  The graph is validated first and the assignment is range
    checked; both reject rather than producing garbage degrees.
    """
    report = validate(kb)
    if not report.ok:
        raise GraphValidationError(report)
    check_assignment(kb, leaves)
    return _propagate_unchecked(kb, leaves)


def _propagate_unchecked(
    kb: GoalGraph, leaves: Mapping[str, float]
) -> dict[str, float]:
    incoming = _incoming(kb)
    degrees: dict[str, float] = {}
    for node_id in _topological_order(kb):
        edges = incoming[node_id]
        if not edges:
            degrees[node_id] = float(leaves.get(node_id, 0.0))
        else:
            numerator = 0.0
            denominator = 0.0
            for edge in edges:
                numerator += edge.weight * degrees[edge.child]
                denominator += abs(edge.weight)
            degrees[node_id] = numerator / denominator
    return degrees


def propagate_series(
    kb: GoalGraph,
    leaf_series: Mapping[str, Sequence[tuple[object, float]]],
    constants: Mapping[str, float] | None = None,
) -> dict[str, list[tuple[object, float]]]:
    """Propagate per timestamp over a shared grid.

    Every series must run over the same strictly increasing timestamps.
    At each timestamp the leaf assignment is the optional ``constants``
    mapping overlaid with the series values; the result is pointwise equal
    to :func:`propagate` on that assignment.
    """
    report = validate(kb)
    if not report.ok:
        raise GraphValidationError(report)
    if not leaf_series:
        raise SeriesGridError("no leaf series given")

    grid: tuple[object, ...] | None = None
    for leaf_id, samples in leaf_series.items():
        stamps = tuple(ts for ts, _ in samples)
        if not stamps:
            raise SeriesGridError(f"series for {leaf_id!r} is empty")
        if any(a >= b for a, b in zip(stamps, stamps[1:])):
            raise SeriesGridError(
                f"series for {leaf_id!r} is not strictly increasing in time"
            )
        if grid is None:
            grid = stamps
        elif stamps != grid:
            raise SeriesGridError(
                f"series for {leaf_id!r} does not share the common timestamp grid"
            )

    base = dict(constants) if constants else {}
    per_stamp: list[dict[str, float]] = []
    assert grid is not None
    for index, stamp in enumerate(grid):
        assignment = dict(base)
        for leaf_id, samples in leaf_series.items():
            assignment[leaf_id] = samples[index][1]
        check_assignment(kb, assignment)
        per_stamp.append(_propagate_unchecked(kb, assignment))

    return {
        node.id: [(stamp, per_stamp[i][node.id]) for i, stamp in enumerate(grid)]
        for node in kb.nodes
    }


def compatibility_violations(
    kb: GoalGraph, degrees: Mapping[str, float]
) -> tuple[GroupViolation, ...]:
    """Report groups with two or more members above their threshold.

    Purely advisory: callers decide what to do with violations, the degrees
    themselves are never altered.
    """
    violations = []
    for group in kb.groups:
        active = tuple(
            m for m in group.members if degrees.get(m, 0.0) > group.threshold
        )
        if len(active) >= 2:
            violations.append(GroupViolation(group.members, active, group.threshold))
    return tuple(violations)


# --- document (de)serialisation ---------------------------------------------
#
# A knowledge base travels as one JSON object:
#   {"nodes": [{"id", "label", "kind", "role"}, ...],
#    "edges": [{"child", "parent", "weight"}, ...],
#    "groups": [{"members": [...], "threshold": x}, ...]}


def graph_to_document(kb: GoalGraph) -> dict:
    return {
        "nodes": [
            {"id": n.id, "label": n.label, "kind": n.kind, "role": n.role}
            for n in kb.nodes
        ],
        "edges": [
            {"child": e.child, "parent": e.parent, "weight": e.weight}
            for e in kb.edges
        ],
        "groups": [
            {"members": list(g.members), "threshold": g.threshold}
            for g in kb.groups
        ],
    }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DocumentError(message)


def graph_from_document(doc: object) -> GoalGraph:
    """Parse a knowledge-base document.

    Shape problems (wrong types, missing fields) raise
    :class:`DocumentError`; semantic problems (cycles, bad weights) are
    left for :func:`validate` so they can be reported as findings.
    """
    _require(isinstance(doc, dict), "document must be a JSON object")
    assert isinstance(doc, dict)
    unknown = set(doc) - {"nodes", "edges", "groups"}
    _require(not unknown, f"unknown document keys: {sorted(unknown)}")

    nodes = []
    for i, raw in enumerate(doc.get("nodes", [])):
        _require(isinstance(raw, dict), f"nodes[{i}] must be an object")
        _require("id" in raw, f"nodes[{i}] is missing 'id'")
        _require(isinstance(raw["id"], str) and raw["id"] != "",
                 f"nodes[{i}].id must be a non-empty string")
        label = raw.get("label", "")
        _require(isinstance(label, str), f"nodes[{i}].label must be a string")
        kind = raw.get("kind", "leaf")
        _require(isinstance(kind, str), f"nodes[{i}].kind must be a string")
        role = raw.get("role")
        _require(role is None or isinstance(role, str),
                 f"nodes[{i}].role must be a string or null")
        nodes.append(GoalNode(id=raw["id"], label=label, kind=kind, role=role))

    edges = []
    for i, raw in enumerate(doc.get("edges", [])):
        _require(isinstance(raw, dict), f"edges[{i}] must be an object")
        for key in ("child", "parent", "weight"):
            _require(key in raw, f"edges[{i}] is missing {key!r}")
        _require(isinstance(raw["child"], str) and isinstance(raw["parent"], str),
                 f"edges[{i}] endpoints must be strings")
        _require(isinstance(raw["weight"], (int, float))
                 and not isinstance(raw["weight"], bool),
                 f"edges[{i}].weight must be a number")
        edges.append(
            InfluenceEdge(raw["child"], raw["parent"], float(raw["weight"]))
        )

    groups = []
    for i, raw in enumerate(doc.get("groups", [])):
        _require(isinstance(raw, dict), f"groups[{i}] must be an object")
        members = raw.get("members")
        _require(isinstance(members, list)
                 and all(isinstance(m, str) for m in members),
                 f"groups[{i}].members must be a list of node ids")
        threshold = raw.get("threshold", DEFAULT_GROUP_THRESHOLD)
        _require(isinstance(threshold, (int, float))
                 and not isinstance(threshold, bool),
                 f"groups[{i}].threshold must be a number")
        groups.append(CompatibilityGroup(tuple(members), float(threshold)))

    return GoalGraph(tuple(nodes), tuple(edges), tuple(groups))


def canonical_document(kb: GoalGraph) -> dict:
    """Document with nodes, edges and groups in a canonical order, so two
    equal graphs serialise to identical bytes."""
    doc = graph_to_document(kb)
    doc["nodes"] = sorted(doc["nodes"], key=lambda n: n["id"])
    doc["edges"] = sorted(
        doc["edges"], key=lambda e: (e["parent"], e["child"], e["weight"])
    )
    doc["groups"] = sorted(
        doc["groups"], key=lambda g: (g["members"], g["threshold"])
    )
    return doc


def dumps_canonical(kb: GoalGraph) -> str:
    """Canonical JSON text for a graph (sorted, indented, trailing newline)."""
    return json.dumps(canonical_document(kb), indent=2, sort_keys=True) + "\n"
