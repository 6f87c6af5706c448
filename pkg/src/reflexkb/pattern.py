"""The reusable two-subject conflict topology and its win/draw rule.

The pattern is a small goal graph: a main outcome goal fed positively by
subject A's goal and negatively by subject B's, each subject goal fed
positively by the shared environment leaf and negatively by that subject's
self-esteem goal, and each self-esteem goal fed by its six situation
leaves with the signs of the flat reflexive form (expectations positive,
intention literals negative).  The sign of the main goal's degree decides
the conflict: positive means subject A prevails, negative subject B, and
anything inside the epsilon band is a draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from reflexkb.graph import (
    CompatibilityGroup,
    GoalGraph,
    GoalNode,
    GraphValidationError,
    InfluenceEdge,
    propagate,
    propagate_series,
    validate,
)

__all__ = [
    "ConflictResult",
    "DEFAULT_EPSILON",
    "ExtensionError",
    "MissingPatternRoleError",
    "PatternRoles",
    "SubjectSpec",
    "Winner",
    "build_pattern",
    "decide_outcome",
    "evaluate_conflict",
    "evaluate_conflict_series",
    "evaluate_with_degrees",
    "extend_pattern",
    "resolve_pattern_roles",
]

#: Width of the draw band around zero.  An exact-zero draw is measure zero
#: in floating point, so "draw" means |g| <= epsilon.
DEFAULT_EPSILON = 1e-9

A_SIDE_LEAVES = ("a2", "b2", "a3", "b3", "a4", "b4")
B_SIDE_LEAVES = ("c2", "d2", "c3", "d3", "c4", "d4")


class Winner(str, Enum):
    SUBJECT_A = "subject_a"
    SUBJECT_B = "subject_b"
    DRAW = "draw"


class MissingPatternRoleError(ValueError):
    """The graph lacks the role-tagged nodes the conflict pattern needs."""


class ExtensionError(ValueError):
    """An extension would break the graph or alter the pattern core."""


@dataclass(frozen=True)
class SubjectSpec:
    """Display identity of one conflict subject."""

    name: str

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ValueError("subject name must be non-empty")


@dataclass(frozen=True)
class ConflictResult:
    g_degree: float
    goal_a_degree: float
    goal_b_degree: float
    self_esteem_a_degree: float
    self_esteem_b_degree: float
    winner: Winner


@dataclass(frozen=True)
class PatternRoles:
    """Node ids filling the five pattern roles in a graph."""

    main: str
    goal_a: str
    goal_b: str
    self_esteem_a: str
    self_esteem_b: str


def decide_outcome(g: float, epsilon: float = DEFAULT_EPSILON) -> Winner:
    """Map the main goal's degree to a verdict.

    g > epsilon favours subject A, g < -epsilon subject B, and the band
    in between is a draw.
    """
    if not math.isfinite(g):
        raise ValueError(f"main goal degree must be finite, got {g!r}")
    if not (math.isfinite(epsilon) and epsilon >= 0):
        raise ValueError(f"epsilon must be a non-negative real, got {epsilon!r}")
    if g > epsilon:
        return Winner.SUBJECT_A
    if g < -epsilon:
        return Winner.SUBJECT_B
    return Winner.DRAW


def build_pattern(a: SubjectSpec, b: SubjectSpec) -> GoalGraph:
    """Construct the conflict pattern for two distinct subjects.

    The result has 18 nodes and 18 edges: the main goal G, goal and
    self-esteem nodes per subject, the shared environment leaf a1 and the
    twelve situation leaves.  All edge magnitudes are 1; analysts override
    weights through extension or expert estimates.
    """
    if a.name == b.name:
        raise ValueError(f"the two subjects must have different names: {a.name!r}")

    nodes = [
        GoalNode("G", f"{a.name} prevails over {b.name}", "internal", "main"),
        GoalNode("GoalA", f"Goal of {a.name}", "internal", "subject_goal"),
        GoalNode("GoalB", f"Goal of {b.name}", "internal", "subject_goal"),
        GoalNode("A1", f"Self-esteem of {a.name}", "internal", "self_esteem"),
        GoalNode("B1", f"Self-esteem of {b.name}", "internal", "self_esteem"),
        GoalNode("a1", "Influence of the environment on both subjects",
                 "leaf", "reflexive_leaf"),
    ]
    leaf_labels = {
        "a2": f"Influence of the environment expected by {a.name}",
        "b2": f"Influence expected by {b.name}, from {a.name}'s point of view",
        "a3": f"Intentions of {a.name}",
        "b3": f"Intentions of {b.name}, as {a.name} sees them",
        "a4": f"How {a.name} thinks {b.name} sees {a.name}'s intentions",
        "b4": f"How {a.name} thinks {b.name} sees {b.name}'s own intentions",
        "c2": f"Influence of the environment expected by {b.name}",
        "d2": f"Influence expected by {a.name}, from {b.name}'s point of view",
        "c3": f"Intentions of {b.name}",
        "d3": f"Intentions of {a.name}, as {b.name} sees them",
        "c4": f"How {b.name} thinks {a.name} sees {b.name}'s intentions",
        "d4": f"How {b.name} thinks {a.name} sees {a.name}'s own intentions",
    }
    for leaf_id in A_SIDE_LEAVES + B_SIDE_LEAVES:
        nodes.append(GoalNode(leaf_id, leaf_labels[leaf_id], "leaf", "reflexive_leaf"))

    edges = [
        InfluenceEdge("GoalA", "G", 1.0),
        InfluenceEdge("GoalB", "G", -1.0),
        InfluenceEdge("a1", "GoalA", 1.0),
        InfluenceEdge("A1", "GoalA", -1.0),
        InfluenceEdge("a1", "GoalB", 1.0),
        InfluenceEdge("B1", "GoalB", -1.0),
    ]
    for leaf_id in A_SIDE_LEAVES:
        sign = 1.0 if leaf_id in ("a2", "b2") else -1.0
        edges.append(InfluenceEdge(leaf_id, "A1", sign))
    for leaf_id in B_SIDE_LEAVES:
        sign = 1.0 if leaf_id in ("c2", "d2") else -1.0
        edges.append(InfluenceEdge(leaf_id, "B1", sign))

    kb = GoalGraph(tuple(nodes), tuple(edges))
    report = validate(kb)
    if not report.ok:  # construction bug, not caller input
        raise GraphValidationError(report)
    return kb


def resolve_pattern_roles(kb: GoalGraph) -> PatternRoles:
    """Locate the five pattern nodes by role.

    A valid pattern graph has exactly one ``main`` node, two
    ``subject_goal`` nodes and two ``self_esteem`` nodes, each self-esteem
    feeding exactly one subject goal.  Subject A is the first subject goal
    in node order.  Anything else raises :class:`MissingPatternRoleError`,
    distinct from plain graph validation failures.
    """
    mains = [n.id for n in kb.nodes if n.role == "main"]
    goals = [n.id for n in kb.nodes if n.role == "subject_goal"]
    esteems = [n.id for n in kb.nodes if n.role == "self_esteem"]
    if len(mains) != 1:
        raise MissingPatternRoleError(
            f"expected exactly one 'main' node, found {mains or 'none'}"
        )
    if len(goals) != 2:
        raise MissingPatternRoleError(
            f"expected exactly two 'subject_goal' nodes, found {goals or 'none'}"
        )
    if len(esteems) != 2:
        raise MissingPatternRoleError(
            f"expected exactly two 'self_esteem' nodes, found {esteems or 'none'}"
        )

    esteem_of: dict[str, str] = {}
    for goal in goals:
        feeding = [
            e.child for e in kb.edges if e.parent == goal and e.child in esteems
        ]
        if len(feeding) != 1:
            raise MissingPatternRoleError(
                f"subject goal {goal!r} must be fed by exactly one self-esteem "
                f"node, found {feeding or 'none'}"
            )
        esteem_of[goal] = feeding[0]
    if esteem_of[goals[0]] == esteem_of[goals[1]]:
        raise MissingPatternRoleError(
            "both subject goals are fed by the same self-esteem node"
        )

    return PatternRoles(
        main=mains[0],
        goal_a=goals[0],
        goal_b=goals[1],
        self_esteem_a=esteem_of[goals[0]],
        self_esteem_b=esteem_of[goals[1]],
    )


def _result_from_degrees(
    roles: PatternRoles, degrees: Mapping[str, float], epsilon: float
) -> ConflictResult:
    g = degrees[roles.main]
    return ConflictResult(
        g_degree=g,
        goal_a_degree=degrees[roles.goal_a],
        goal_b_degree=degrees[roles.goal_b],
        self_esteem_a_degree=degrees[roles.self_esteem_a],
        self_esteem_b_degree=degrees[roles.self_esteem_b],
        winner=decide_outcome(g, epsilon),
    )


def evaluate_with_degrees(
    kb: GoalGraph,
    leaves: Mapping[str, float],
    epsilon: float = DEFAULT_EPSILON,
) -> tuple[ConflictResult, dict[str, float]]:
    """Propagate and decide, returning the full degree map alongside the
    result.  All numbers come from one propagate call; nothing is
    recomputed on a second arithmetic path."""
    roles = resolve_pattern_roles(kb)
    degrees = propagate(kb, leaves)
    return _result_from_degrees(roles, degrees, epsilon), degrees


def evaluate_conflict(
    kb: GoalGraph,
    leaves: Mapping[str, float],
    epsilon: float = DEFAULT_EPSILON,
) -> ConflictResult:
    """Evaluate a pattern-bearing graph and decide the conflict."""
    result, _ = evaluate_with_degrees(kb, leaves, epsilon)
    return result


def evaluate_conflict_series(
    kb: GoalGraph,
    leaf_series: Mapping[str, Sequence[tuple[object, float]]],
    constants: Mapping[str, float] | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> list[tuple[object, ConflictResult]]:
    """Decide the conflict at every timestamp of a common series grid.

    Each point is exactly the single-shot evaluation with the series
    values of that timestamp overlaid on the constant assignment.
    """
    roles = resolve_pattern_roles(kb)
    node_series = propagate_series(kb, leaf_series, constants)
    grid = [ts for ts, _ in node_series[roles.main]]
    results = []
    for index, stamp in enumerate(grid):
        degrees = {node_id: series[index][1] for node_id, series in node_series.items()}
        results.append((stamp, _result_from_degrees(roles, degrees, epsilon)))
    return results


def _pattern_core_ids(kb: GoalGraph) -> set[str]:
    return {n.id for n in kb.nodes if n.role is not None and n.role != "custom"}


def extend_pattern(
    kb: GoalGraph,
    nodes: Iterable[GoalNode] = (),
    edges: Iterable[InfluenceEdge] = (),
    groups: Iterable[CompatibilityGroup] = (),
) -> GoalGraph:
    """Complement a pattern graph with extra goals, influences and groups.

    Additions are purely additive: the pattern-role nodes and the edges
    between them stay untouched.  Rejected with :class:`ExtensionError`:
    duplicate node ids, edges duplicating an existing child/parent pair,
    edges between two pattern-core nodes, and anything that leaves the
    combined graph invalid (cycles, dangling endpoints, bad weights).
    """
    new_nodes = tuple(nodes)
    new_edges = tuple(edges)
    new_groups = tuple(groups)

    existing_ids = set(kb.node_ids())
    added_ids: set[str] = set()
    for node in new_nodes:
        if node.id in existing_ids or node.id in added_ids:
            raise ExtensionError(f"duplicate node id {node.id!r}")
        added_ids.add(node.id)

    core = _pattern_core_ids(kb)
    pairs = {(e.child, e.parent) for e in kb.edges}
    for edge in new_edges:
        if (edge.child, edge.parent) in pairs:
            raise ExtensionError(
                f"edge {edge.child!r} -> {edge.parent!r} already exists"
            )
        pairs.add((edge.child, edge.parent))
        if edge.child in core and edge.parent in core:
            raise ExtensionError(
                f"edge {edge.child!r} -> {edge.parent!r} would alter the "
                "pattern core"
            )

    combined = GoalGraph(
        kb.nodes + new_nodes, kb.edges + new_edges, kb.groups + new_groups
    )
    report = validate(combined)
    if not report.ok:
        raise ExtensionError(
            "extension leaves the graph invalid: "
            + "; ".join(f.message for f in report.findings)
        )
    return combined
