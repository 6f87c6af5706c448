"""Independent reference implementations the tests check the engine against.

Everything here is written the slow, obvious way on purpose: boolean logic
over Python bools, recursive graph evaluation in exact rational arithmetic,
naive random DAGs.  None of it shares arithmetic with the package.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from reflexkb.graph import GoalGraph, GoalNode, InfluenceEdge

# --- boolean readiness formulas, straight off the nested implications ----


def bool_implies(x: bool, y: bool) -> bool:
    return (not x) or y


def bool_self_esteem(a2: bool, b2: bool, a3: bool, b3: bool,
                     a4: bool, b4: bool) -> bool:
    return bool_implies(a3 and b3, a2) or bool_implies(a4 and b4, b2)


def bool_readiness(a1: bool, a2: bool, b2: bool, a3: bool, b3: bool,
                   a4: bool, b4: bool) -> bool:
    return bool_implies(bool_self_esteem(a2, b2, a3, b3, a4, b4), a1)


def enumerate_bool_rows() -> list[tuple[tuple[bool, ...], bool, bool]]:
    """All 128 assignments of (a1, a2, b2, a3, b3, a4, b4), lexicographic
    with a1 most significant; each row carries (bits, self_esteem,
    readiness)."""
    rows = []
    for bits in itertools.product((False, True), repeat=7):
        a1, a2, b2, a3, b3, a4, b4 = bits
        rows.append(
            (
                bits,
                bool_self_esteem(a2, b2, a3, b3, a4, b4),
                bool_readiness(a1, a2, b2, a3, b3, a4, b4),
            )
        )
    return rows


# --- recursive propagation oracles ---------------------------------------


def _incoming_by_parent(kb: GoalGraph) -> dict[str, list[InfluenceEdge]]:
    incoming: dict[str, list[InfluenceEdge]] = {node.id: [] for node in kb.nodes}
    for edge in kb.edges:
        incoming[edge.parent].append(edge)
    return incoming


def recursive_degrees_exact(kb: GoalGraph, leaves: dict[str, float]) -> dict[str, float]:
    """Recursive descent in exact rational arithmetic; floats only at the
    very end.  A genuinely different arithmetic path from the engine's
    topological float sweep."""
    incoming = _incoming_by_parent(kb)
    cache: dict[str, Fraction] = {}

    def degree(node_id: str) -> Fraction:
        if node_id in cache:
            return cache[node_id]
        edges = incoming[node_id]
        if not edges:
            value = Fraction(leaves.get(node_id, 0.0))
        else:
            numerator = sum(
                (Fraction(edge.weight) * degree(edge.child) for edge in edges),
                Fraction(0),
            )
            denominator = sum(
                (abs(Fraction(edge.weight)) for edge in edges), Fraction(0)
            )
            value = numerator / denominator
        cache[node_id] = value
        return value

    return {node.id: float(degree(node.id)) for node in kb.nodes}


def recursive_degrees_float(kb: GoalGraph, leaves: dict[str, float]) -> dict[str, float]:
    """Recursive descent in binary64, accumulating in document edge order.

    Visits nodes in a different order than a topological sweep, but each
    node's own sum runs over the same edges in the same order, so the
    result must be bit-identical: per-node arithmetic only depends on the
    children's final values.
    """
    incoming = _incoming_by_parent(kb)
    cache: dict[str, float] = {}

    def degree(node_id: str) -> float:
        if node_id in cache:
            return cache[node_id]
        edges = incoming[node_id]
        if not edges:
            value = float(leaves.get(node_id, 0.0))
        else:
            numerator = 0.0
            denominator = 0.0
            for edge in edges:
                numerator += edge.weight * degree(edge.child)
                denominator += abs(edge.weight)
            value = numerator / denominator
        cache[node_id] = value
        return value

    return {node.id: degree(node.id) for node in kb.nodes}


# --- random fixtures ------------------------------------------------------


def random_dag(rng: random.Random, max_nodes: int = 8) -> GoalGraph:
    """Small random DAG that passes validation.

    Nodes are laid out in a random topological order; every internal node
    draws at least one edge from strictly earlier nodes, so no cycles.
    Weight magnitudes stay in [0.01, 0.1] so scaling them by 10 still
    respects the |weight| <= 1 bound.
    """
    count = rng.randint(2, max_nodes)
    ids = [f"n{i}" for i in range(count)]
    leaf_count = rng.randint(1, count - 1)
    nodes = [
        GoalNode(id=node_id, kind="leaf" if i < leaf_count else "internal")
        for i, node_id in enumerate(ids)
    ]
    edges = []
    for i in range(leaf_count, count):
        children = rng.sample(ids[:i], k=rng.randint(1, min(i, 4)))
        for child in children:
            weight = rng.uniform(0.01, 0.1) * rng.choice((1.0, -1.0))
            edges.append(InfluenceEdge(child, ids[i], weight))
    return GoalGraph(tuple(nodes), tuple(edges))


def random_leaf_assignment(rng: random.Random, kb: GoalGraph) -> dict[str, float]:
    return {leaf: rng.uniform(-1.0, 1.0) for leaf in kb.leaf_ids()}
