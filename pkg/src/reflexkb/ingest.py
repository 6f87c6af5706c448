"""Turn media monitoring streams and expert estimates into engine inputs.

Thematic publication counts arrive as CSV (``date,topic,count``), get
min-max normalised into intensities in [0, 1], and are bound to knowledge
base leaves.  Expert judgements about edge weights arrive as a JSON array
and are aggregated per edge with a competence-weighted mean.

Aggregation runs in exact rational arithmetic on the decimal reading of
each number (via its shortest repr), so inputs that look like 0.4 and 0.8
combine the way an analyst would expect instead of picking up binary
round-off.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from typing import Sequence

from reflexkb.graph import GoalGraph

__all__ = [
    "BindingError",
    "ExpertEstimate",
    "LeafBinding",
    "SeriesParseError",
    "TopicSeries",
    "aggregate_expert_estimates",
    "bind_series_to_leaves",
    "normalize_series",
    "parse_bindings",
    "parse_expert_estimates",
    "parse_topic_series",
]

CSV_HEADER = ("date", "topic", "count")
TRANSFORMS = ("identity", "complement")

#: Roles a leaf may carry and still accept a bound topic series.
BINDABLE_ROLES = ("custom", "reflexive_leaf")


class SeriesParseError(ValueError):
    """CSV input is malformed; ``errors`` lists every problem with its
    1-based line number."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(errors))


class BindingError(ValueError):
    """A topic/leaf binding references something that does not exist or
    is not bindable."""


@dataclass(frozen=True)
class TopicSeries:
    """Publication counts of one topic over strictly increasing dates."""

    topic_id: str
    samples: tuple[tuple[date, int], ...]


@dataclass(frozen=True)
class LeafBinding:
    """Routes a topic's normalised intensity onto one knowledge-base leaf."""

    topic_id: str
    leaf_id: str
    transform: str = "identity"

    def __post_init__(self) -> None:
        if self.transform not in TRANSFORMS:
            raise ValueError(
                f"transform must be one of {TRANSFORMS}, got {self.transform!r}"
            )


@dataclass(frozen=True)
class ExpertEstimate:
    """One expert's judgement of a single edge weight.

    ``competence`` weights the expert's voice in aggregation and must be
    positive; ``estimate`` is the proposed partial influence coefficient.
    """

    expert_id: str
    child: str
    parent: str
    estimate: float
    competence: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.estimate) and -1.0 <= self.estimate <= 1.0):
            raise ValueError(
                f"estimate must lie in [-1, 1], got {self.estimate!r}"
            )
        if not (math.isfinite(self.competence) and self.competence > 0):
            raise ValueError(
                f"competence must be positive, got {self.competence!r}"
            )


def parse_topic_series(document: str) -> list[TopicSeries]:
    """Parse ``date,topic,count`` CSV into one series per topic.

    All problems are collected and raised together as
    :class:`SeriesParseError`, each naming its line: malformed rows, bad
    dates, non-integer or negative counts, duplicate (date, topic) pairs.
    Topics keep their order of first appearance; samples are date-sorted.
    """
    reader = csv.reader(io.StringIO(document))
    errors: list[str] = []
    by_topic: dict[str, dict[date, int]] = {}

    rows = list(enumerate(reader, start=1))
    if not rows:
        raise SeriesParseError(["line 1: missing header 'date,topic,count'"])
    header_line, header = rows[0]
    if tuple(header) != CSV_HEADER:
        raise SeriesParseError(
            [f"line {header_line}: header must be 'date,topic,count', "
             f"got {','.join(header)!r}"]
        )

    for line, row in rows[1:]:
        if not row:
            continue  # ignore blank lines
        if len(row) != 3:
            errors.append(f"line {line}: expected 3 fields, got {len(row)}")
            continue
        raw_date, topic, raw_count = (field.strip() for field in row)
        try:
            stamp = date.fromisoformat(raw_date)
        except ValueError:
            errors.append(f"line {line}: invalid ISO date {raw_date!r}")
            continue
        if not topic:
            errors.append(f"line {line}: empty topic")
            continue
        try:
            count = int(raw_count)
        except ValueError:
            errors.append(f"line {line}: count must be an integer, got {raw_count!r}")
            continue
        if count < 0:
            errors.append(f"line {line}: negative count {count} for topic {topic!r}")
            continue
        samples = by_topic.setdefault(topic, {})
        if stamp in samples:
            errors.append(
                f"line {line}: duplicate sample for ({raw_date}, {topic})"
            )
            continue
        samples[stamp] = count

    if errors:
        raise SeriesParseError(errors)
    return [
        TopicSeries(topic, tuple(sorted(samples.items())))
        for topic, samples in by_topic.items()
    ]


def normalize_series(
    series: TopicSeries, method: str = "minmax"
) -> list[tuple[date, float]]:
    """Map counts to intensities in [0, 1].

    Min-max normalisation sends the minimum count to 0 and the maximum to
    1, preserving order.  A constant or single-sample series carries no
    directional signal and maps to 0.5 everywhere, with a warning.
    """
    if method != "minmax":
        raise ValueError(f"unknown normalisation method {method!r}")
    if not series.samples:
        raise ValueError(f"series {series.topic_id!r} is empty")

    counts = [count for _, count in series.samples]
    low, high = min(counts), max(counts)
    if low == high:
        warnings.warn(
            f"topic {series.topic_id!r} has a constant stream; emitting the "
            "neutral intensity 0.5 (no directional signal)",
            stacklevel=2,
        )
        return [(stamp, 0.5) for stamp, _ in series.samples]
    span = high - low
    return [(stamp, (count - low) / span) for stamp, count in series.samples]


def bind_series_to_leaves(
    kb: GoalGraph | None,
    bindings: Sequence[LeafBinding],
    series: Sequence[TopicSeries],
) -> dict[str, list[tuple[date, float]]]:
    """Produce per-leaf intensity series from topic series and bindings.

    With a knowledge base given, every binding target must be an existing
    leaf whose role admits external evidence; pass ``kb=None`` to skip
    that check (the evaluation step will still reject unknown leaves).
    The complement transform maps x to 1 - x.  Unbound leaves are left
    for constant assignment at evaluation time.
    """
    by_topic: dict[str, TopicSeries] = {}
    for topic_series in series:
        if topic_series.topic_id in by_topic:
            raise BindingError(f"duplicate topic series {topic_series.topic_id!r}")
        by_topic[topic_series.topic_id] = topic_series

    nodes = {node.id: node for node in kb.nodes} if kb is not None else None
    bound: dict[str, list[tuple[date, float]]] = {}
    for binding in bindings:
        if binding.topic_id not in by_topic:
            raise BindingError(f"unknown topic {binding.topic_id!r}")
        if binding.leaf_id in bound:
            raise BindingError(f"leaf {binding.leaf_id!r} bound more than once")
        if nodes is not None:
            node = nodes.get(binding.leaf_id)
            if node is None:
                raise BindingError(f"unknown leaf {binding.leaf_id!r}")
            if node.kind != "leaf" or node.role not in BINDABLE_ROLES:
                raise BindingError(
                    f"node {binding.leaf_id!r} cannot take a bound series"
                )
        intensities = normalize_series(by_topic[binding.topic_id])
        if binding.transform == "complement":
            intensities = [(stamp, 1.0 - value) for stamp, value in intensities]
        bound[binding.leaf_id] = intensities
    return bound


def _decimal_fraction(value: float | int) -> Fraction:
    # repr of a float is its shortest round-tripping decimal, so this reads
    # the number the way it was written, not its binary approximation
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


def aggregate_expert_estimates(estimates: Sequence[ExpertEstimate]) -> float:
    """Competence-weighted mean of several estimates for one edge.

    All estimates must reference the same (child, parent) edge.  The
    result is exact over the decimal reading of the inputs, lies within
    [min, max] of the estimates, and is invariant under permutation and
    under scaling every competence by the same positive factor.
    """
    if not estimates:
        raise ValueError("cannot aggregate an empty estimate list")
    edge = (estimates[0].child, estimates[0].parent)
    for estimate in estimates:
        if (estimate.child, estimate.parent) != edge:
            raise ValueError(
                "mixed edge references: "
                f"{edge} vs {(estimate.child, estimate.parent)}"
            )
    numerator = Fraction(0)
    denominator = Fraction(0)
    for estimate in estimates:
        competence = _decimal_fraction(estimate.competence)
        numerator += competence * _decimal_fraction(estimate.estimate)
        denominator += competence
    return float(numerator / denominator)


# --- JSON loaders -------------------------------------------------------
#
# Expert estimates travel as a JSON array of objects with keys expert_id,
# child, parent, estimate, competence.  Bindings travel as a JSON array of
# objects with keys topic, leaf and an optional transform.


def parse_expert_estimates(text: str) -> list[ExpertEstimate]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("expert estimates must be a JSON array")
    estimates = []
    for i, raw in enumerate(data):
        if not isinstance(raw, dict):
            raise ValueError(f"estimate [{i}] must be an object")
        missing = [k for k in ("expert_id", "child", "parent", "estimate",
                               "competence") if k not in raw]
        if missing:
            raise ValueError(f"estimate [{i}] is missing {', '.join(missing)}")
        try:
            estimates.append(
                ExpertEstimate(
                    expert_id=str(raw["expert_id"]),
                    child=str(raw["child"]),
                    parent=str(raw["parent"]),
                    estimate=float(raw["estimate"]),
                    competence=float(raw["competence"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(f"estimate [{i}]: {exc}") from exc
    return estimates


def parse_bindings(text: str) -> list[LeafBinding]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("bindings must be a JSON array")
    bindings = []
    for i, raw in enumerate(data):
        if not isinstance(raw, dict):
            raise ValueError(f"binding [{i}] must be an object")
        missing = [k for k in ("topic", "leaf") if k not in raw]
        if missing:
            raise ValueError(f"binding [{i}] is missing {', '.join(missing)}")
        try:
            bindings.append(
                LeafBinding(
                    topic_id=str(raw["topic"]),
                    leaf_id=str(raw["leaf"]),
                    transform=str(raw.get("transform", "identity")),
                )
            )
        except ValueError as exc:
            raise ValueError(f"binding [{i}]: {exc}") from exc
    return bindings
