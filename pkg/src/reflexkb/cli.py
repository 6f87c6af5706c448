"""Command-line front end.

Subcommands cover the analyst pipeline end to end: validate a knowledge
base, build the two-subject conflict pattern, evaluate states or leaf
assignments (single-shot or across a bound time series), dump readiness
truth tables, turn monitoring CSV into leaf series, aggregate expert
weight estimates, and serve the HTTP API.

Exit codes are script-friendly: 0 success, 1 usage error, 2 when input
data fails to parse or validate.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from reflexkb.graph import (
    AssignmentError,
    DocumentError,
    GraphValidationError,
    SeriesGridError,
    dumps_canonical,
    graph_from_document,
    validate,
)
from reflexkb.ingest import (
    BindingError,
    SeriesParseError,
    aggregate_expert_estimates,
    bind_series_to_leaves,
    parse_bindings,
    parse_expert_estimates,
    parse_topic_series,
)
from reflexkb.pattern import (
    SubjectSpec,
    Winner,
    build_pattern,
    evaluate_conflict_series,
    evaluate_with_degrees,
)
from reflexkb.reflexive import (
    ReflexiveState,
    enumerate_truth_table,
    evaluate_conflict_logic,
    side_variables,
)
from reflexkb.scenario import load_scenario

__all__ = ["main", "run_command"]

WINNER_LABELS = {
    Winner.SUBJECT_A: "SubjectA",
    Winner.SUBJECT_B: "SubjectB",
    Winner.DRAW: "Draw",
}

# every way input data can be wrong, as opposed to the command line being wrong
_DATA_ERRORS = (
    AssignmentError,
    BindingError,
    DocumentError,
    GraphValidationError,
    SeriesGridError,
    SeriesParseError,
    json.JSONDecodeError,
    OSError,
    ValueError,
)


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    # argparse exits the process on bad flags; surface the error instead
    # so run_command can map it to exit code 1
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(self, message)


def _fmt(value: float) -> str:
    """Full round-trip precision, integral values without the '.0'."""
    return str(int(value)) if value == int(value) else repr(value)


def _read_json(path: str) -> object:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_kb(path: str):
    document = _read_json(path)
    if isinstance(document, dict) and "kb" in document:
        document = document["kb"]
    return graph_from_document(document)


def _split_leaves_file(document: object) -> tuple[dict, dict]:
    """A leaves file maps names to numbers (constants) or to arrays of
    [timestamp, value] pairs (series); both may appear together."""
    if not isinstance(document, dict):
        raise DocumentError("leaves file must be a JSON object")
    constants: dict[str, float] = {}
    series: dict[str, list[tuple[str, float]]] = {}
    for name, value in document.items():
        if isinstance(value, bool):
            raise DocumentError(f"value for {name!r} must be a number")
        if isinstance(value, (int, float)):
            constants[str(name)] = float(value)
        elif isinstance(value, list):
            points = []
            for point in value:
                if (
                    not isinstance(point, (list, tuple))
                    or len(point) != 2
                    or isinstance(point[1], bool)
                    or not isinstance(point[1], (int, float))
                ):
                    raise DocumentError(
                        f"series for {name!r} must hold [timestamp, value] pairs"
                    )
                points.append((str(point[0]), float(point[1])))
            series[str(name)] = points
        else:
            raise DocumentError(
                f"value for {name!r} must be a number or a series array"
            )
    return constants, series


def _cmd_validate(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    report = validate(kb)
    if report.ok:
        print(f"valid: {len(kb.nodes)} nodes, {len(kb.edges)} edges")
        return 0
    for finding in report.findings:
        print(f"{finding.code}: {finding.message}", file=sys.stderr)
    return 2


def _cmd_pattern(args: argparse.Namespace) -> int:
    kb = build_pattern(SubjectSpec(args.subject_a), SubjectSpec(args.subject_b))
    payload = dumps_canonical(kb)
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(payload)
    print(f"wrote {args.output}: {len(kb.nodes)} nodes, {len(kb.edges)} edges")
    return 0


def _print_weighted(result) -> None:
    print(f"g={_fmt(result.g_degree)}, winner={WINNER_LABELS[result.winner]}")


def _cmd_eval(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    report = validate(kb)
    if not report.ok:
        raise GraphValidationError(report)
    document = _read_json(args.leaves)

    if args.semantics == "logic":
        if not isinstance(document, dict):
            raise DocumentError("state file must be a JSON object")
        state = ReflexiveState.from_mapping(document)
        outcome = evaluate_conflict_logic(state)
        print(
            f"readiness_a={_fmt(outcome.readiness_a)}, "
            f"self_esteem_a={_fmt(outcome.self_esteem_a)}, "
            f"readiness_b={_fmt(outcome.readiness_b)}, "
            f"self_esteem_b={_fmt(outcome.self_esteem_b)}"
        )
        return 0

    constants, series = _split_leaves_file(document)
    if not series:
        if args.at is not None:
            raise DocumentError("--at needs a leaves file with series values")
        result, _ = evaluate_with_degrees(kb, constants, args.epsilon)
        _print_weighted(result)
        return 0

    points = evaluate_conflict_series(kb, series, constants, args.epsilon)
    if args.at is not None:
        for stamp, result in points:
            if str(stamp) == args.at:
                _print_weighted(result)
                return 0
        raise SeriesGridError(f"timestamp {args.at!r} not on the series grid")
    for stamp, result in points:
        print(
            f"{stamp}: g={_fmt(result.g_degree)}, "
            f"winner={WINNER_LABELS[result.winner]}"
        )
    return 0


def _cmd_truth_table(args: argparse.Namespace) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(list(side_variables(args.side)) + ["self_esteem", "readiness"])
    for row in enumerate_truth_table(args.side):
        values = [int(value) for value in row.assignment]
        writer.writerow(values + [int(row.self_esteem_logic), int(row.readiness_logic)])
    return 0


def _cmd_ingest(args: argparse.Namespace) -> int:
    with open(args.csv, "r", encoding="utf-8") as handle:
        series = parse_topic_series(handle.read())
    with open(args.bindings, "r", encoding="utf-8") as handle:
        bindings = parse_bindings(handle.read())
    kb = _load_kb(args.kb) if args.kb else None
    bound = bind_series_to_leaves(kb, bindings, series)
    document = {
        leaf: [[stamp.isoformat(), value] for stamp, value in points]
        for leaf, points in bound.items()
    }
    with open(args.output, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")
    grid = len(next(iter(bound.values()))) if bound else 0
    print(f"wrote {args.output}: {len(bound)} leaf series, {grid} timestamps")
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    with open(args.estimates, "r", encoding="utf-8") as handle:
        estimates = parse_expert_estimates(handle.read())
    if not estimates:
        raise DocumentError("no estimates to aggregate")
    by_edge: dict[tuple[str, str], list] = {}
    for estimate in estimates:
        by_edge.setdefault((estimate.child, estimate.parent), []).append(estimate)
    weights = [
        {"child": child, "parent": parent,
         "weight": aggregate_expert_estimates(group)}
        for (child, parent), group in sorted(by_edge.items())
    ]
    print(json.dumps(weights, indent=2))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from reflexkb.service import ScenarioStore, create_app

    scenario = load_scenario(args.scenario)
    app = create_app(ScenarioStore(scenario), ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="reflexkb",
        description="two-subject conflict engine over goal-graph knowledge bases",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a knowledge base document")
    p.add_argument("kb", help="knowledge base JSON file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("pattern", help="build the two-subject conflict pattern")
    p.add_argument("--subject-a", required=True, metavar="NAME")
    p.add_argument("--subject-b", required=True, metavar="NAME")
    p.add_argument("-o", "--output", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_pattern)

    p = sub.add_parser("eval", help="evaluate a knowledge base or reflexive state")
    p.add_argument("kb", help="knowledge base JSON file")
    p.add_argument("--leaves", required=True, metavar="FILE",
                   help="flat name-to-value JSON; arrays of [timestamp, value] "
                        "pairs evaluate as a series")
    p.add_argument("--semantics", choices=("logic", "weighted"),
                   default="weighted")
    p.add_argument("--epsilon", type=float, default=1e-9,
                   help="half-width of the draw band (default 1e-9)")
    p.add_argument("--at", metavar="TIMESTAMP",
                   help="evaluate a series file at one timestamp only")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("truth-table", help="crisp readiness table as CSV")
    p.add_argument("--side", choices=("A", "B"), default="A")
    p.set_defaults(func=_cmd_truth_table)

    p = sub.add_parser("ingest", help="turn topic-count CSV into leaf series")
    p.add_argument("csv", help="CSV file with date,topic,count rows")
    p.add_argument("--bindings", required=True, metavar="FILE",
                   help="JSON array of {topic, leaf, transform?} bindings")
    p.add_argument("-o", "--output", required=True, metavar="FILE")
    p.add_argument("--kb", metavar="FILE",
                   help="check binding targets against this knowledge base")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("aggregate", help="competence-weighted edge weights")
    p.add_argument("estimates", help="JSON array of expert estimates")
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--scenario", required=True, metavar="FILE",
                   help="scenario or bare knowledge base JSON file")
    p.add_argument("--ui", metavar="DIR",
                   help="serve this directory as the web UI root")
    p.set_defaults(func=_cmd_serve)

    return parser


def run_command(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(exc.parser.format_usage(), end="", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        if isinstance(exc, SeriesParseError):
            for line in exc.errors:
                print(f"error: {line}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
