"""Graded evaluation of second-order reflexive choice formulas.

Two subjects facing the same environment are each modelled by a readiness
value and a self-esteem value.  Both come from nested implications over 13
situation variables.  Truth values are grades in [0, 1]; conjunction,
disjunction and negation are min, max and 1 - x, so the flattened
disjunctive forms used by the goal-graph layer are exactly equivalent to
the nested implication forms, not just approximately.

Crisp inputs (grades 0 and 1) reproduce ordinary boolean semantics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields

__all__ = [
    "A_SIDE_VARIABLES",
    "B_SIDE_VARIABLES",
    "REFLEXIVE_VARIABLES",
    "ReflexiveOutcome",
    "ReflexiveState",
    "SoloState",
    "TruthTableRow",
    "complement",
    "enumerate_truth_table",
    "evaluate_conflict_dnf",
    "evaluate_conflict_logic",
    "evaluate_solo",
    "implies",
]

#: All 13 situation variables, in canonical order.
REFLEXIVE_VARIABLES = (
    "a1",
    "a2", "b2", "a3", "b3", "a4", "b4",
    "c2", "d2", "c3", "d3", "c4", "d4",
)

#: Variables that the subject-A outputs depend on (a1 is the shared
#: environment and leads as the most significant truth-table bit).
A_SIDE_VARIABLES = ("a1", "a2", "b2", "a3", "b3", "a4", "b4")

#: Variables that the subject-B outputs depend on.
B_SIDE_VARIABLES = ("a1", "c2", "d2", "c3", "d3", "c4", "d4")


def check_grade(value: float, name: str = "grade") -> float:
    """Return ``value`` as a float grade, rejecting NaN, infinities and
    anything outside [0, 1]."""
    grade = float(value)
    if not math.isfinite(grade):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if not 0.0 <= grade <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return grade


def complement(x: float) -> float:
    """Graded negation: 1 - x."""
    return 1.0 - x


def implies(x: float, y: float) -> float:
    """Graded material implication, max(1 - x, y).

    On crisp inputs this is the boolean implication truth table; on grades
    it is the Zadeh reading of "not x, or y".
    """
    return max(1.0 - x, y)


@dataclass(frozen=True)
class SoloState:
    """Situation of a single subject without an opponent.

    a1: influence of the environment on the subject.
    a2: influence of the environment the subject expects.
    a3: the subject's intentions.
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self) -> None:
        for field in fields(self):
            object.__setattr__(
                self, field.name, check_grade(getattr(self, field.name), field.name)
            )


@dataclass(frozen=True)
class ReflexiveState:
    """The 13 graded variables describing both subjects in a conflict.

    ``a1`` is the influence of the environment on both subjects.  The a/b
    block is subject A's picture of the situation (own and imputed
    expectations and intentions); the c/d block is subject B's, with the
    original variable readings kept verbatim:

    a2: influence of the environment expected by A.
    b2: influence expected by B, from A's point of view.
    a3: intentions of A.                b3: intentions of B, as A sees them.
    a4: how A thinks B sees A's intentions.
    b4: how A thinks B sees B's own intentions.
    c2: influence of the environment expected by B.
    d2: influence expected by A, from B's point of view.
    c3: intentions of B.                d3: intentions of A, as B sees them.
    c4: how B thinks A sees B's intentions.
    d4: how B thinks A sees A's own intentions.
    """

    a1: float = 0.0
    a2: float = 0.0
    b2: float = 0.0
    a3: float = 0.0
    b3: float = 0.0
    a4: float = 0.0
    b4: float = 0.0
    c2: float = 0.0
    d2: float = 0.0
    c3: float = 0.0
    d3: float = 0.0
    c4: float = 0.0
    d4: float = 0.0

    def __post_init__(self) -> None:
        for field in fields(self):
            object.__setattr__(
                self, field.name, check_grade(getattr(self, field.name), field.name)
            )

    @classmethod
    def from_mapping(cls, values: dict[str, float]) -> "ReflexiveState":
        """Build a state from a name -> grade mapping.

        Missing variables default to 0; unknown names are rejected rather
        than ignored, so typos like ``b4`` vs ``d4`` surface immediately.
        """
        unknown = sorted(set(values) - set(REFLEXIVE_VARIABLES))
        if unknown:
            raise ValueError(f"unknown reflexive variables: {', '.join(unknown)}")
        return cls(**values)

    def as_mapping(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in REFLEXIVE_VARIABLES}


@dataclass(frozen=True)
class ReflexiveOutcome:
    """Readiness and self-esteem for both subjects."""

    readiness_a: float
    self_esteem_a: float
    readiness_b: float
    self_esteem_b: float


def evaluate_solo(state: SoloState) -> tuple[float, float]:
    """Evaluate the single-subject model.

    Self-esteem is "intentions imply expected influence"; readiness is
    "self-esteem implies actual environment influence".  Returns
    ``(readiness, self_esteem)``.
    """
    self_esteem = implies(state.a3, state.a2)
    readiness = implies(self_esteem, state.a1)
    return readiness, self_esteem


def evaluate_conflict_logic(state: ReflexiveState) -> ReflexiveOutcome:
    """Evaluate the two-subject model in its nested implication form.

    Each self-esteem value is a disjunction of two implications, one per
    reflexion branch ("my picture of our intentions supports my expected
    influence" or "my picture of the opponent's picture supports theirs");
    readiness then weighs self-esteem against the shared environment.
    """
    esteem_a = max(
        implies(min(state.a3, state.b3), state.a2),
        implies(min(state.a4, state.b4), state.b2),
    )
    esteem_b = max(
        implies(min(state.c3, state.d3), state.c2),
        implies(min(state.c4, state.d4), state.d2),
    )
    return ReflexiveOutcome(
        readiness_a=implies(esteem_a, state.a1),
        self_esteem_a=esteem_a,
        readiness_b=implies(esteem_b, state.a1),
        self_esteem_b=esteem_b,
    )


def evaluate_conflict_dnf(state: ReflexiveState) -> ReflexiveOutcome:
    """Evaluate the two-subject model in its flat disjunctive form.

    This is the form the goal-graph pattern encodes: self-esteem is a
    6-way max over the side's literals, readiness is max(1 - esteem, a1).
    With min/max/1-x semantics it agrees with
    :func:`evaluate_conflict_logic` bit for bit on every input.
    """
    esteem_a = max(
        state.a2, state.b2,
        1.0 - state.a3, 1.0 - state.b3, 1.0 - state.a4, 1.0 - state.b4,
    )
    esteem_b = max(
        state.c2, state.d2,
        1.0 - state.c3, 1.0 - state.d3, 1.0 - state.c4, 1.0 - state.d4,
    )
    return ReflexiveOutcome(
        readiness_a=max(1.0 - esteem_a, state.a1),
        self_esteem_a=esteem_a,
        readiness_b=max(1.0 - esteem_b, state.a1),
        self_esteem_b=esteem_b,
    )


@dataclass(frozen=True)
class TruthTableRow:
    """One crisp assignment with the outcomes of both formula forms.

    ``assignment`` is aligned with the side's variable tuple; outcome
    grades are crisp (0.0 or 1.0).
    """

    assignment: tuple[float, ...]
    readiness_logic: float
    self_esteem_logic: float
    readiness_dnf: float
    self_esteem_dnf: float


def side_variables(side: str) -> tuple[str, ...]:
    """Variable names feeding the given subject's outputs ("A" or "B")."""
    if side == "A":
        return A_SIDE_VARIABLES
    if side == "B":
        return B_SIDE_VARIABLES
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def enumerate_truth_table(side: str = "A") -> list[TruthTableRow]:
    """Enumerate all 2**7 crisp assignments of one side's variables.

    Rows are in lexicographic order with the shared environment variable
    as the most significant bit, so the listing doubles as a stable golden
    artefact.  Each row carries both the nested and the flat form outputs.
    """
    names = side_variables(side)
    rows: list[TruthTableRow] = []
    for bits in itertools.product((0.0, 1.0), repeat=len(names)):
        state = ReflexiveState(**dict(zip(names, bits)))
        logic = evaluate_conflict_logic(state)
        dnf = evaluate_conflict_dnf(state)
        if side == "A":
            row = TruthTableRow(
                assignment=bits,
                readiness_logic=logic.readiness_a,
                self_esteem_logic=logic.self_esteem_a,
                readiness_dnf=dnf.readiness_a,
                self_esteem_dnf=dnf.self_esteem_a,
            )
        else:
            row = TruthTableRow(
                assignment=bits,
                readiness_logic=logic.readiness_b,
                self_esteem_logic=logic.self_esteem_b,
                readiness_dnf=dnf.readiness_b,
                self_esteem_dnf=dnf.self_esteem_b,
            )
        rows.append(row)
    return rows
