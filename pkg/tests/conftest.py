from __future__ import annotations

import pytest

from reflexkb.pattern import SubjectSpec, build_pattern

A_LEAVES = ("a2", "b2", "a3", "b3", "a4", "b4")
B_LEAVES = ("c2", "d2", "c3", "d3", "c4", "d4")


@pytest.fixture()
def pattern_kb():
    return build_pattern(SubjectSpec("Defender"), SubjectSpec("Attacker"))
