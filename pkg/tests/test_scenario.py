from __future__ import annotations

import json

import pytest

from reflexkb.graph import DocumentError, graph_to_document
from reflexkb.scenario import (
    Scenario,
    load_scenario,
    scenario_from_document,
    scenario_to_document,
)


class TestScenario:
    def test_bare_kb_document(self, pattern_kb):
        scenario = scenario_from_document(graph_to_document(pattern_kb))
        assert scenario.kb == pattern_kb
        assert scenario.leaves == {}
        assert scenario.series == {}
        assert scenario.epsilon == 1e-9

    def test_full_document_round_trip(self, pattern_kb):
        scenario = Scenario(
            kb=pattern_kb,
            leaves={"a1": 0.5},
            series={"a2": (("2021-01-01", 0.0), ("2021-01-02", 1.0))},
            epsilon=1e-6,
        )
        reloaded = scenario_from_document(scenario_to_document(scenario))
        assert reloaded == scenario

    def test_invalid_kb_rejected(self):
        with pytest.raises(ValueError):
            scenario_from_document(
                {"nodes": [{"id": "x", "kind": "internal"}],
                 "edges": [{"child": "x", "parent": "x", "weight": 1.0}]}
            )

    def test_out_of_range_leaf_rejected(self, pattern_kb):
        with pytest.raises(ValueError):
            Scenario(kb=pattern_kb, leaves={"a2": 1.5})

    def test_unknown_scenario_key_rejected(self, pattern_kb):
        document = {"kb": graph_to_document(pattern_kb), "surprise": 1}
        with pytest.raises(DocumentError, match="surprise"):
            scenario_from_document(document)

    def test_mismatched_series_grids_rejected(self, pattern_kb):
        with pytest.raises(ValueError, match="grid"):
            Scenario(
                kb=pattern_kb,
                series={
                    "a2": (("t1", 0.1),),
                    "b2": (("t2", 0.1),),
                },
            )

    def test_unsorted_series_rejected(self, pattern_kb):
        with pytest.raises(ValueError, match="increasing"):
            Scenario(kb=pattern_kb, series={"a2": (("t2", 0.1), ("t1", 0.2))})

    def test_timestamps(self, pattern_kb):
        scenario = Scenario(
            kb=pattern_kb,
            series={"a2": (("t1", 0.1), ("t2", 0.2))},
        )
        assert scenario.timestamps() == ["t1", "t2"]
        assert Scenario(kb=pattern_kb).timestamps() == []

    def test_negative_epsilon_rejected(self, pattern_kb):
        with pytest.raises(ValueError, match="epsilon"):
            Scenario(kb=pattern_kb, epsilon=-1e-9)

    def test_load_scenario_file(self, pattern_kb, tmp_path):
        path = tmp_path / "scenario.json"
        document = {
            "kb": graph_to_document(pattern_kb),
            "leaves": {"a1": 0.25},
            "epsilon": 1e-9,
        }
        path.write_text(json.dumps(document), encoding="utf-8")
        scenario = load_scenario(str(path))
        assert scenario.leaves == {"a1": 0.25}

    def test_load_scenario_rejects_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(DocumentError, match="invalid JSON"):
            load_scenario(str(path))
