import json
import os
import pathlib

import pytest

import daycare_match as dm

FIXTURES = pathlib.Path(os.environ.get("DAYCARE_FIXTURES", pathlib.Path(__file__).parent.parent / "fixtures"))


def test_counter_example_has_no_stable_outcome():
    inst = FIXTURES / "no_stable.json"
    assert dm.solve(inst, level=3)["status"] == "INFEASIBLE"
    r0 = dm.solve(inst, level=0)
    assert r0["status"] == "OPTIMAL"
    assert r0["objective"] == 3
    assert r0["non_wasteful"]
    report = dm.oracle(inst)
    assert report["stable_count"] == 0
    assert report["text"] == (FIXTURES / "golden" / "no_stable_certificate.txt").read_text()


def test_check_flags_the_wasteful_outcome():
    report = dm.check(FIXTURES / "issue_nw.json", FIXTURES / "issue_nw_mu.json")
    assert not report["non_wasteful"]
    assert report["improving_moves"][0]["tuple"] == ["d1", "d2"]
    assert dm.check(FIXTURES / "issue_nw.json", FIXTURES / "issue_nw_mu_prime.json")["stable"]


def test_generated_market_round_trip():
    inst = dm.generate("tiny", seed=7)
    assert inst == dm.generate("tiny", seed=7)
    result = dm.solve(inst)
    if result["status"] == "OPTIMAL":
        assert dm.check(inst, result["matching"])["stable"]
    else:
        assert result["status"] == "INFEASIBLE"
    assert "tama21" in dm.preset_names()
    assert dm.model_stats(json.dumps(inst))["nonzeros"] > 0
    assert dm.export_lp(inst).startswith("\\")


def test_errors_surface_as_match_error():
    with pytest.raises(dm.MatchError):
        dm.generate("nowhere")
    with pytest.raises(dm.MatchError):
        dm.solve({"children": [{"id": "a"}], "families": [], "daycares": []})
