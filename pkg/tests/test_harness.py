"""Scenario catalogue, reports, determinism, and certificate re-checking."""

import json

import pytest

from ikernel.harness import (
    PASS,
    ScenarioConfig,
    list_scenarios,
    run_scenario,
    verify_report,
)

CATALOGUE = [
    "lemma-infini",
    "lemma-infini2",
    "g1-invariants",
    "g1-integrality-dichotomy",
    "g2-invariants-A",
    "g2-invariants-B",
    "theorem1-cusp",
    "action-stability",
    "localization-smoothness",
]


def test_catalogue_fixed():
    entries = list_scenarios()
    assert [e["name"] for e in entries] == CATALOGUE
    assert len(entries) == 9
    assert "lemma-infini2" in {e["name"] for e in entries}
    for entry in entries:
        assert entry["description"]


def test_unknown_scenario_rejected_before_compute():
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(scenario="unknown"))
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(scenario="lemma-infini", n=0))
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(scenario="lemma-infini", max_degree=0))
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(scenario="lemma-infini", bounds={"nope": 3}))


def test_lemma_infini_dimension_table():
    report = run_scenario(ScenarioConfig(scenario="lemma-infini", n=1, m=1, max_degree=8))
    assert report.verdict == PASS
    assert report.details["dims"] == [1, 1, 2, 3, 4, 5, 6, 7, 8]
    assert all(entry["equal"] for entry in report.details["per_degree"])


def test_g1_invariants_dimensions():
    report = run_scenario(ScenarioConfig(scenario="g1-invariants", n=1, m=1, max_degree=6))
    assert report.verdict == PASS
    assert report.details["ring_dims"] == [d + 1 for d in range(7)]


def test_g2_invariants_A():
    report = run_scenario(ScenarioConfig(scenario="g2-invariants-A", n=2, m=1, max_degree=6))
    assert report.verdict == PASS
    assert report.details["dims"] == [0] * 6


def test_g2_invariants_B_witnesses():
    report = run_scenario(ScenarioConfig(scenario="g2-invariants-B", n=2, m=1, max_degree=5))
    assert report.verdict == PASS
    assert report.details["transcendence_witnesses"] == ["x1", "x2"]
    assert report.details["dims"] == [1, 2, 3, 4, 5, 6]
    assert report.details["witnesses_conclusively_transcendental"]


def test_localization_with_tight_bound_still_passes():
    # Power 1 always suffices here, so even the tightest bound passes.
    report = run_scenario(
        ScenarioConfig(
            scenario="localization-smoothness", n=1, m=1, bounds={"max_power": 1}
        )
    )
    assert report.verdict == PASS
    assert report.details["power_bound"] == 1


def test_reports_are_deterministic():
    cfg = ScenarioConfig(scenario="g1-integrality-dichotomy", n=1, m=1, max_degree=6)
    first = run_scenario(cfg)
    second = run_scenario(
        ScenarioConfig(scenario="g1-integrality-dichotomy", n=1, m=1, max_degree=6)
    )
    assert first.to_json(include_wall_time=False) == second.to_json(
        include_wall_time=False
    )
    assert first.to_dict()["schema"] == 1
    assert "wall_time_s" in first.to_dict()
    assert "wall_time_s" not in first.to_dict(include_wall_time=False)


@pytest.mark.parametrize("name", CATALOGUE)
def test_all_scenarios_pass_at_1_1(name):
    report = run_scenario(ScenarioConfig(scenario=name, n=1, m=1, max_degree=6))
    assert report.verdict == PASS


def test_verify_report_round_trip():
    report = run_scenario(
        ScenarioConfig(scenario="localization-smoothness", n=2, m=1, max_degree=4)
    )
    data = json.loads(report.to_json())
    result = verify_report(data)
    assert result.ok and result.total >= 2

    # Tamper with one certificate; the verifier must notice.
    data["details"]["certificates"][0]["power"] = 3
    assert not verify_report(data).ok


def test_verify_rejects_wrong_schema():
    result = verify_report({"schema": 99, "details": {}})
    assert not result.ok


def test_report_text_rendering():
    report = run_scenario(ScenarioConfig(scenario="g2-invariants-A", n=1, m=1, max_degree=4))
    text = report.to_text()
    assert "verdict: pass" in text
    assert "scenario: g2-invariants-A" in text
