import pytest

from bellcond import verify as verify_module
from bellcond.verify import check_names, run_verify


@pytest.fixture(scope="module")
def results():
    return run_verify(cases=10)


def test_check_names_are_unique():
    names = check_names()
    assert len(names) == len(set(names))
    assert {"deflation_law", "sigma_cancellation", "tsirelson_reproduction", "monte_carlo_consistency"} <= set(names)


def test_every_check_passes(results):
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert failed == []
    assert [r.name for r in results] == check_names()


def test_perturbed_generator_state_fails_validation():
    results = {r.name: r for r in run_verify(perturb_sigma=True, cases=3)}
    assert not results["generator_state_validation"].passed
    assert "DensityValidationError" in results["generator_state_validation"].detail
    assert results["deflation_law"].passed


def test_crashing_check_is_recorded_as_failure(monkeypatch):
    def crashes(ctx):
        raise RuntimeError("boom")

    def passes(ctx):
        return True, "fine"

    monkeypatch.setattr(verify_module, "_CHECKS", [("crashes", crashes), ("passes", passes)])
    first, second = run_verify(cases=1)
    assert first.name == "crashes" and not first.passed
    assert "RuntimeError" in first.detail and "boom" in first.detail
    assert second.name == "passes" and second.passed
