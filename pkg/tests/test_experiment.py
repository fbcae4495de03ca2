import numpy as np
import pytest

from bellcond.errors import ConfigError, UnknownStateError, WeightsError
from bellcond.experiment import (
    ExperimentConfig,
    JointOutcomeModel,
    TallyTable,
    TrialRecord,
    run_experiment,
    run_trial,
)
from bellcond.observables import ChshAngles


def test_config_accepts_state_names(phi_plus):
    config = ExperimentConfig("phi_plus", trials=10)
    assert config.state.matrix.allclose(phi_plus.matrix, 0.0)


@pytest.mark.parametrize("kwargs, error", [
    ({"trials": 0}, ConfigError),
    ({"seed": -1}, ConfigError),
    ({"seed": 1 << 64}, ConfigError),
    ({"workers": 0}, ConfigError),
    ({"p": (0.6, 0.6)}, WeightsError),
])
def test_config_validation(kwargs, error):
    with pytest.raises(error):
        ExperimentConfig("phi_plus", **kwargs)


def test_config_unknown_state():
    with pytest.raises(UnknownStateError):
        ExperimentConfig("bogus")


def test_joint_outcome_probabilities_sum_to_one():
    outcomes = JointOutcomeModel.from_config(ExperimentConfig("phi_plus"))
    np.testing.assert_allclose(outcomes.probabilities.sum(axis=-1), np.ones((2, 2)), atol=1e-12)
    assert (outcomes.cumulative[..., -1] == 1.0).all()


def test_aligned_angles_always_agree():
    config = ExperimentConfig("phi_plus", ChshAngles(0, 0, 0, 0), trials=5000, seed=3)
    for t in range(50):
        record = run_trial(config, t)
        assert record.a * record.b == 1
    tally = run_experiment(config)
    np.testing.assert_array_equal(tally.product_sums(), tally.setting_counts())


def test_trial_records_match_batch_tally():
    config = ExperimentConfig("phi_plus", trials=2000, seed=11)
    outcomes = JointOutcomeModel.from_config(config)
    records = [run_trial(config, t, outcomes) for t in range(config.trials)]
    np.testing.assert_array_equal(TallyTable.from_records(records).counts, run_experiment(config).counts)


def test_worker_count_does_not_change_tally():
    single = run_experiment(ExperimentConfig("psi_minus", trials=300_000, seed=5, workers=1))
    pooled = run_experiment(ExperimentConfig("psi_minus", trials=300_000, seed=5, workers=8))
    np.testing.assert_array_equal(single.counts, pooled.counts)
    assert single.total == pooled.total == 300_000


def test_same_seed_same_tally_other_seed_differs():
    first = run_experiment(ExperimentConfig("phi_plus", trials=10_000, seed=1))
    again = run_experiment(ExperimentConfig("phi_plus", trials=10_000, seed=1))
    other = run_experiment(ExperimentConfig("phi_plus", trials=10_000, seed=2))
    np.testing.assert_array_equal(first.counts, again.counts)
    assert not np.array_equal(first.counts, other.counts)


def test_deterministic_generator_never_selects_other_setting():
    tally = run_experiment(ExperimentConfig("phi_plus", p=(1.0, 0.0), trials=20_000, seed=8))
    counts = tally.setting_counts()
    assert counts[1].sum() == 0
    assert counts[0].sum() == 20_000


def test_single_trial_run():
    tally = run_experiment(ExperimentConfig("phi_plus", trials=1, seed=0))
    assert tally.total == 1
    assert tally.counts.sum() == 1


# --- Records and tallies ---

def test_ternary_outcomes():
    record = TrialRecord(g1=0, g2=1, a=-1, b=1)
    assert (record.ternary_a(0), record.ternary_a(1)) == (-1, 0)
    assert (record.ternary_b(0), record.ternary_b(1)) == (0, 1)


def test_trial_record_validation():
    with pytest.raises(ValueError):
        TrialRecord(g1=2, g2=0, a=1, b=1)
    with pytest.raises(ValueError):
        TrialRecord(g1=0, g2=0, a=0, b=1)


def test_tally_addition_and_lookup():
    a = TallyTable.from_records([TrialRecord(0, 0, 1, 1), TrialRecord(1, 1, -1, 1)])
    b = TallyTable.from_records([TrialRecord(0, 0, 1, 1)])
    merged = a + b
    assert merged.total == 3
    assert merged.count(0, 0, 1, 1) == 2
    assert merged.count(1, 1, -1, 1) == 1
    assert merged.product_sums()[1, 1] == -1


def test_tally_total_must_match_counts():
    with pytest.raises(ValueError):
        TallyTable(np.ones((2, 2, 2, 2), dtype=np.int64), 3)
