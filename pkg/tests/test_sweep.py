import math

import pytest

from bellcond.correlations import CHSH_SIGNS, SETTINGS, pair_correlation
from bellcond.errors import ConfigError
from bellcond.report import frame_to_csv
from bellcond.sweep import SWEEP_COLUMNS, SweepSpec, run_sweep
from bellcond.utils import parse_run_config

from .conftest import SQRT2


def test_generator_sweep_keeps_c_fixed_for_tsirelson_angles():
    frame = run_sweep(parse_run_config(""), SweepSpec("p0", 0.0, 1.0, 5))
    assert list(frame.columns) == SWEEP_COLUMNS
    assert list(frame["parameter"]) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert frame["C"].tolist() == pytest.approx([2 * SQRT2] * 5, abs=1e-12)
    assert frame["c"].tolist() == pytest.approx([SQRT2 / 2] * 5, abs=1e-12)
    assert frame["c_over_C"].tolist() == pytest.approx([0.25] * 5, abs=1e-12)


def test_deterministic_generators_still_give_a_finite_c():
    frame = run_sweep(parse_run_config(""), SweepSpec("q0", 1.0, 0.0, 2))
    assert frame["c"].notna().all()


def test_b0_offset_where_C_vanishes():
    frame = run_sweep(parse_run_config(""), SweepSpec("b0-offset", 0.0, math.pi, 2))
    assert frame["C"][0] == pytest.approx(2 * SQRT2, abs=1e-12)
    assert abs(frame["C"][1]) <= 1e-12
    assert math.isnan(frame["c_over_C"][1])
    last = frame_to_csv(frame).splitlines()[-1]
    assert last.endswith(",")


@pytest.mark.parametrize("args", [
    ("tilt", 0.0, 1.0, 3),
    ("p0", 0.0, 1.0, 1),
    ("p0", -0.1, 1.0, 3),
    ("b0-offset", 0.0, math.inf, 3),
])
def test_invalid_sweeps(args):
    with pytest.raises(ConfigError):
        SweepSpec(*args)


def test_generator_sweep_at_generic_angles():
    text = '{"angles_rad": {"a0": 0.3, "a1": 1.1, "b0": -0.4, "b1": 2.0}}'
    run = parse_run_config(text)
    frame = run_sweep(run, SweepSpec("p0", 0.0, 1.0, 11))

    left, right = run.experiment.angles.left(), run.experiment.angles.right()
    pair = {(i, j): pair_correlation(run.experiment.state, left[i], right[j]) for i, j in SETTINGS}
    C = sum(CHSH_SIGNS[i, j] * pair[i, j] for i, j in SETTINGS)

    assert frame["C"].tolist() == pytest.approx([C] * 11, abs=1e-12)
    for p0, c in zip(frame["parameter"], frame["c"]):
        p, q = (p0, 1.0 - p0), (0.5, 0.5)
        expected = sum(CHSH_SIGNS[i, j] * pair[i, j] * p[i] * q[j] for i, j in SETTINGS)
        assert c == pytest.approx(expected, abs=1e-12)
    assert frame["c"].max() - frame["c"].min() > 0.1
    assert frame["c_over_C"].nunique() > 1
