import json
import math

import pytest

from bellcond.config import DEFAULT_TRIALS
from bellcond.errors import ConfigError
from bellcond.utils import load_run_config, parse_run_config, to_radians


def test_empty_document_uses_defaults(tsirelson):
    run = parse_run_config("")
    assert run.experiment.angles == tsirelson
    assert run.experiment.p == (0.5, 0.5)
    assert run.experiment.trials == DEFAULT_TRIALS
    assert run.experiment.seed == 0
    assert (run.output_format, run.output_path) == ("json", "-")
    assert run.state_spec == "phi_plus"


def test_full_document():
    text = json.dumps({
        "state": "psi_minus",
        "angles_rad": {"a0": 0.1, "a1": 0.2, "b0": 0.3, "b1": 0.4},
        "p": [0.25, 0.75],
        "q": [1, 0],
        "trials": 1234,
        "seed": 77,
        "workers": 3,
        "output": {"format": "csv", "path": "out.csv"},
    }, indent=2)
    run = parse_run_config(text)
    assert run.experiment.state.label == "psi_minus"
    assert run.experiment.angles.b1 == 0.4
    assert run.experiment.q == (1.0, 0.0)
    assert (run.experiment.trials, run.experiment.seed, run.experiment.workers) == (1234, 77, 3)
    assert (run.output_format, run.output_path) == ("csv", "out.csv")


def test_overrides_take_precedence():
    run = parse_run_config('{"seed": 1, "trials": 10}', {"seed": 5, "trials": None, "format": "csv"})
    assert run.experiment.seed == 5
    assert run.experiment.trials == 10
    assert run.output_format == "csv"


def test_degrees_are_converted():
    text = '{"angles_rad": {"a0": 0, "a1": 90, "b0": 45, "b1": -45}}'
    run = parse_run_config(text, degrees=True)
    assert run.experiment.angles.a1 == pytest.approx(math.pi / 2, abs=1e-15)
    assert run.experiment.angles.b1 == pytest.approx(-math.pi / 4, abs=1e-15)


def test_explicit_state_matrix():
    rows = [[[0.25, 0.0] if r == c else [0.0, 0.0] for c in range(4)] for r in range(4)]
    run = parse_run_config(json.dumps({"state": rows}))
    assert run.experiment.state.label == "custom"
    assert run.echo()["state"] == rows


def test_invalid_state_matrix_is_config_error():
    rows = [[[0.5, 0.0] if r == c else [0.0, 0.0] for c in range(4)] for r in range(4)]
    with pytest.raises(ConfigError, match="non_unit_trace|trace"):
        parse_run_config(json.dumps({"state": rows}))


def test_unknown_key_reports_its_line():
    text = '{\n  "state": "phi_plus",\n  "bogus": 1\n}\n'
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.line == 3
    assert str(info.value) == "line 3: unknown key 'bogus'"


def test_nested_unknown_key():
    text = '{\n  "output": {\n    "fmt": "csv"\n  }\n}'
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.line == 3


def test_schema_violation_reports_its_line():
    text = '{\n  "state": "phi_plus",\n  "trials": 0\n}'
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.line == 3
    assert "trials" in str(info.value)


def test_json_syntax_error_reports_its_line():
    with pytest.raises(ConfigError) as info:
        parse_run_config('{\n  "seed": 1,\n  "trials": \n}')
    assert info.value.line == 4


def test_weights_must_sum_to_one():
    with pytest.raises(ConfigError) as info:
        parse_run_config('{\n  "p": [0.6, 0.6]\n}')
    assert info.value.line == 2


def test_root_must_be_object():
    with pytest.raises(ConfigError):
        parse_run_config("[1, 2]")


def test_echo_leaves_out_workers():
    run = parse_run_config('{"workers": 4}')
    assert "workers" not in run.echo()
    assert set(run.echo(include_run=False)) == {"state", "angles_rad", "p", "q"}


def test_load_from_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"seed": 9}', encoding="utf-8")
    assert load_run_config(path).experiment.seed == 9
    assert load_run_config(None).experiment.seed == 0


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "absent.json")


def test_to_radians():
    assert to_radians(180, degrees=True) == pytest.approx(math.pi)
    assert to_radians(1.5, degrees=False) == 1.5


def test_nan_angle_is_config_error():
    text = '{\n  "angles_rad": {"a0": NaN, "a1": 0, "b0": 0, "b1": 0}\n}'
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.line == 2
    assert "NaN" in str(info.value)


def test_overflowing_angle_is_config_error():
    with pytest.raises(ConfigError, match="angles_rad"):
        parse_run_config('{"angles_rad": {"a0": 1e400, "a1": 0, "b0": 0, "b1": 0}}')


def test_infinite_state_entry_is_config_error():
    rows = [[[0.25, 0.0] if r == c else [0.0, 0.0] for c in range(4)] for r in range(4)]
    text = json.dumps({"state": rows}).replace("0.25", "Infinity", 1)
    with pytest.raises(ConfigError, match="Infinity"):
        parse_run_config(text)


def test_overflowing_state_entry_is_config_error():
    rows = [[[0.25, 0.0] if r == c else [0.0, 0.0] for c in range(4)] for r in range(4)]
    text = json.dumps({"state": rows}).replace("0.25", "1e400", 1)
    with pytest.raises(ConfigError, match="state"):
        parse_run_config(text)
