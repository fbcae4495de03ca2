import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from .config import DEFAULT_SEED, DEFAULT_STATE, DEFAULT_TRIALS, DEFAULT_WORKERS
from .errors import BellcondError, ConfigError
from .experiment import ExperimentConfig
from .observables import ChshAngles
from .states import BELL_STATE_NAMES, DensityOperator, SettingModel, bell_state, check_weights
from .tensor import ComplexMatrix

_PAIR = {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number", "minimum": 0, "maximum": 1}}
_COMPLEX = {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}}
_ROW = {"type": "array", "minItems": 4, "maxItems": 4, "items": _COMPLEX}

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "state": {
            "oneOf": [
                {"type": "string", "enum": list(BELL_STATE_NAMES)},
                {"type": "array", "minItems": 4, "maxItems": 4, "items": _ROW},
            ]
        },
        "angles_rad": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a0", "a1", "b0", "b1"],
            "properties": {name: {"type": "number"} for name in ("a0", "a1", "b0", "b1")},
        },
        "p": _PAIR,
        "q": _PAIR,
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": (1 << 64) - 1},
        "workers": {"type": "integer", "minimum": 1},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "format": {"enum": ["json", "csv"]},
                "path": {"type": "string", "minLength": 1},
            },
        },
    },
}

_VALIDATOR = Draft202012Validator(RUN_CONFIG_SCHEMA)


@dataclass(frozen=True)
class RunConfig:
    """
    A parsed and validated run configuration file, CLI overrides applied.

    Attributes:
        experiment (ExperimentConfig): State, angles, generators, trials, seed, workers.
        state_spec (str | list): The state as written: a Bell-state name or the matrix rows.
        output_format (str): 'json' or 'csv'.
        output_path (str): File path, or '-' for standard output.
    """

    experiment: ExperimentConfig
    state_spec: object
    output_format: str = "json"
    output_path: str = "-"

    @property
    def model(self) -> SettingModel:
        return self.experiment.model

    def echo(self, include_run: bool = True) -> dict:
        """
        Configuration echo for output records.

        The worker count is left out: it is a scheduling hint and must not
        change the emitted record.
        """
        echo = {
            "state": self.state_spec,
            "angles_rad": self.experiment.angles.to_dict(),
            "p": list(self.experiment.p),
            "q": list(self.experiment.q),
        }
        if include_run:
            echo["trials"] = self.experiment.trials
            echo["seed"] = self.experiment.seed
        return echo


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        return path.read_text(encoding="latin1")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None


def _line_of(text: str, key: str | None) -> int | None:
    if not key:
        return None
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _schema_error(document: dict, text: str) -> ConfigError | None:
    error = best_match(_VALIDATOR.iter_errors(document))
    if error is None:
        return None
    key = next((part for part in reversed(error.absolute_path) if isinstance(part, str)), None)
    if error.validator == "additionalProperties" and isinstance(error.instance, dict):
        allowed = set(error.schema.get("properties", {}))
        unknown = sorted(set(error.instance) - allowed)
        if unknown:
            key = unknown[0]
            return ConfigError(f"unknown key '{key}'", _line_of(text, key))
    where = "/".join(str(part) for part in error.absolute_path) or "<root>"
    return ConfigError(f"{where}: {error.message}", _line_of(text, key))


def _reject_constant(name: str, text: str):
    line = next((n for n, row in enumerate(text.splitlines(), start=1) if name in row), None)
    raise ConfigError(f"non-finite number {name} is not allowed", line)


def _parse_state(spec, text: str) -> DensityOperator:
    if isinstance(spec, str):
        return bell_state(spec)
    matrix = np.array([[complex(re, im) for re, im in row] for row in spec])
    try:
        return DensityOperator(ComplexMatrix(matrix), "custom")
    except BellcondError as exc:
        raise ConfigError(f"state: {exc}", _line_of(text, "state")) from None


def parse_run_config(
    text: str,
    overrides: dict | None = None,
    degrees: bool = False,
) -> RunConfig:
    """
    Parse a JSON run configuration and apply command-line overrides.

    Args:
        text (str): The JSON document.
        overrides (dict | None): Values for 'seed', 'trials', 'workers', 'format', 'path';
            None entries are ignored.
        degrees (bool): Interpret angles_rad as degrees.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ConfigError: On JSON syntax errors (with their line), schema violations, unknown
            keys, NaN or infinite numbers, invalid weights or angles, or an invalid
            explicit state.
    """
    try:
        document = json.loads(text, parse_constant=lambda name: _reject_constant(name, text)) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(document, dict):
        raise ConfigError("config must be a JSON object", 1)

    error = _schema_error(document, text)
    if error is not None:
        raise error

    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}

    state_spec = document.get("state", DEFAULT_STATE)
    state = _parse_state(state_spec, text)

    raw_angles = document.get("angles_rad")
    if raw_angles is None:
        angles = ChshAngles.tsirelson()
    else:
        values = [raw_angles[name] for name in ("a0", "a1", "b0", "b1")]
        try:
            angles = ChshAngles.from_degrees(*values) if degrees else ChshAngles(*values)
        except BellcondError as exc:
            raise ConfigError(f"angles_rad: {exc}", _line_of(text, "angles_rad")) from None

    pairs = {}
    for key in ("p", "q"):
        pair = tuple(document.get(key, (0.5, 0.5)))
        try:
            pairs[key] = check_weights(*pair)
        except BellcondError as exc:
            raise ConfigError(f"{key}: {exc}", _line_of(text, key)) from None

    output = document.get("output", {})
    try:
        experiment = ExperimentConfig(
            state=state,
            angles=angles,
            p=pairs["p"],
            q=pairs["q"],
            trials=int(overrides.get("trials", document.get("trials", DEFAULT_TRIALS))),
            seed=int(overrides.get("seed", document.get("seed", DEFAULT_SEED))),
            workers=int(overrides.get("workers", document.get("workers", DEFAULT_WORKERS))),
        )
    except ConfigError:
        raise
    except BellcondError as exc:
        raise ConfigError(str(exc)) from None

    return RunConfig(
        experiment=experiment,
        state_spec=state_spec,
        output_format=overrides.get("format", output.get("format", "json")),
        output_path=overrides.get("path", output.get("path", "-")),
    )


def load_run_config(path: str | Path | None, overrides: dict | None = None, degrees: bool = False) -> RunConfig:
    """
    Read and parse a run configuration file; no path means all defaults.

    Args:
        path (str | Path | None): Location of the JSON file.
        overrides (dict | None): Command-line overrides, see parse_run_config.
        degrees (bool): Interpret angles_rad as degrees.

    Returns:
        RunConfig: The validated configuration.
    """
    text = "" if path is None else _read_text(Path(path))
    return parse_run_config(text, overrides, degrees)


def to_radians(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else float(value)
