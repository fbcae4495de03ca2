import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .config import IDENTITY_TOL
from .correlations import chsh_complete, chsh_conditional
from .errors import ConfigError
from .states import SettingModel
from .utils import RunConfig

logger = logging.getLogger(__name__)

SWEEP_AXES = ("b0-offset", "p0", "q0")
SWEEP_COLUMNS = ["parameter", "C", "c", "c_over_C"]


@dataclass(frozen=True)
class SweepSpec:
    """
    A one-dimensional grid over one knob of the setup.

    Attributes:
        axis (str): 'b0-offset' (radians added to b0), 'p0' or 'q0'.
        start (float): First grid value.
        stop (float): Last grid value (included).
        steps (int): Number of grid points, ≥ 2.
    """

    axis: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got '{self.axis}'")
        if self.steps < 2:
            raise ConfigError(f"sweep needs at least 2 steps, got {self.steps}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep range must be finite")
        if self.axis in ("p0", "q0") and not (0.0 <= self.start <= 1.0 and 0.0 <= self.stop <= 1.0):
            raise ConfigError(f"{self.axis} range must lie within [0, 1], got [{self.start}, {self.stop}]")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def sweep_point(run: RunConfig, axis: str, value: float) -> tuple[float, float]:
    """Return (C, c) with one knob of the configured setup moved to `value`."""
    experiment = run.experiment
    angles, p, q = experiment.angles, experiment.p, experiment.q
    if axis == "b0-offset":
        angles = angles.with_b0_offset(value)
    elif axis == "p0":
        p = (value, 1.0 - value)
    else:
        q = (value, 1.0 - value)
    model = SettingModel(p, q)
    return chsh_conditional(experiment.state, angles), chsh_complete(experiment.state, model, angles)


def run_sweep(run: RunConfig, spec: SweepSpec) -> pd.DataFrame:
    """
    Evaluate C, c and c/C across the grid.

    c/C is left empty where C vanishes.
    """
    rows = []
    for value in spec.grid():
        C, c = sweep_point(run, spec.axis, float(value))
        ratio = c / C if abs(C) > IDENTITY_TOL else float("nan")
        rows.append((float(value), C, c, ratio))
    logger.info("swept %s over %d points", spec.axis, spec.steps)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
