import logging
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .config import CHUNK_SIZE, DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_WORKERS, VALIDATION_TOL
from .errors import ConfigError, ConsistencyError
from .observables import ChshAngles
from .rng import DRAW_G1, DRAW_G2, DRAW_OUTCOME, uniforms
from .states import DensityOperator, SettingModel, bell_state
from .tensor import expectation, kron

logger = logging.getLogger(__name__)

# Joint outcome order; index k maps to (a, b) and to tally cells [k // 2][k % 2]
OUTCOMES = ((1, 1), (1, -1), (-1, 1), (-1, -1))
_OUTCOME_INDEX = {1: 0, -1: 1}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One run of the random-generator CHSH experiment.

    Attributes:
        state (DensityOperator | str): Two-qubit source state, or a Bell-state name.
        angles (ChshAngles): PBS orientations.
        p (tuple[float, float]): G1 probabilities for settings 0 / 1.
        q (tuple[float, float]): G2 probabilities for settings 0 / 1.
        trials (int): Number of emitted pairs, ≥ 1.
        seed (int): 64-bit unsigned seed.
        workers (int): Parallelism hint; never changes results.
    """

    state: DensityOperator
    angles: ChshAngles = field(default_factory=ChshAngles.tsirelson)
    p: tuple[float, float] = (0.5, 0.5)
    q: tuple[float, float] = (0.5, 0.5)
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if isinstance(self.state, str):
            object.__setattr__(self, "state", bell_state(self.state))
        if self.state.dim != 4:
            raise ConfigError(f"source state must be two-qubit (side 4), got side {self.state.dim}")
        # validates both probability pairs
        model = SettingModel(tuple(self.p), tuple(self.q))
        object.__setattr__(self, "p", model.p)
        object.__setattr__(self, "q", model.q)
        if int(self.trials) < 1:
            raise ConfigError(f"trials must be ≥ 1, got {self.trials}")
        if not 0 <= int(self.seed) < 1 << 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if int(self.workers) < 1:
            raise ConfigError(f"workers must be ≥ 1, got {self.workers}")

    @property
    def model(self) -> SettingModel:
        return SettingModel(self.p, self.q)


@dataclass(frozen=True)
class TrialRecord:
    """
    Result of one emitted pair.

    Attributes:
        g1 (int): Left generator reading, i.e. which left PBS was open.
        g2 (int): Right generator reading.
        a (int): ±1 outcome at the open left PBS.
        b (int): ±1 outcome at the open right PBS.
    """

    g1: int
    g2: int
    a: int
    b: int

    def __post_init__(self):
        if self.g1 not in (0, 1) or self.g2 not in (0, 1):
            raise ValueError(f"generator readings must be 0 or 1, got ({self.g1}, {self.g2})")
        if self.a not in (1, -1) or self.b not in (1, -1):
            raise ValueError(f"outcomes must be ±1, got ({self.a}, {self.b})")

    def ternary_a(self, i: int) -> int:
        """𝒜_i: the left outcome if channel i was open, 0 if it was blocked."""
        return self.a if self.g1 == i else 0

    def ternary_b(self, j: int) -> int:
        """ℬ_j: the right outcome if channel j was open, 0 if it was blocked."""
        return self.b if self.g2 == j else 0


@dataclass(frozen=True)
class TallyTable:
    """
    Outcome counts per setting pair, the sufficient statistic of a run.

    Attributes:
        counts (np.ndarray): int64 array indexed [i, j, a_idx, b_idx], where
            index 0 stands for outcome +1 and index 1 for −1.
        total (int): Number of trials; equals counts.sum().
    """

    counts: np.ndarray
    total: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64).reshape(2, 2, 2, 2)
        if (counts < 0).any():
            raise ValueError("tally counts must be nonnegative")
        if int(counts.sum()) != int(self.total):
            raise ValueError(f"tally counts sum to {int(counts.sum())}, not total {self.total}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def empty(cls) -> "TallyTable":
        return cls(np.zeros((2, 2, 2, 2), dtype=np.int64), 0)

    @classmethod
    def from_records(cls, records) -> "TallyTable":
        counts = np.zeros((2, 2, 2, 2), dtype=np.int64)
        for r in records:
            counts[r.g1, r.g2, _OUTCOME_INDEX[r.a], _OUTCOME_INDEX[r.b]] += 1
        return cls(counts, int(counts.sum()))

    def __add__(self, other: "TallyTable") -> "TallyTable":
        return TallyTable(self.counts + other.counts, self.total + other.total)

    def count(self, i: int, j: int, a: int, b: int) -> int:
        return int(self.counts[i, j, _OUTCOME_INDEX[a], _OUTCOME_INDEX[b]])

    def setting_counts(self) -> np.ndarray:
        """N_ij, the number of trials that selected the setting pair (i, j)."""
        return self.counts.sum(axis=(2, 3))

    def product_sums(self) -> np.ndarray:
        """Σ_ab a·b·counts[i][j][a][b] for every (i, j)."""
        signs = np.array([[1, -1], [-1, 1]], dtype=np.int64)
        return (self.counts * signs).sum(axis=(2, 3))


@dataclass(frozen=True)
class JointOutcomeModel:
    """
    Born-rule distribution of (a, b) for every setting pair, computed once per run.

    P(a, b | i, j) = Tr(ρ · Π_a^{A_i} ⊗ Π_b^{B_j}) with Π_± = (I ± A)/2.

    Attributes:
        probabilities (np.ndarray): [i, j, k] over the joint outcomes OUTCOMES.
        cumulative (np.ndarray): Running sums along k, last entry pinned to 1.
    """

    probabilities: np.ndarray
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cumulative = np.cumsum(self.probabilities, axis=-1)
        cumulative[..., -1] = 1.0
        object.__setattr__(self, "cumulative", cumulative)

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "JointOutcomeModel":
        left, right = config.angles.left(), config.angles.right()
        probabilities = np.zeros((2, 2, 4))
        for i in (0, 1):
            for j in (0, 1):
                for k, (a, b) in enumerate(OUTCOMES):
                    projector = kron(left[i].outcome_projector(a), right[j].outcome_projector(b))
                    probabilities[i, j, k] = max(0.0, expectation(config.state, projector))
                norm = probabilities[i, j].sum()
                if abs(norm - 1.0) > VALIDATION_TOL:
                    raise ConsistencyError(f"joint outcome distribution for ({i}, {j}) sums to {norm!r}")
        return cls(probabilities)


# --- Sampling ---

def _sample(config: ExperimentConfig, outcomes: JointOutcomeModel, indices: np.ndarray):
    """Return (g1, g2, k) arrays for a batch of trial indices."""
    g1 = (uniforms(config.seed, indices, DRAW_G1) >= config.p[0]).astype(np.int64)
    g2 = (uniforms(config.seed, indices, DRAW_G2) >= config.q[0]).astype(np.int64)
    u = uniforms(config.seed, indices, DRAW_OUTCOME)
    k = (u[:, None] >= outcomes.cumulative[g1, g2]).sum(axis=1)
    return g1, g2, np.minimum(k, 3)


def run_trial(config: ExperimentConfig, trial_index: int, outcomes: JointOutcomeModel | None = None) -> TrialRecord:
    """
    Simulate one emitted pair.

    G1 and G2 pick the open channels with probabilities p and q, then (a, b) is
    drawn from the Born distribution of the selected setting pair. The draws
    depend only on (seed, trial_index), never on other trials.

    Args:
        config (ExperimentConfig): The run.
        trial_index (int): Position of the trial in the run.
        outcomes (JointOutcomeModel | None): Precomputed distribution, rebuilt if omitted.

    Returns:
        TrialRecord: Generator readings and outcomes.
    """
    if outcomes is None:
        outcomes = JointOutcomeModel.from_config(config)
    g1, g2, k = _sample(config, outcomes, np.array([trial_index], dtype=np.uint64))
    a, b = OUTCOMES[int(k[0])]
    return TrialRecord(int(g1[0]), int(g2[0]), a, b)


def _tally_chunk(config: ExperimentConfig, outcomes: JointOutcomeModel, start: int, stop: int) -> TallyTable:
    g1, g2, k = _sample(config, outcomes, np.arange(start, stop, dtype=np.uint64))
    counts = np.bincount(g1 * 8 + g2 * 4 + k, minlength=16)
    return TallyTable(counts.reshape(2, 2, 2, 2), stop - start)


def run_experiment(config: ExperimentConfig) -> TallyTable:
    """
    Run every trial and accumulate the outcome counts.

    Trials are cut into fixed-size chunks whatever the worker count; chunk
    tallies merge by addition, so the result depends only on (seed, trials).

    Args:
        config (ExperimentConfig): The run.

    Returns:
        TallyTable: Counts over all trials.
    """
    outcomes = JointOutcomeModel.from_config(config)
    bounds = [(start, min(start + CHUNK_SIZE, config.trials)) for start in range(0, config.trials, CHUNK_SIZE)]
    logger.info("running %d trials in %d chunks on %d worker(s)", config.trials, len(bounds), config.workers)

    def work(bound):
        logger.debug("chunk [%d, %d)", *bound)
        return _tally_chunk(config, outcomes, *bound)

    if config.workers == 1 or len(bounds) == 1:
        tallies = [work(bound) for bound in bounds]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            tallies = list(pool.map(work, bounds))

    return reduce(operator.add, tallies, TallyTable.empty())
