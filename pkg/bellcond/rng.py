"""
Stateless counter-based uniform draws.

Every random number of the experiment is a pure function of
(seed, trial_index, draw_index): the seed is turned into a SplitMix64 key, and
the output at position `trial_index * DRAWS_PER_TRIAL + draw_index` of that
SplitMix64 stream is computed directly rather than by stepping a generator.
Any partition of the trials across workers therefore yields the same numbers.
"""
import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SHIFTS = (np.uint64(30), np.uint64(27), np.uint64(31))
_TO_UNIT = 2.0 ** -53

# g1, g2 and the joint outcome pair
DRAWS_PER_TRIAL = 3
DRAW_G1, DRAW_G2, DRAW_OUTCOME = range(DRAWS_PER_TRIAL)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SHIFTS[0])) * _MIX1
    z = (z ^ (z >> _SHIFTS[1])) * _MIX2
    return z ^ (z >> _SHIFTS[2])


def stream_key(seed: int) -> np.uint64:
    """Whiten a 64-bit seed into a SplitMix64 key."""
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return _mix(np.array([seed], dtype=np.uint64) + _GOLDEN)[0]


def uniforms(seed: int, trial_indices: np.ndarray, draw: int) -> np.ndarray:
    """
    Uniform doubles in [0, 1) for a batch of trials and one draw slot.

    Args:
        seed (int): 64-bit unsigned seed.
        trial_indices (np.ndarray): Trial indices (any integer dtype, nonnegative).
        draw (int): Which of the DRAWS_PER_TRIAL draws of each trial.

    Returns:
        np.ndarray: float64 array, same shape as trial_indices, 53-bit resolution.
    """
    counters = np.asarray(trial_indices, dtype=np.uint64) * np.uint64(DRAWS_PER_TRIAL) + np.uint64(draw + 1)
    z = stream_key(seed) + counters * _GOLDEN
    return (_mix(z) >> np.uint64(11)).astype(np.float64) * _TO_UNIT
