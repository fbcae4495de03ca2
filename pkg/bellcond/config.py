import math

from . import __version__

VERSION = __version__

# Tolerances
VALIDATION_TOL = 1e-10     # Hermiticity / trace / PSD residuals
IDENTITY_TOL = 1e-12       # redundant-computation agreement
ZERO_WEIGHT_TOL = 1e-12    # below this a Lüders branch is impossible
PROBABILITY_TOL = 1e-12

# Allowed square sides: H1⊗H2⊗K1⊗K2 is at most 16
ALLOWED_DIMS = (2, 4, 8, 16)
MAX_DIM = 16

# Jacobi eigen-solver
JACOBI_MAX_SWEEPS = 50
JACOBI_OFF_TOL = 1e-14

# Angles (a0, a1, b0, b1) reaching 2√2 for phi_plus with A(θ) = cosθ·Z + sinθ·X
TSIRELSON_ANGLES = (0.0, math.pi / 2, math.pi / 4, -math.pi / 4)
TSIRELSON_BOUND = 2 * math.sqrt(2)
CLASSICAL_BOUND = 2.0

# Monte Carlo defaults
DEFAULT_STATE = "phi_plus"
DEFAULT_SEED = 0
DEFAULT_TRIALS = 100_000
DEFAULT_WORKERS = 1
CHUNK_SIZE = 1 << 16       # trials per work unit, independent of the worker count

# Verify suite
VERIFY_SEED = 20240917
VERIFY_CASES = 100
VERIFY_ANGLE_SWEEP = 10_000
VERIFY_MC_TRIALS = 200_000
SIGMA_BAND = 5.0

# Environment
LOG_ENV_VAR = "BELLCOND_LOG"
LOG_LEVELS = ("error", "info", "debug")
DEFAULT_LOG_LEVEL = "error"
