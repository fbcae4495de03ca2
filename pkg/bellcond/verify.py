"""
Randomized identity suite.

Each check draws its inputs from its own numpy Generator seeded with
(VERIFY_SEED, check index), so adding a check never changes the inputs of the
others. Checks report failures instead of raising.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import (
    IDENTITY_TOL,
    SIGMA_BAND,
    TSIRELSON_BOUND,
    VALIDATION_TOL,
    VERIFY_ANGLE_SWEEP,
    VERIFY_CASES,
    VERIFY_MC_TRIALS,
    VERIFY_SEED,
)
from .correlations import (
    SETTINGS,
    chsh_complete,
    chsh_conditional,
    complete_correlation,
    composite_average,
    conditional_correlation,
    correlation_report,
    pair_correlation,
    sequential_correlation,
)
from .experiment import ExperimentConfig, run_experiment
from .observables import ChshAngles, polarization_observable
from .states import (
    BELL_STATE_NAMES,
    DensityOperator,
    Projector,
    SettingModel,
    bell_state,
    luders_update,
    product_state,
    random_density,
    random_hermitian,
    random_product_state,
    random_weights,
)
from .stats import estimate, within_band
from .tensor import ComplexMatrix, expectation, hermitian_eigenvalues, kron, partial_trace

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str


@dataclass
class VerifyContext:
    rng: np.random.Generator
    cases: int = VERIFY_CASES
    perturb_sigma: bool = False


_CHECKS = []


def check(name: str):
    def register(fn):
        _CHECKS.append((name, fn))
        return fn
    return register


def check_names() -> list[str]:
    return [name for name, _ in _CHECKS]


# --- Helpers ---

def _angles(rng) -> ChshAngles:
    return ChshAngles(*rng.uniform(-math.pi, math.pi, size=4))


def _model(rng, low: float = 0.0) -> SettingModel:
    return SettingModel(random_weights(rng, low), random_weights(rng, low))


def _rank_one_projector(dim: int, rng) -> Projector:
    ket = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Projector(ComplexMatrix.outer(ket / np.linalg.norm(ket)))


def _worst(diffs) -> float:
    return max(diffs) if diffs else 0.0


# --- Tensor core ---

@check("kron_mixed_product")
def _kron_mixed_product(ctx):
    diffs = []
    for _ in range(ctx.cases):
        a, b, c, d = (random_hermitian(2, ctx.rng) for _ in range(4))
        diffs.append((kron(a, b) @ kron(c, d)).max_abs_diff(kron(a @ c, b @ d)))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("kron_trace_multiplicativity")
def _kron_trace(ctx):
    diffs = []
    for _ in range(ctx.cases):
        a, b = random_hermitian(2, ctx.rng), random_hermitian(2, ctx.rng)
        diffs.append(abs(kron(a, b).trace() - a.trace() * b.trace()))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("expectation_linearity")
def _expectation_linearity(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho = random_density(4, ctx.rng)
        x, y = random_hermitian(4, ctx.rng), random_hermitian(4, ctx.rng)
        alpha, beta = ctx.rng.uniform(-1, 1, size=2)
        combined = expectation(rho, x * alpha + y * beta)
        diffs.append(abs(combined - (alpha * expectation(rho, x) + beta * expectation(rho, y))))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("jacobi_spectrum")
def _jacobi_spectrum(ctx):
    diffs = []
    for dim in (2, 4, 8, 16):
        for _ in range(max(1, ctx.cases // 10)):
            m = random_density(dim, ctx.rng).matrix
            reference = np.linalg.eigvalsh(m.entries)
            diffs.append(float(np.max(np.abs(hermitian_eigenvalues(m) - reference))))
    return _worst(diffs) <= VALIDATION_TOL, f"max eigenvalue error {_worst(diffs):.2e}"


# --- Quantum states ---

@check("generator_state_validation")
def _generator_state_validation(ctx):
    for _ in range(ctx.cases):
        model = _model(ctx.rng)
        matrix = model.sigma.matrix * 1.1 if ctx.perturb_sigma else model.sigma.matrix
        DensityOperator(matrix, "sigma")
    return True, "all generator states are density operators"


@check("setting_weight_product")
def _setting_weight_product(ctx):
    diffs = []
    for _ in range(ctx.cases):
        model = _model(ctx.rng)
        for k, m in SETTINGS:
            diffs.append(abs(expectation(model.sigma, model.setting_projector(k, m)) - model.p[k] * model.q[m]))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("luders_weight_and_idempotence")
def _luders(ctx):
    diffs = []
    for _ in range(ctx.cases):
        R = product_state(random_density(4, ctx.rng), _model(ctx.rng, 0.05).sigma)
        i, j = SETTINGS[ctx.rng.integers(4)]
        M = Projector(kron(ComplexMatrix.identity(4), SettingModel.uniform().setting_projector(i, j)))
        once, weight = luders_update(R, M)
        twice, _ = luders_update(once, M)
        diffs.append(abs(weight - expectation(R, M)))
        diffs.append(twice.matrix.max_abs_diff(once.matrix))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("luders_keeps_source_marginal")
def _luders_marginal(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho, model = random_density(4, ctx.rng), _model(ctx.rng, 0.05)
        i, j = SETTINGS[ctx.rng.integers(4)]
        M = Projector(kron(ComplexMatrix.identity(4), model.setting_projector(i, j)))
        post, _ = luders_update(product_state(rho, model.sigma), M)
        diffs.append(partial_trace(post.matrix, (4, 4), keep=0).max_abs_diff(rho.matrix))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


# --- Correlations ---

@check("composite_factorization")
def _composite_factorization(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho, sigma = random_density(4, ctx.rng), random_density(4, ctx.rng)
        A, P = random_hermitian(4, ctx.rng), _rank_one_projector(4, ctx.rng)
        diffs.append(abs(composite_average(rho, sigma, A, P) - expectation(rho, A) * expectation(sigma, P)))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("inflation_law")
def _inflation_law(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho, sigma = random_density(2, ctx.rng), random_density(4, ctx.rng)
        A, P = polarization_observable(ctx.rng.uniform(-math.pi, math.pi)), _rank_one_projector(4, ctx.rng)
        weight = expectation(sigma, P)
        # the ratio loses relative precision as the weight shrinks
        if weight > 1e-2:
            diffs.append(abs(composite_average(rho, sigma, A, P) / weight - expectation(rho, A)))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("complete_factorization")
def _complete_factorization(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho, model, angles = random_density(4, ctx.rng), _model(ctx.rng), _angles(ctx.rng)
        (i, j), (k, m) = SETTINGS[ctx.rng.integers(4)], SETTINGS[ctx.rng.integers(4)]
        A, B = angles.left()[i], angles.right()[j]
        value = complete_correlation(rho, model, i, j, A, B, k, m)
        diffs.append(abs(value - pair_correlation(rho, A, B) * model.p[k] * model.q[m]))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("deflation_law")
def _deflation_law(ctx):
    uniform = SettingModel.uniform()
    diffs = []
    for _ in range(ctx.cases):
        rho, angles = random_density(4, ctx.rng), _angles(ctx.rng)
        diffs.append(abs(chsh_complete(rho, uniform, angles) - chsh_conditional(rho, angles) / 4))
    return _worst(diffs) <= IDENTITY_TOL, f"max |c − C/4| {_worst(diffs):.2e}"


@check("sigma_cancellation")
def _sigma_cancellation(ctx):
    diffs = []
    for name in BELL_STATE_NAMES:
        rho = bell_state(name)
        for _ in range(ctx.cases):
            model, angles = _model(ctx.rng, 0.01), _angles(ctx.rng)
            i, j = SETTINGS[ctx.rng.integers(4)]
            A, B = angles.left()[i], angles.right()[j]
            diffs.append(abs(conditional_correlation(rho, model, i, j, A, B) - pair_correlation(rho, A, B)))
    return _worst(diffs) <= IDENTITY_TOL, f"max |C_cond − C| {_worst(diffs):.2e}"


@check("sequential_equals_joint")
def _sequential(ctx):
    diffs = []
    for _ in range(ctx.cases):
        rho, model, angles = random_density(4, ctx.rng), _model(ctx.rng, 0.01), _angles(ctx.rng)
        i, j = SETTINGS[ctx.rng.integers(4)]
        A, B = angles.left()[i], angles.right()[j]
        diffs.append(abs(sequential_correlation(rho, model, i, j, A, B) - complete_correlation(rho, model, i, j, A, B)))
    return _worst(diffs) <= IDENTITY_TOL, f"max residual {_worst(diffs):.2e}"


@check("tsirelson_reproduction")
def _tsirelson_reproduction(ctx):
    report = correlation_report(bell_state("phi_plus"), SettingModel.uniform(), ChshAngles.tsirelson())
    C, c = report.chsh_conditional, report.chsh_complete
    ok = abs(C - TSIRELSON_BOUND) <= IDENTITY_TOL and abs(c - math.sqrt(2) / 2) <= IDENTITY_TOL
    return ok, f"C = {C!r}, c = {c!r}"


@check("tsirelson_bound_sweep")
def _tsirelson_sweep(ctx):
    rho = bell_state("phi_plus")
    worst = max(abs(chsh_conditional(rho, _angles(ctx.rng))) for _ in range(VERIFY_ANGLE_SWEEP))
    return worst <= TSIRELSON_BOUND + BOUND_SLACK, f"max |C| {worst:.12f} over {VERIFY_ANGLE_SWEEP} angle sets"


@check("product_state_bound")
def _product_state_bound(ctx):
    worst = max(abs(chsh_conditional(random_product_state(ctx.rng), _angles(ctx.rng))) for _ in range(ctx.cases))
    return worst <= 2.0 + BOUND_SLACK, f"max |C| {worst:.12f}"


@check("complete_bound")
def _complete_bound(ctx):
    worst = 0.0
    for _ in range(ctx.cases):
        rho = bell_state(BELL_STATE_NAMES[ctx.rng.integers(4)])
        worst = max(worst, abs(chsh_complete(rho, _model(ctx.rng), _angles(ctx.rng))))
    return worst <= 1.0 + BOUND_SLACK, f"max |c| {worst:.12f}"


# --- Monte Carlo ---

@check("monte_carlo_consistency")
def _monte_carlo(ctx):
    config = ExperimentConfig("phi_plus", trials=VERIFY_MC_TRIALS, seed=int(ctx.rng.integers(1 << 63)))
    report = correlation_report(config.state, config.model, config.angles)
    est = estimate(run_experiment(config))
    misses = []
    for i, j in SETTINGS:
        if not within_band(est.conditional[i][j], report.pair[i][j], est.conditional_se[i][j], SIGMA_BAND):
            misses.append(f"C_{i}{j}")
        if not within_band(est.unconditional[i][j], report.complete[i][j], est.unconditional_se[i][j], SIGMA_BAND):
            misses.append(f"c_{i}{j}")
        if not within_band(est.inflation[i][j], report.inflation[i][j], est.inflation_se[i][j], SIGMA_BAND):
            misses.append(f"inflation_{i}{j}")
    if not within_band(est.chsh_complete_hat, report.chsh_complete, est.chsh_complete_se, SIGMA_BAND):
        misses.append("c")
    detail = f"C_hat = {est.chsh_conditional_hat:.5f}, c_hat = {est.chsh_complete_hat:.5f}"
    return not misses, detail + (f"; outside 5σ: {', '.join(misses)}" if misses else "")


@check("worker_determinism")
def _worker_determinism(ctx):
    seed = int(ctx.rng.integers(1 << 63))
    single = run_experiment(ExperimentConfig("phi_plus", trials=VERIFY_MC_TRIALS, seed=seed, workers=1))
    pooled = run_experiment(ExperimentConfig("phi_plus", trials=VERIFY_MC_TRIALS, seed=seed, workers=4))
    same = np.array_equal(single.counts, pooled.counts)
    return same, "identical tallies" if same else "tallies differ between 1 and 4 workers"


def run_verify(perturb_sigma: bool = False, seed: int = VERIFY_SEED, cases: int = VERIFY_CASES) -> list[CheckResult]:
    """
    Run every registered check.

    Args:
        perturb_sigma (bool): Scale the generator states by 1.1 so validation must fail.
        seed (int): Base seed of the per-check generators.
        cases (int): Randomized cases per check.

    Returns:
        list[CheckResult]: One result per check, in registration order.
    """
    results = []
    for index, (name, fn) in enumerate(_CHECKS):
        ctx = VerifyContext(np.random.default_rng([seed, index]), cases, perturb_sigma)
        try:
            passed, detail = fn(ctx)
        except Exception as exc:
            logger.debug("%s raised", name, exc_info=True)
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        logger.debug("%s: %s (%s)", name, "pass" if passed else "FAIL", detail)
        results.append(CheckResult(name, bool(passed), ctx.cases, detail))
    return results
