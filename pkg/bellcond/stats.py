import math
from dataclasses import dataclass

from .correlations import CHSH_SIGNS, SETTINGS
from .experiment import TallyTable


@dataclass
class EstimateReport:
    """
    Empirical correlations from a tally.

    Conditional estimates average a·b over the trials that selected (i, j);
    unconditional ones average the ternary product 𝒜_i·ℬ_j over every trial,
    zeros from blocked channels included.

    Attributes:
        conditional (list[list[float | None]]): Ĉ_ij; None when N_ij = 0.
        unconditional (list[list[float]]): ĉ_ij.
        setting_counts (list[list[int]]): N_ij.
        total (int): Number of trials.
        chsh_conditional_hat (float | None): Ĉ00 + Ĉ01 + Ĉ10 − Ĉ11; None if a cell is absent.
        chsh_complete_hat (float): ĉ00 + ĉ01 + ĉ10 − ĉ11.
        conditional_se (list[list[float | None]]): Standard errors of Ĉ_ij.
        unconditional_se (list[list[float | None]]): Standard errors of ĉ_ij.
        chsh_conditional_se (float | None): Standard error of the conditional CHSH sum.
        chsh_complete_se (float | None): Standard error of the complete CHSH sum.
        inflation (list[list[float | None]]): total / N_ij, the empirical 1/g_ij.
        inflation_se (list[list[float | None]]): Delta-method standard errors of the inflation.
    """

    conditional: list
    unconditional: list
    setting_counts: list
    total: int
    chsh_conditional_hat: float | None
    chsh_complete_hat: float
    conditional_se: list
    unconditional_se: list
    chsh_conditional_se: float | None
    chsh_complete_se: float | None
    inflation: list
    inflation_se: list

    def conditional_present(self) -> list:
        return [[cell is not None for cell in row] for row in self.conditional]

    def to_dict(self) -> dict:
        return {
            "conditional_ij": self.conditional,
            "conditional_present_ij": self.conditional_present(),
            "unconditional_ij": self.unconditional,
            "setting_counts_ij": self.setting_counts,
            "total": self.total,
            "chsh_conditional_hat": self.chsh_conditional_hat,
            "chsh_complete_hat": self.chsh_complete_hat,
            "standard_errors": {
                "conditional_ij": self.conditional_se,
                "unconditional_ij": self.unconditional_se,
                "chsh_conditional": self.chsh_conditional_se,
                "chsh_complete": self.chsh_complete_se,
                "inflation_ij": self.inflation_se,
            },
            "inflation_ij": self.inflation,
        }


def _mean_se(mean: float, second_moment: float, n: int) -> float | None:
    """Standard error of a sample mean from its first two moments (Bessel-corrected)."""
    if n < 2:
        return None
    variance = max(0.0, second_moment - mean * mean) * n / (n - 1)
    return math.sqrt(variance / n)


def estimate(tally: TallyTable) -> EstimateReport:
    """
    Conditional and unconditional estimators from a tally.

    Ĉ_ij = Σ a·b·counts / N_ij and ĉ_ij = Σ a·b·counts / total, so that
    ĉ_ij = Ĉ_ij · N_ij / total exactly. Each trial contributes ±1 to exactly one
    term of the complete CHSH sum, which makes its variance 1 − ĉ².

    Args:
        tally (TallyTable): Counts of a run with total ≥ 1.

    Returns:
        EstimateReport: Point estimates and standard errors.

    Raises:
        ValueError: If the tally is empty.
    """
    if tally.total < 1:
        raise ValueError("cannot estimate from an empty tally")

    total = tally.total
    n = tally.setting_counts()
    sums = tally.product_sums()

    conditional = [[None, None], [None, None]]
    unconditional = [[0.0, 0.0], [0.0, 0.0]]
    conditional_se = [[None, None], [None, None]]
    unconditional_se = [[None, None], [None, None]]
    inflation = [[None, None], [None, None]]
    inflation_se = [[None, None], [None, None]]
    counts = [[int(n[i, j]) for j in (0, 1)] for i in (0, 1)]

    for i, j in SETTINGS:
        n_ij = counts[i][j]
        unconditional[i][j] = int(sums[i, j]) / total
        # 𝒜_iℬ_j² is 1 on the trials that selected (i, j) and 0 elsewhere
        unconditional_se[i][j] = _mean_se(unconditional[i][j], n_ij / total, total)
        if n_ij > 0:
            conditional[i][j] = int(sums[i, j]) / n_ij
            conditional_se[i][j] = _mean_se(conditional[i][j], 1.0, n_ij)
            g = n_ij / total
            inflation[i][j] = total / n_ij
            inflation_se[i][j] = math.sqrt(g * (1.0 - g) / total) / (g * g)

    if all(cell is not None for row in conditional for cell in row):
        chsh_conditional_hat = sum(CHSH_SIGNS[i, j] * conditional[i][j] for i, j in SETTINGS)
        ses = [conditional_se[i][j] for i, j in SETTINGS]
        chsh_conditional_se = math.sqrt(sum(se * se for se in ses)) if None not in ses else None
    else:
        chsh_conditional_hat, chsh_conditional_se = None, None

    signed = int(sum(CHSH_SIGNS[i, j] * sums[i, j] for i, j in SETTINGS))
    chsh_complete_hat = signed / total
    chsh_complete_se = _mean_se(chsh_complete_hat, 1.0, total)

    return EstimateReport(
        conditional=conditional,
        unconditional=unconditional,
        setting_counts=counts,
        total=total,
        chsh_conditional_hat=chsh_conditional_hat,
        chsh_complete_hat=chsh_complete_hat,
        conditional_se=conditional_se,
        unconditional_se=unconditional_se,
        chsh_conditional_se=chsh_conditional_se,
        chsh_complete_se=chsh_complete_se,
        inflation=inflation,
        inflation_se=inflation_se,
    )


def within_band(value: float, target: float, se: float | None, band: float) -> bool:
    """True when |value − target| ≤ band·se (exact match required if se is 0 or unknown)."""
    if se is None or se == 0.0:
        return abs(value - target) <= 1e-12
    return abs(value - target) <= band * se
