class BellcondError(Exception):
    """Base class of every error raised by the bellcond package."""


class DimensionError(BellcondError):
    """A matrix side is not allowed, would overflow 16, or two sides mismatch."""


class NumericIntegrityError(BellcondError):
    """A quantity that must be real (or Hermitian) is not, beyond tolerance."""


class FactorizationMismatchError(NumericIntegrityError):
    """The full tensor-product trace and its factorized form disagree."""


class ConsistencyError(NumericIntegrityError):
    """Two redundant computations of the same quantity disagree."""


class DensityValidationError(BellcondError):
    """
    A matrix failed the density-operator checks.

    Attributes:
        code (str): The first failed check: 'non_hermitian', 'non_unit_trace' or 'non_psd'.
        codes (tuple[str, ...]): Every failed check, in that order.
    """

    NON_HERMITIAN = "non_hermitian"
    NON_UNIT_TRACE = "non_unit_trace"
    NON_PSD = "non_psd"

    def __init__(self, codes, message):
        super().__init__(message)
        self.codes = tuple(codes)
        self.code = self.codes[0]


class ProjectorError(BellcondError):
    """A matrix is not an orthogonal projector."""


class ObservableError(BellcondError):
    """A matrix is not a dichotomic (±1) observable."""


class WeightsError(BellcondError):
    """A probability pair is negative or does not sum to one."""


class ZeroProbabilityBranchError(BellcondError):
    """Conditioning on an outcome whose probability vanishes."""


class UnknownStateError(BellcondError):
    """A Bell-state label outside {phi_plus, phi_minus, psi_plus, psi_minus}."""


class ConfigError(BellcondError):
    """
    A run configuration could not be parsed or validated.

    Attributes:
        line (int | None): 1-based line in the config file, when it can be located.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
