"""Exception and warning classes.

Every error carries a short machine-readable ``code`` (used by the command
line ``ERROR <code>: <detail>`` line) and an ``exit_status`` category.
"""

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ExcidynError(ValueError):
    code = "Error"
    exit_status = EXIT_NUMERIC

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail


# linear algebra
class NotHermitian(ExcidynError):
    code = "NotHermitian"


class NotSquare(ExcidynError):
    code = "NotSquare"


class DimensionMismatch(ExcidynError):
    code = "DimensionMismatch"


class DomainError(ExcidynError):
    code = "DomainError"


class InvalidState(ExcidynError):
    code = "InvalidState"


# input documents
class ParseError(ExcidynError):
    code = "ParseError"
    exit_status = EXIT_CONFIG


class AsymmetricInput(ExcidynError):
    code = "AsymmetricInput"
    exit_status = EXIT_CONFIG


class DimensionError(ExcidynError):
    code = "DimensionError"
    exit_status = EXIT_CONFIG


class ConfigError(ExcidynError):
    """Raised with the full list of violations found in a config document."""

    code = "ConfigError"
    exit_status = EXIT_CONFIG

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# dynamics
class NegativeTime(ExcidynError):
    code = "NegativeTime"


class UnknownSite(ExcidynError):
    code = "UnknownSite"
    exit_status = EXIT_CONFIG


class PositivityBreach(ExcidynError):
    code = "PositivityBreach"


class NoSinkChannel(ExcidynError):
    code = "NoSinkChannel"


# measures
class GridMismatch(ExcidynError):
    code = "GridMismatch"


class SupNormViolation(ExcidynError):
    code = "SupNormViolation"


class WrongDimension(ExcidynError):
    code = "WrongDimension"


class MarginalChanged(ExcidynError):
    code = "MarginalChanged"


# state factories
class NotNormalized(ExcidynError):
    code = "NotNormalized"
    exit_status = EXIT_CONFIG


class LengthMismatch(ExcidynError):
    code = "LengthMismatch"
    exit_status = EXIT_CONFIG


class TooFewQubits(ExcidynError):
    code = "TooFewQubits"
    exit_status = EXIT_CONFIG


class TooManyQubits(ExcidynError):
    code = "TooManyQubits"
    exit_status = EXIT_CONFIG


class ExcidynWarning(UserWarning):
    code = "Warning"


class GridTooCoarse(ExcidynWarning):
    code = "GridTooCoarse"


class StepTooLarge(ExcidynWarning):
    code = "StepTooLarge"


class NegativeLostWork(ExcidynWarning):
    code = "NegativeLostWork"
