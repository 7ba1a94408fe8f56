"""
Exception hierarchy shared by every quiverhall module.

Each error carries a short machine-readable ``code`` and the process
``exit_status`` the command-line runner uses when it escapes to the top.
"""

__all__ = [
    "QuiverHallError",
    "QuiverError",
    "QuiverSyntaxError",
    "UnknownVertexError",
    "NotDynkinError",
    "DimensionMismatchError",
    "ContainmentError",
    "SingularMatrixError",
    "NotARootError",
    "LabelError",
    "SearchExhaustedError",
    "InterpolationError",
    "InexactDivisionError",
    "NotAPolynomialError",
    "InvariantViolation",
    "TransversalityError",
    "ConfigError",
]

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2


class QuiverHallError(Exception):
    """Base class; ``code`` names the failure kind."""

    code = "error"
    exit_status = EXIT_VERIFICATION_FAILED

    def __str__(self) -> str:
        return f"[{self.code}] {super().__str__()}"


class QuiverError(QuiverHallError, ValueError):
    exit_status = EXIT_CONFIG_ERROR


class QuiverSyntaxError(QuiverError):
    code = "syntax"


class UnknownVertexError(QuiverError):
    code = "unknown-vertex"


class NotDynkinError(QuiverError):
    code = "not-dynkin"


class DimensionMismatchError(QuiverHallError, ValueError):
    code = "dimension"
    exit_status = EXIT_CONFIG_ERROR


class ContainmentError(QuiverHallError, ValueError):
    code = "containment"


class SingularMatrixError(QuiverHallError, ValueError):
    code = "singular"


class NotARootError(QuiverHallError, ValueError):
    code = "not-a-root"
    exit_status = EXIT_CONFIG_ERROR


class LabelError(QuiverHallError, ValueError):
    """An orbit or indecomposable name that does not parse."""

    code = "label"
    exit_status = EXIT_CONFIG_ERROR


class SearchExhaustedError(QuiverHallError, RuntimeError):
    """Raised when the indecomposable search hits its attempt bound."""

    code = "search-exhausted"


class InterpolationError(QuiverHallError, ArithmeticError):
    """Non-integer coefficient or holdout mismatch while fitting counts."""

    code = "interpolation"


class InexactDivisionError(QuiverHallError, ArithmeticError):
    code = "inexact-division"


class NotAPolynomialError(QuiverHallError, ValueError):
    code = "not-in-q"


class InvariantViolation(QuiverHallError, RuntimeError):
    code = "invariant"


class TransversalityError(InvariantViolation):
    """The preprojective fiber meets the tangent space of the orbit."""

    code = "transversality"


class ConfigError(QuiverHallError, ValueError):
    code = "config"
    exit_status = EXIT_CONFIG_ERROR
