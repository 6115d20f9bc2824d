"""
Exception hierarchy for hqvi.

Every error carries a stable ``code`` used in the CLI's structured error object
and an ``exit_code``: 2 for bad input, 3 for numeric failures.
"""

from typing import Any, Dict, Optional


class HQVIError(Exception):
    """Base class for all hqvi errors."""

    code = "HQVI_ERROR"
    exit_code = 3

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "code": self.code,
            "message": self.message,
            "details": self.details,
        }


class InputError(HQVIError):
    """Problem data that can never be computed as given."""
    code = "INVALID_INPUT"
    exit_code = 2


class NumericError(HQVIError):
    """A numeric stage failed; resampling or more precision may help."""
    code = "NUMERIC_FAILURE"
    exit_code = 3


# Input errors

class RankChainInvalid(InputError):
    code = "RANK_CHAIN_INVALID"


class EquivariantParamsDegenerate(InputError):
    code = "EQUIVARIANT_PARAMS_DEGENERATE"


class InvalidInsertion(InputError):
    code = "INVALID_INSERTION"


class InsertionParseError(InputError):
    code = "INSERTION_PARSE"


class UnboundedSupport(InputError):
    code = "UNBOUNDED_SUPPORT"


class BundleDegreePositive(InputError):
    code = "BUNDLE_DEGREE_POSITIVE"


class MethodMismatch(InputError):
    code = "METHOD_MISMATCH"


class ZeroParameter(InputError):
    code = "ZERO_PARAMETER"


class HypothesisNotMet(InputError):
    code = "HYPOTHESIS_NOT_MET"


class UsageError(InputError):
    code = "USAGE"


# Numeric errors

class DegenerateSolution(NumericError):
    code = "DEGENERATE_SOLUTION"


class IncompleteSolutionSet(NumericError):
    code = "INCOMPLETE_SOLUTION_SET"


class JNearZero(NumericError):
    code = "J_NEAR_ZERO"


class RoundingUnsafe(NumericError):
    code = "ROUNDING_UNSAFE"


class ResidualTooLarge(NumericError):
    code = "RESIDUAL_TOO_LARGE"


class RootsDegenerate(NumericError):
    code = "ROOTS_DEGENERATE"


class NumericFailure(NumericError):
    code = "NUMERIC_FAILURE"
