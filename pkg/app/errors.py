"""
Error types shared by the engine and the CLI.

Every error has a machine-readable ``kind``. Input problems exit with code 2,
internal-consistency failures (two independent computations disagreeing)
with code 3.
"""

from typing import Any, Dict, Optional


class EngineError(Exception):
    """Base class; subclasses fix the exit code."""

    exit_code = 1

    def __init__(self, kind: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": {
                "kind": self.kind,
                "message": self.message,
                "details": self.details,
            }
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}(kind={self.kind!r}, message={self.message!r})"


class InputError(EngineError):
    """Malformed or inconsistent user data."""

    exit_code = 2


class ConsistencyError(EngineError):
    """Two code paths that must agree did not."""

    exit_code = 3


# Input kinds
DIMENSION_MISMATCH = "DimensionMismatch"
DEPENDENT_GENERATORS = "DependentGenerators"
INFINITE_INDEX = "InfiniteIndex"
NOT_POSITIVE_SYSTEM = "NotPositiveSystem"
NOT_A_ROOT_SYSTEM = "NotARootSystem"
SIZE_CAP_EXCEEDED = "SizeCapExceeded"
PARITY_VIOLATION = "ParityViolation"
INVOLUTION_INVALID = "InvolutionInvalid"
NO_SOLUTION = "NoSolution"
EMPTY_SIMPLE_SET = "EmptySimpleSet"
BAD_PARAMETERS = "BadParameters"
UNKNOWN_PARABOLIC = "UnknownParabolic"
SCHEMA_INVALID = "SchemaInvalid"

# Consistency kinds
COUNT_MISMATCH = "CountMismatch"
FORMULA_MISMATCH = "FormulaMismatch"
ORACLE_DISAGREEMENT = "OracleDisagreement"
CONE_INCLUSION_FAILURE = "ConeInclusionFailure"
