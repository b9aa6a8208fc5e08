"""
Error types for dipcheck
Every error carries a stable code that the CLI reports verbatim
"""

from typing import Any, Dict, List, Optional


class DipCheckError(Exception):
    """Base class for all dipcheck errors"""

    code = "dipcheck_error"
    exit_code = 2

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary"""
        payload: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class DocumentSyntaxError(DipCheckError):
    """Document is not well-formed JSON/YAML"""

    code = "syntax_error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}", line=line, column=column)
        self.line = line
        self.column = column


class SchemaError(DipCheckError):
    """Document parses but does not match the expected schema"""

    code = "schema_error"

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, field=field)
        self.field = field


class AutomatonValidationError(DipCheckError):
    """Automaton violates one or more structural conditions"""

    code = "validation_error"

    def __init__(self, issues: List[Any]):
        summary = "; ".join(issue.message for issue in issues)
        super().__init__(f"{len(issues)} validation issue(s): {summary}")
        self.issues = list(issues)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "issues": [issue.to_dict() for issue in self.issues],
        }


class UnknownBuiltin(DipCheckError):
    code = "unknown_builtin"


class NonPositiveRate(DipCheckError):
    code = "non_positive_rate"


class DivergentTail(DipCheckError):
    code = "divergent_tail"


class NoSuchTransition(DipCheckError):
    """Path step does not select a transition"""

    code = "no_such_transition"

    def __init__(self, message: str, step: int):
        super().__init__(message, step=step)
        self.step = step


class InputKindMismatch(DipCheckError):
    code = "input_kind_mismatch"


class BadInterval(DipCheckError):
    code = "bad_interval"


class NonPositiveEpsilon(DipCheckError):
    code = "non_positive_epsilon"


class DegenerateScale(DipCheckError):
    code = "degenerate_scale"


class WrongWitnessKind(DipCheckError):
    code = "wrong_witness_kind"


class InvalidRepetition(DipCheckError):
    code = "invalid_repetition"


class AutomatonIsWellFormed(DipCheckError):
    """Refutation requested for an automaton that is differentially private"""

    code = "automaton_is_well_formed"


class NumericalError(DipCheckError):
    """Exact evaluation produced a value outside [0, 1] beyond rounding"""

    code = "numerical_error"
