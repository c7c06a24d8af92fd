"""Exception hierarchy shared by every charflow module."""

from typing import Any, Dict, Optional


class CharflowError(Exception):
    """Base error; carries a stable machine code like an API error body."""

    code: str = "CHARFLOW_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Error payload for logs and JSON output."""
        return {
            "status": "error",
            "code": self.code,
            "message": self.message,
            "details": self.details,
        }


class InvalidInputError(CharflowError):
    """A precondition on an operation's inputs does not hold."""

    code = "INVALID_INPUT"


class UsageError(InvalidInputError):
    code = "USAGE_ERROR"


class ExprSyntaxError(CharflowError):
    """Parse failure at a byte offset of the expression source."""

    code = "EXPR_SYNTAX_ERROR"

    def __init__(self, offset: int, message: str):
        super().__init__(f"{message} at offset {offset}", {"offset": offset})
        self.offset = offset
        self.reason = message


class DomainError(CharflowError):
    """Evaluation outside an expression's domain (log of nonpositive, division by zero, ...)."""

    code = "DOMAIN_ERROR"


class NonFiniteError(DomainError):
    code = "NON_FINITE"


class FieldFileError(CharflowError):
    code = "FIELD_FILE_ERROR"

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}", {"line": line})
        self.line = line


class SingularPointError(CharflowError):
    """|∇u + F| fell below the singular threshold."""

    code = "SINGULAR_POINT"

    def __init__(self, x: float, y: float, d: float):
        super().__init__(f"singular point ({x:.6g}, {y:.6g}) with D = {d:.3g}", {"x": x, "y": y, "D": d})
        self.x = x
        self.y = y
        self.d = d


class ModeError(CharflowError):
    """The operation needs the other field mode (usually Graph)."""

    code = "MODE_ERROR"


class StepTooLargeError(CharflowError):
    code = "STEP_TOO_LARGE"


class TooShortError(InvalidInputError):
    code = "TOO_SHORT"


class NoConvergenceError(CharflowError):
    code = "NO_CONVERGENCE"

    def __init__(self, message: str, last_change: float):
        super().__init__(message, {"last_change": last_change})
        self.last_change = last_change


class SlopeBlowupError(CharflowError):
    """The graph slope bound |∫H| < 1 failed during Picard iteration."""

    code = "SLOPE_BLOWUP"


class TransversalMissError(CharflowError):
    code = "TRANSVERSAL_MISS"

    def __init__(self, x: float, y: float, message: str = "curve left the chart before crossing the transversal"):
        super().__init__(f"{message} (from ({x:.6g}, {y:.6g}))", {"x": x, "y": y})
        self.x = x
        self.y = y


class NegativeHeightError(InvalidInputError):
    code = "NEGATIVE_HEIGHT"


class LeftFeasibleSetError(CharflowError):
    code = "LEFT_FEASIBLE_SET"


class UnknownEntryError(CharflowError):
    code = "UNKNOWN_ENTRY"


class OrientationError(InvalidInputError):
    code = "ORIENTATION_ERROR"
