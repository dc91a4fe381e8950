"""Exception hierarchy.

Every domain error derives from :class:`QuadTMFError`, so callers (and the
CLI) can separate domain failures from programming errors.
"""


class QuadTMFError(Exception):
    """Base class for all domain errors raised by quadtmf."""

    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class SingularMatrix(QuadTMFError):
    code = "SingularMatrix"


class DimensionMismatch(QuadTMFError):
    code = "DimensionMismatch"


class NotSymmetric(QuadTMFError):
    code = "NotSymmetric"


class NonEvenDiagonal(QuadTMFError):
    code = "NonEvenDiagonal"


class NotUnimodular(QuadTMFError):
    code = "NotUnimodular"


class BudgetExceeded(QuadTMFError):
    code = "BudgetExceeded"


class IllegalMove(QuadTMFError):
    code = "IllegalMove"


class ValidationError(QuadTMFError):
    """Raised by the coefficient table loader.

    ``violations`` holds one message per failed check, so a broken table
    reports everything that is wrong with it at once.
    """

    code = "ValidationError"

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

    def to_json(self):
        d = super().to_json()
        d["violations"] = self.violations
        return d


class OutOfRange(QuadTMFError):
    code = "OutOfRange"


class ShapeMismatch(QuadTMFError):
    code = "ShapeMismatch"


class UnknownName(QuadTMFError):
    code = "UnknownName"


class NonUnitLeading(QuadTMFError):
    code = "NonUnitLeading"


class NotPositiveDefinite(QuadTMFError):
    code = "NotPositiveDefinite"


class NotEven(QuadTMFError):
    code = "NotEven"


class PreconditionFailed(QuadTMFError):
    code = "PreconditionFailed"


class NotInUpperHalfPlane(QuadTMFError):
    code = "NotInUpperHalfPlane"


class TailBoundTooLarge(QuadTMFError):
    code = "TailBoundTooLarge"


class NotSL2(QuadTMFError):
    code = "NotSL2"


class InclusionNotIsometric(QuadTMFError):
    code = "InclusionNotIsometric"


class InputError(QuadTMFError):
    """Malformed JSON payload or flag value."""

    code = "InputError"
