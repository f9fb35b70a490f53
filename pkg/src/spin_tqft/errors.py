"""Exception types shared across the package."""


class SpinTqftError(Exception):
    """Base class for all package errors."""


class NonFinite(SpinTqftError):
    """A tensor contains NaN or infinite entries."""


class SingularPairing(SpinTqftError):
    """The pairing tensor B has no inverse at the working tolerance."""


class DimensionMismatch(SpinTqftError):
    """Vector or tensor shapes do not match the algebra dimension."""


class InconsistentR(SpinTqftError):
    """The vertex amplitude R is incompatible with the Frobenius form."""


class SingularX(SpinTqftError):
    """The form element x of a matrix algebra is not invertible."""


class MismatchedR(SpinTqftError):
    """Direct summands carry different vertex amplitudes."""


class ShapeMismatch(SpinTqftError):
    """Grading parameters do not match the algebra shape."""


class UngradedIndex(SpinTqftError):
    """A basis index has no grading block assigned."""


class AxiomPrereqFailed(SpinTqftError):
    """A derived map was requested but its prerequisite axioms fail."""


class BoundaryEdge(SpinTqftError):
    """An interior-edge operation was applied to a boundary edge."""


class InvalidMove(SpinTqftError):
    """The requested local retriangulation move is not applicable."""


class LengthMismatch(SpinTqftError):
    """A quadratic-form bit vector has the wrong length for the genus."""


class StateOutOfRange(SpinTqftError):
    """A boundary state index lies outside the basis range."""


class ArityMismatch(SpinTqftError):
    """Diagram rows do not chain: strand counts are inconsistent."""


class NotSymmetric(SpinTqftError):
    """A symmetric Frobenius form was required but the pairing is not symmetric."""


class BudgetExhausted(SpinTqftError):
    """The solver ran out of starts before the solution set stabilised."""
