"""Exception hierarchy shared by all validode modules."""


class ValidodeError(Exception):
    """Base class for all library errors."""


class DivisionByZeroInterval(ValidodeError):
    """Divisor interval contains zero; caller must split or widen."""


class DomainError(ValidodeError):
    """Argument outside the rigorous domain of an elementary function."""


class EmptyIntersection(ValidodeError):
    """Intersection of two intervals / boxes is empty."""


class DimensionMismatch(ValidodeError):
    """Vector / matrix dimensions do not conform."""


class SingularPivot(ValidodeError):
    """Interval Gaussian elimination hit a pivot containing zero."""


class RankDeficient(ValidodeError):
    """Matrix is not verifiably of full rank."""


class StepTooSmall(ValidodeError):
    """Step control pushed the step size below h_min."""


class MaxStepsExceeded(ValidodeError):
    """Integration exceeded the configured step budget."""


class NoCrossing(ValidodeError):
    """No admissible section crossing found within the time budget."""


class TransversalityFailure(ValidodeError):
    """0 in <grad S, f> on the crossing enclosure; crossing not transversal."""


class ExpressionSyntaxError(ValidodeError):
    """Vector field source text failed to parse."""

    def __init__(self, position: int, message: str):
        super().__init__(f"at offset {position}: {message}")
        self.position = position
        self.message = message


class UnknownIdentifier(ExpressionSyntaxError):
    pass


class ArityMismatch(ValidodeError):
    """Number of fun expressions differs from number of var names."""


class DepthLimit(ValidodeError):
    """Adaptive bisection hit its depth limit without a verdict."""
