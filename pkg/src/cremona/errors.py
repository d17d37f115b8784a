"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CremonaError(Exception):
    """Base class for every error raised by this package."""


class DegreeMismatch(CremonaError):
    pass


class NotBirational(CremonaError):
    pass


class CommonFactor(CremonaError):
    def __init__(self, factor, message: str | None = None):
        self.factor = factor
        super().__init__(message or f"components share the common factor {factor}")


class BudgetExceeded(CremonaError):
    """Raised when an iterate's raw degree passes the configured cap.

    ``sequence`` holds the degrees computed before the cap was hit, so
    ``len(sequence) - 1`` is the last good k.
    """

    def __init__(self, sequence, raw_degree: int, budget: int):
        self.sequence = sequence
        self.raw_degree = raw_degree
        self.budget = budget
        super().__init__(
            f"raw degree {raw_degree} exceeds budget {budget} "
            f"(last good k = {len(sequence) - 1})"
        )


class IrrationalBasePoint(CremonaError):
    def __init__(self, residual, message: str | None = None):
        self.residual = residual
        super().__init__(message or f"base points with irrational coordinates: residual factor {residual}")


class InfinitelyNearSuspected(CremonaError):
    def __init__(self, points, message: str):
        self.points = points
        super().__init__(message)


class NoetherViolation(CremonaError):
    pass


class UnassignedFactor(CremonaError):
    pass


class MissingFactor(CremonaError):
    pass


class HitsInverseFPoint(CremonaError):
    pass


class InsufficientData(CremonaError):
    pass


class SingularSystem(CremonaError):
    pass


class ExpressionSyntaxError(CremonaError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnboundParameter(CremonaError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"parameter {name!r} has no value")


class NonHomogeneous(CremonaError):
    pass
