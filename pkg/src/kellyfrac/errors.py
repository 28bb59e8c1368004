"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class BoundaryError(DomainError):
    """Evaluation requested at or beyond the survival boundary 1 + k.x <= 0."""


class UnboundedBoundaryError(DomainError):
    """The requested constraint boundary is not a bounded closed curve."""


class ContinuousModelError(DomainError):
    """A continuous model was used where a finite atom set is required."""


class SurvivalViolated(DomainError):
    """A wealth multiplier went negative, i.e. the bet lost more than the account."""

    def __init__(self, step: int, multiplier: float):
        self.step = step
        self.multiplier = multiplier
        super().__init__(f"survival violated at step {step}: multiplier {multiplier!r} < 0")


class ParseError(DomainError):
    """Malformed input file; ``row`` is the 1-based line number of the offending row."""

    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")
