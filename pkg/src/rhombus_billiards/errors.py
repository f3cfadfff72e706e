"""Exception hierarchy shared by all modules."""


class BilliardError(Exception):
    """Base class for every error raised by this package."""


class ParseError(BilliardError, ValueError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class OutOfRange(BilliardError, ValueError):
    """The angle lies outside (0, pi/4), or outside the range an operation requires."""


class UndecidableRange(BilliardError):
    """The angle cannot be separated from pi/6 or pi/4 at the precision cap."""


class Undecided(BilliardError):
    """A sign could not be certified at the precision cap.

    ``value`` carries the quantity whose sign was requested, so callers can
    report the offending coordinate.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class StepBudgetExhausted(BilliardError):
    pass


class MalformedCode(BilliardError, ValueError):
    pass


class CountViolation(BilliardError):
    """Exceptional-beam count differs from one (never valid in the theorem range)."""


class SymmetryViolation(BilliardError):
    pass


class LengthMismatch(BilliardError):
    pass
