"""Exception hierarchy shared by all modules."""


class CadzowError(Exception):
    """Base class for errors raised by this package."""


class InvalidPlan(CadzowError, ValueError):
    pass


class ShapeError(CadzowError, ValueError):
    pass


class RankError(CadzowError, ValueError):
    pass


class NumericalError(CadzowError, ArithmeticError):
    pass


class UnsupportedCombination(CadzowError, ValueError):
    pass


class DegenerateSignal(CadzowError, ValueError):
    pass


class InvalidArgument(CadzowError, ValueError):
    pass


class ParseError(CadzowError, ValueError):
    """Malformed serialized input. ``offset`` is the byte position of the fault."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ConfigError(CadzowError, ValueError):
    pass
