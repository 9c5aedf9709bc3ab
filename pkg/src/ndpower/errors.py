"""Exception hierarchy. The CLI maps each family onto an exit status."""


class NDPowerError(Exception):
    exit_code = 1


class ParseError(NDPowerError, ValueError):
    exit_code = 2

    def __init__(self, message: str, lineno: int | None = None):
        super().__init__(message)
        self.lineno = lineno


class LiteralParseError(ParseError):
    pass


class BaseParseError(ParseError):
    pass


class CircuitParseError(ParseError):
    pass


class PreconditionError(NDPowerError):
    exit_code = 3


class ArityError(PreconditionError, ValueError):
    pass


class BoundExceeded(PreconditionError):
    pass


class InvalidCircuit(PreconditionError):
    pass


class BaseMismatch(PreconditionError):
    """A gate of the input circuit is outside the class the transform needs."""


class MissingMember(PreconditionError):
    def __init__(self, message: str, function=None):
        super().__init__(message)
        self.function = function


class NotReproducing(PreconditionError):
    pass


class NotSelfDual(PreconditionError):
    def __init__(self, message: str, pair):
        super().__init__(message)
        self.pair = pair


class NoSeparatingInput(PreconditionError):
    def __init__(self, message: str, rows):
        super().__init__(message)
        self.rows = rows


class Unrepresentable(PreconditionError):
    pass


class OracleMismatch(NDPowerError):
    """A transform produced a circuit the exhaustive oracle disagrees with."""

    exit_code = 4

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class ClassificationError(NDPowerError, RuntimeError):
    """Neither gadget was found for a base outside the three weak classes."""

    exit_code = 4
