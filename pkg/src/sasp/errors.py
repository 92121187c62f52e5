"""Exception types shared across the package."""


class SaspError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SaspError):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"{message} at {line}:{col}")
        self.message = message
        self.line = line
        self.col = col


class IllegalDisunification(SaspError):
    """Two negatively constrained variables were asked to differ."""


class NonGroundArithmetic(SaspError):
    """An arithmetic operand was not bound to a number."""


class DivisionByZero(SaspError):
    pass


class DepthLimitExceeded(SaspError):
    pass


class UniverseTooLarge(SaspError):
    pass


class AtomBoundExceeded(SaspError):
    pass
