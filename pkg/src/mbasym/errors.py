"""Exception hierarchy shared by every module of the package."""


class MBAsymError(Exception):
    """Base class for all package errors."""


class PoleError(MBAsymError, ZeroDivisionError):
    """Evaluation requested at a pole of a meromorphic function."""


class DomainError(MBAsymError, ValueError):
    """Argument outside the supported real domain."""


class PrecisionError(MBAsymError, ArithmeticError):
    """The working precision cannot deliver the requested accuracy."""


class ConvergenceError(MBAsymError, ArithmeticError):
    """A summation would need more terms than the configured cap."""


class ParamsError(MBAsymError, ValueError):
    """Series parameters violate an admissibility condition."""


class StripError(MBAsymError, ValueError):
    """Mellin variable outside the strip of validity."""


class RegimeError(MBAsymError, ValueError):
    """The requested expansion does not apply for this value of gamma + nu."""


class IntegerNuError(RegimeError):
    """The Y-series expansion needs non-integer order."""


class UnimplementedError(MBAsymError, NotImplementedError):
    """The case is outside what the closed forms cover."""
