class LabError(Exception):
    """
    Base of all errors raised on purpose by the lab. The CLI turns these into an exit
    code of 2 with the message as diagnostic.
    """


class InvalidArgument(LabError, ValueError):
    pass


class ResourceLimit(LabError, RuntimeError):
    pass


class PrecisionLimit(LabError, RuntimeError):
    pass


class ReductionError(LabError, RuntimeError):
    """
    Fundamental domain reduction did not terminate within its iteration cap.
    """


class NotACoboundary(LabError, ValueError):
    """
    The twisted invariant distribution does not vanish on the function, so the flow
    cohomological equation has no solution.
    """


class NotAMapCoboundary(LabError, ValueError):
    """
    The function does not vanish at a zero of e^{iLξ} - 1 inside its support.
    """


class UndefinedDistribution(LabError, ValueError):
    pass


class UnsupportedIndex(LabError, ValueError):
    pass


class OutOfRegime(LabError, ValueError):
    pass


class UseUntwistedPath(LabError, ValueError):
    """
    A twist of λ = 0 was requested from the twisted integral, the untwisted ergodic
    integral is the separate entry point for that.
    """
