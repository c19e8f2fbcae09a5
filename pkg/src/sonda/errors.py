"""Exception hierarchy shared by all modules."""


class SondaError(Exception):
    """Base class for every error raised by this package."""


class MalformedDyadic(SondaError, ValueError):
    pass


class MalformedTuple(SondaError, ValueError):
    pass


class MalformedName(SondaError, ValueError):
    """An oracle answered with a string outside the expected grammar."""


class RegularityFault(SondaError):
    """A name was caught violating length monotonicity."""


class DominationFault(SondaError):
    """A padded value was longer than its dominating size."""


class ParseError(SondaError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class BoundExceeded(SondaError):
    """A metered computation went over its declared second-order bound."""

    def __init__(self, cost: int, limit: int):
        self.cost = cost
        self.limit = limit
        super().__init__(f"cost {cost} exceeds declared bound {limit}")


class TrajectoryEscape(SondaError):
    """An Euler iterate left the band the right-hand side is defined on."""


class CapExceeded(SondaError):
    """A brute-force search was asked to go beyond its configured cap."""


class NotLengthPreserving(SondaError):
    pass


class EmptySet(SondaError, ValueError):
    pass
