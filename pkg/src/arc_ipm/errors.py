"""Exception types raised by the solver stack."""


class ArcIpmError(Exception):
    """Base class for all package errors."""


class NumericalFailure(ArcIpmError):
    """A computation produced non-finite values or violated a numerical guard."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class SingularKkt(ArcIpmError):
    """The KKT matrix is numerically singular."""

    def __init__(self, message, cond_estimate=0.0):
        super().__init__(message)
        self.cond_estimate = cond_estimate


class StepFailure(ArcIpmError):
    """No acceptable step angle was found within the backtracking budget."""


class UnknownProblem(ArcIpmError, KeyError):
    def __init__(self, name, available):
        self.name = name
        self.available = tuple(available)
        super().__init__(f"unknown problem {name!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]


class InvalidArguments(ArcIpmError, ValueError):
    pass


class EmptyInput(ArcIpmError, ValueError):
    pass


class IoError(ArcIpmError, OSError):
    """Reading or writing an artifact failed."""

    def __init__(self, path, cause):
        self.path = str(path)
        self.cause = cause
        super().__init__(f"{self.path}: {cause}")

    def __str__(self):
        return self.args[0]
