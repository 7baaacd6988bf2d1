"""Exception types shared across the package."""


class PartialQError(Exception):
    """Base class for errors raised by this package."""


class DataError(PartialQError):
    """Bad input data: malformed files, inconsistent labels, invalid masses."""


class NumericError(PartialQError):
    """A computation could not be completed: infeasible solve, empty grid, etc."""


class DimensionMismatch(DataError):
    def __init__(self, expected, got):
        super().__init__(f"expected dimension {expected}, got {got}")


class UnknownLabel(DataError):
    def __init__(self, label):
        super().__init__(f"unknown label {label!r}")


class NotAPartialOrder(DataError):
    """The supplied relation violates acyclicity or antisymmetry."""


class NotALattice(PartialQError):
    """Meet or join requested for an order that does not support them."""


class UnnormalizedDistribution(DataError):
    def __init__(self, total):
        super().__init__(f"masses sum to {total}, not 1 (tolerance 1e-12)")


class TauOutOfRange(DataError):
    def __init__(self, tau):
        super().__init__(f"tau must lie strictly between 0 and 1, got {tau}")


class EmptyCandidateSet(NumericError):
    """No candidate point satisfies the requested constraints."""


class ZeroComparability(NumericError):
    """Every candidate is comparable to nothing; indices are undefined."""


class InfeasibleStart(NumericError):
    """Could not find a feasible starting point for the solver."""


class NotInBody(NumericError):
    """A chord was requested from a point outside the feasible set."""


class CurveGridError(DataError):
    """A curve's tau grid is empty, unsorted, or mismatched with its points."""
