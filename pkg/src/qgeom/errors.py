"""Exception hierarchy shared by every qgeom module."""


class QGeomError(ValueError):
    """Base class for domain errors raised by qgeom."""


class DimensionError(QGeomError):
    pass


class NotHermitian(QGeomError):
    pass


class ContractError(QGeomError):
    """A documented precondition of an operation was violated."""


class NumericalError(QGeomError):
    pass


class TraceNotOne(QGeomError):
    def __init__(self, trace):
        self.trace = float(trace)
        super().__init__(f"trace is {self.trace!r}, expected 1")


class NotPositive(QGeomError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(f"minimum eigenvalue is {self.min_eigenvalue!r}, expected >= 0")


class NotState(QGeomError):
    pass


class NotPure(QGeomError):
    pass


class NonTangent(QGeomError):
    """Vector has support on a degenerate eigenblock of the base point."""


class BaseMismatch(QGeomError):
    pass


class AtCenter(QGeomError):
    """Operation undefined at the maximally mixed state."""


class DetNotOne(QGeomError):
    def __init__(self, det):
        self.det = complex(det)
        super().__init__(f"det(g) = {self.det!r}, expected 1")


class DegenerateDenominator(QGeomError):
    pass


class FlowAborted(QGeomError):
    """Integration left the state space; ``trajectory`` holds the valid prefix."""

    def __init__(self, message, trajectory):
        self.trajectory = trajectory
        super().__init__(message)


class RankMismatch(QGeomError):
    pass


class NotProduct(QGeomError):
    pass
