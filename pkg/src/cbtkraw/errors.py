"""Exception hierarchy shared by every module in the package."""


class CBTError(Exception):
    """Base class for all package errors."""


class DomainError(CBTError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(CBTError):
    """A state space or grid exceeds the configured size limit."""


class SolverError(CBTError):
    """The eigen-parameter solver could not produce a usable u-matrix."""


class ComplexRootError(SolverError):
    pass


class DegenerateError(SolverError):
    pass


class SingularLinkError(SolverError):
    pass


class SingularMatrixError(CBTError, ValueError):
    pass


class QuadratureError(CBTError):
    pass
