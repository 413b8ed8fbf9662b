"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SingularParameterError(DomainError):
    """A parameter sits on (or too near) a removable singularity of a closed form."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap or lost its bracket."""
