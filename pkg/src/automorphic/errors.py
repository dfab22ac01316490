"""Exception hierarchy shared by all modules."""


class AutomorphicError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AutomorphicError, ValueError):
    """Input outside the region where the requested object is defined."""


class PoleError(DomainError):
    """A Gamma factor or Pochhammer denominator hits a pole."""


class SingularityError(DomainError):
    """Evaluation point sits on (or numerically at) a singularity of a kernel."""


class ConvergenceError(AutomorphicError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within its limits."""


class DivergenceError(AutomorphicError, ArithmeticError):
    """The requested integral or transform does not exist for these parameters."""


class ResourceError(AutomorphicError, RuntimeError):
    """An enumeration would exceed the configured cardinality cap."""


class TruncationError(AutomorphicError, ArithmeticError):
    """A tail estimate exceeded the tolerance of a ``fail_if_above`` policy."""
