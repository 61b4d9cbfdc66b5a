"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its target tolerance.

    Attributes
    ----------
    partial : float or None
        Best estimate available when the failure was detected.
    achieved_tol : float or None
        Tolerance actually reached, when known.
    trace : list
        Iteration history for iterative solvers, empty otherwise.
    """

    def __init__(self, message, partial=None, achieved_tol=None, trace=None):
        super().__init__(message)
        self.partial = partial
        self.achieved_tol = achieved_tol
        self.trace = list(trace) if trace is not None else []


class NonFiniteSampleError(RuntimeError):
    """A Monte-Carlo accumulation produced non-finite values.

    Carries the replicate indices that overflowed so the caller can report
    which substreams were affected.
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = list(indices)
