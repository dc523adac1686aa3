"""Exception hierarchy shared by all analysis modules."""


class FoldFoldError(Exception):
    """Base class for all errors raised by this package."""


class NumericalError(FoldFoldError):
    """A numerical procedure failed to converge or produced non-finite values."""


class DomainError(FoldFoldError):
    """The requested evaluation point violates an operation's precondition."""


class DegenerateError(FoldFoldError):
    """A denominator that the theory guarantees nonzero vanished numerically."""


class NoReturnError(FoldFoldError):
    """An orbit never re-crossed the Poincare section within the time budget."""


class NoEquilibriumError(FoldFoldError):
    """The regularized system has no critical point (X1*Y1(0) > 0)."""


class NotVersalError(FoldFoldError):
    """The unfolding is not versal; the requested quantity is undefined."""


class ExtensionError(FoldFoldError):
    """A Fenichel-manifold extension escaped before reaching the target section."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class EscapeError(FoldFoldError):
    """A trajectory left the working box."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NoOrbitError(FoldFoldError):
    """No periodic orbit was found in the search bracket."""


class NoSaddleNodeError(FoldFoldError):
    """The Melnikov zero level has no interior stationary point."""


class IndeterminateError(FoldFoldError):
    """A sign-based classification fell below its resolution threshold."""


class UsageError(FoldFoldError):
    """Invalid command-line usage (unknown scenario, bad flags)."""
