"""Exception hierarchy. Every numeric-domain failure derives from ``SearchError``."""


class SearchError(Exception):
    """Base class for all numeric-domain errors raised by this package."""


class DomainError(SearchError, ValueError):
    """An argument lies outside its admissible range or is not finite."""


class DegenerateKernel(SearchError):
    """The kernel spectrum is degenerate (sin w below threshold)."""

    def __init__(self, message, sin_w=None):
        super().__init__(message)
        self.sin_w = sin_w


class NoMatchedPhase(SearchError):
    """No phi in (0, 2*pi) satisfies the matching condition for this theta."""

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)


class NotMatched(SearchError):
    """A phase pair that must satisfy the matching condition does not."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotCertain(SearchError):
    """The requested iteration count does not reach the marked state."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoSolution(SearchError):
    """No matched phases make f hit the requested integer."""

    def __init__(self, message, min_f=None):
        super().__init__(message)
        self.min_f = min_f


class OutOfSpan(SearchError):
    """The state has weight outside span{|tau>, U|eta>}."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateOverlap(SearchError):
    """|<tau|U|eta>| is 0 or 1, so the two-dimensional basis is undefined."""


class FileFormatError(SearchError, ValueError):
    """A unitary matrix file does not follow the expected plain-text layout."""
