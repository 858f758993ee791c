"""Exception hierarchy.

Every failure raised by the library derives from :class:`AbModError`.  The CLI
maps the three families below onto stable exit codes.
"""


class AbModError(Exception):
    """Base class for all library errors."""


class PreconditionError(AbModError):
    """An operation was called outside its domain."""


class PrecisionError(AbModError):
    """Truncated data is too short to certify the answer."""


class ParseError(AbModError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {column})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class InsufficientPrecision(PrecisionError):
    def __init__(self, message="insufficient precision", needed=None):
        if needed is not None:
            message = f"{message} (need known order >= {needed})"
        super().__init__(message)
        self.needed = needed


class NotAUnit(PreconditionError):
    pass


class RankDeficient(PreconditionError):
    pass


class NotASublattice(PreconditionError):
    pass


class ShapeMismatch(PreconditionError):
    pass


class BadParameter(PreconditionError):
    pass


class NotInvertible(PreconditionError):
    pass


class NotSimplePole(PreconditionError):
    pass


class NonSplitSpectrum(PreconditionError):
    pass


class NotPrimitive(PreconditionError):
    pass


class NotEigen(PreconditionError):
    pass


class NotStable(PreconditionError):
    pass


class NotRegular(PreconditionError):
    pass


class NotMinimalExponent(PreconditionError):
    pass


class NotStabilized(PrecisionError):
    pass


class BoundNotInteger(PreconditionError):
    pass


class CrossCheckFailed(AbModError):
    """Two independent computations disagree: an internal bug signal."""


class LiftNotUnique(AbModError):
    pass


class LiftNotFound(AbModError):
    pass
