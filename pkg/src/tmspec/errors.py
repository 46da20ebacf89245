"""Exception hierarchy shared by all modules."""


class TmspecError(Exception):
    """Base class for numerical failures raised by this package."""


class QuadratureError(TmspecError):
    """An integral did not reach the requested tolerance."""


class NoZerosError(TmspecError):
    """The symbol has no zeros in the strip for the requested mass."""


class BracketError(TmspecError):
    """A root-bracketing scan failed to find a sign change."""


class RegimeError(TmspecError):
    """An operation was requested outside the regime where it is defined."""


class BranchError(TmspecError):
    """The principal logarithm of a(x) is not continuous on the grid."""


class ResidueMismatchError(TmspecError):
    """Two independent residue evaluations disagree."""


class DetectorMismatchError(TmspecError):
    """Determinant zeros do not reproduce the closed-form eigenvalue ladder."""
