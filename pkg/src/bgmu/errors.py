"""Exception hierarchy shared across the package."""


class BgmuError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(BgmuError, ValueError):
    """Operands live in groups of different rank or block structure."""


class ParseError(BgmuError, ValueError):
    """Malformed element or problem literal."""


class KappaMismatch(BgmuError, ValueError):
    """Newton points with different Kottwitz invariants are incomparable."""


class GuardExceeded(BgmuError, RuntimeError):
    """A desk-scale enumeration guard was hit.

    Raise the limit explicitly (or via the BGMU_GUARD environment
    variable) if the larger computation is really wanted.
    """


class CriterionFailed(BgmuError, ValueError):
    """A witness was requested for a Newton point that fails the
    integrality criterion, so no witness exists."""


class UnsupportedTwist(BgmuError, ValueError):
    """The constructive solver reached a configuration it does not
    handle (a diagram flip surviving to a rank >= 2 superbasic base)."""


class InternalCheckFailed(BgmuError, AssertionError):
    """A self-verification that is guaranteed by theory failed.

    This always indicates a bug, never bad user input; the message
    carries enough state to replay the failure.
    """
