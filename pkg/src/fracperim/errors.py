"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`FracPerimError`, so callers can catch the whole family at once.
"""


class FracPerimError(Exception):
    """Base class for library errors."""


class DivergentInteractionError(FracPerimError):
    """A nonlocal interaction (or a perimeter built from it) is infinite."""


class UnboundedMeasureError(FracPerimError):
    """A finite measure was requested for a set of infinite measure."""


class SingularPairError(FracPerimError):
    """Monte Carlo was asked to integrate a kernel that is unbounded on A x B."""


class ExponentOverflowError(FracPerimError, OverflowError):
    """A quantity left the double-precision range; use the log-domain path."""


class RegimeError(FracPerimError):
    """The requested parameter lies outside the regime of an evaluation path."""


class DomainError(FracPerimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HalfMeasureError(DomainError):
    """alpha cannot be recovered from mu when |Omega \\ E| = |E cap Omega|."""


class RankDeficiencyError(FracPerimError):
    """The extrapolation design matrix does not have full column rank."""


class SchemaError(FracPerimError, ValueError):
    """A scene description violates the scene schema."""


class UnsupportedSceneError(FracPerimError, NotImplementedError):
    """No evaluation path exists for this combination of set and domain."""
