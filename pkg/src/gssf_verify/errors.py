"""Error taxonomy for the verification library.

Every failure mode that callers are expected to catch has its own class so
reports and tests can distinguish a bad input from a numerical breakdown.
"""


class GssfVerifyError(Exception):
    """Base class for all library errors."""


class UnsupportedOrderError(GssfVerifyError):
    """Requested derivative order is outside the supported range."""


class NumericDomainError(GssfVerifyError):
    """An evaluation produced a non-finite value (NaN or infinity)."""


class ShapeError(GssfVerifyError):
    """Array shapes are inconsistent with the requested operation."""


class DegenerateFrameError(GssfVerifyError):
    """Vectors handed to orthonormalization are linearly dependent."""


class DegenerateMetricError(GssfVerifyError):
    """Metric matrix is singular or too ill-conditioned to invert."""


class DimensionError(GssfVerifyError):
    """Operation requires an odd-dimensional space and got an even one."""


class FitDegenerateError(GssfVerifyError):
    """Least-squares normal equations are singular.

    Carries the offending Gram matrix in the ``gram`` attribute.
    """

    def __init__(self, message, gram):
        super().__init__(message)
        self.gram = gram


class NotAGssfError(GssfVerifyError):
    """Curvature fit residual is too large for identity checks to apply."""


class ImmersionDegenerateError(GssfVerifyError):
    """Immersion Jacobian is rank deficient at the sampled point."""


class InsufficientSamplesError(GssfVerifyError):
    """Every classification sample was skipped; no angle data available."""


class ClassificationMismatchError(GssfVerifyError):
    """Operation requires an invariant submanifold and got another kind."""


class PreconditionError(GssfVerifyError):
    """A stated operation precondition does not hold for this input."""


class NotFoundError(GssfVerifyError):
    """Catalog lookup failed.  Carries the available names."""

    def __init__(self, name, available):
        self.name = name
        self.available = sorted(available)
        super().__init__(
            "unknown catalog name {!r}; available: {}".format(
                name, ", ".join(self.available)
            )
        )
