"""Exception hierarchy shared by all anchorlife modules.

Two broad classes matter to callers (and to the CLI exit-code contract):
input problems (bad files, bad arguments, insufficient data) and numerical
failures (fits or detections that could not be completed on valid input).
"""


class AnchorLifeError(Exception):
    """Base class for all errors raised by this package."""


class DataError(AnchorLifeError, ValueError):
    """Malformed input data: unparsable files, invariant violations."""


class InsufficientDataError(DataError):
    """Too few usable points for the requested operation."""


class ModelDomainError(AnchorLifeError, ValueError):
    """Model evaluated or inverted outside its mathematical domain."""


class FitError(AnchorLifeError):
    """Numerical failure while estimating model parameters."""


class BandError(AnchorLifeError):
    """Confidence band cannot be computed (singular covariance, no dof)."""


class DetectionError(AnchorLifeError):
    """Failure-time detection could not produce a result."""


class ParallelLinesError(DetectionError):
    """The two regression windows produced indistinguishable slopes."""
