"""anchorlife: sustained-load time-to-failure analysis for bonded anchors.

Fits stress versus time-to-failure regression models (logarithmic,
power-law, sigmoid, rate-theory, Powell-Eyring) to anchor test data,
extrapolates safe load levels to a required service life with confidence
bands, and extracts failure times and rate-sensitivity measures from raw
sustained-load records.
"""

__version__ = "0.1.0"

from .dataset import (
    BUILTIN_DATASET_NAMES,
    FailurePoint,
    HOURS_PER_YEAR,
    RatePoint,
    TimeSeries,
    TtfDataset,
    builtin_dataset,
    load_dataset,
    load_rates,
    load_series,
    save_dataset,
)
from .errors import (
    AnchorLifeError,
    BandError,
    DataError,
    DetectionError,
    FitError,
    InsufficientDataError,
    ModelDomainError,
    ParallelLinesError,
)
from .fitting import (
    FIFTY_YEARS_HOURS,
    ComparisonReport,
    ComparisonRow,
    FitConfig,
    FitResult,
    compare_models,
    confidence_band,
    default_config,
    fit,
    safe_load,
)
from .models import (
    LogarithmicParams,
    ModelKind,
    ModelParams,
    PowellEyringParams,
    PowerLawParams,
    RateTheoryParams,
    SigmoidParams,
    asymptote,
    eval_model,
    inverse_time,
    make_params,
    param_values,
)
from .signal import (
    AnchorGeometry,
    DetectionConfig,
    RateSensitivity,
    bond_strength,
    detect_failure_intersection,
    detect_failure_pressure,
    rate_sensitivity,
)

__all__ = [
    "__version__",
    # dataset
    "BUILTIN_DATASET_NAMES",
    "FailurePoint",
    "HOURS_PER_YEAR",
    "RatePoint",
    "TimeSeries",
    "TtfDataset",
    "builtin_dataset",
    "load_dataset",
    "load_rates",
    "load_series",
    "save_dataset",
    # errors
    "AnchorLifeError",
    "BandError",
    "DataError",
    "DetectionError",
    "FitError",
    "InsufficientDataError",
    "ModelDomainError",
    "ParallelLinesError",
    # fitting
    "FIFTY_YEARS_HOURS",
    "ComparisonReport",
    "ComparisonRow",
    "FitConfig",
    "FitResult",
    "compare_models",
    "confidence_band",
    "default_config",
    "fit",
    "safe_load",
    # models
    "LogarithmicParams",
    "ModelKind",
    "ModelParams",
    "PowellEyringParams",
    "PowerLawParams",
    "RateTheoryParams",
    "SigmoidParams",
    "asymptote",
    "eval_model",
    "inverse_time",
    "make_params",
    "param_values",
    # signal
    "AnchorGeometry",
    "DetectionConfig",
    "RateSensitivity",
    "bond_strength",
    "detect_failure_intersection",
    "detect_failure_pressure",
    "rate_sensitivity",
]
