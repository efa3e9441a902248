"""Load level versus time-to-failure regression model families.

Five functional forms relate the sustained load level y = N/N_100% to the
failure time t_f (hours):

    logarithmic    y = a * ln(t_f) + b
    power_law      ln(y) = ln(b) + n * ln(t_f)        (i.e. y = b * t_f**n)
    sigmoid        y = k_inf + (k_0 - k_inf) * (1 / (1 + b*t_f))**c
    rate_theory    y = k_inf + asinh((b*t_f)**n / c)
    powell_eyring  y = k_inf + (k_0 - k_inf) * asinh(b*t_f) / (b*t_f)

k_inf is the long-time asymptotic load level (no failure below it), k_0 the
instantaneous-failure level. The logarithmic, power-law and rate-theory
forms diverge as t_f -> 0; the sigmoid and Powell-Eyring forms approach k_0
there and are the only ones with physical asymptotes at both ends.

All times are in hours, all load levels are dimensionless fractions of the
short-term capacity.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, dataclass, fields
from enum import Enum
from typing import ClassVar, Union

import numpy as np
from scipy.optimize import brentq

from .errors import ModelDomainError

__all__ = [
    "ModelKind",
    "LogarithmicParams",
    "PowerLawParams",
    "SigmoidParams",
    "RateTheoryParams",
    "PowellEyringParams",
    "ModelParams",
    "params_class",
    "make_params",
    "eval_model",
    "inverse_time",
    "asymptote",
]

# Upper bound on admissible load levels; data slightly above 1.0 occur when a
# sustained test outlives the mean short-term capacity estimate.
MAX_LOAD_LEVEL = 1.05


class ModelKind(str, Enum):
    """The five supported regression families."""

    LOGARITHMIC = "logarithmic"
    POWER_LAW = "power_law"
    SIGMOID = "sigmoid"
    RATE_THEORY = "rate_theory"
    POWELL_EYRING = "powell_eyring"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class LogarithmicParams:
    """y = a * ln(t) + b with a < 0 (load level decreases with time)."""

    a: float
    b: float

    kind: ClassVar[ModelKind] = ModelKind.LOGARITHMIC

    def __post_init__(self):
        if not self.a < 0:
            raise ModelDomainError(f"logarithmic slope a must be < 0, got {self.a}")


@dataclass(frozen=True)
class PowerLawParams:
    """y = b * t**n with b > 0 and n < 0."""

    b: float
    n: float

    kind: ClassVar[ModelKind] = ModelKind.POWER_LAW

    def __post_init__(self):
        if not self.b > 0:
            raise ModelDomainError(f"power-law scale b must be > 0, got {self.b}")
        if not self.n < 0:
            raise ModelDomainError(f"power-law exponent n must be < 0, got {self.n}")


@dataclass(frozen=True)
class SigmoidParams:
    """y = k_inf + (k_0 - k_inf) * (1 + b*t)**-c.

    kappa_inf may be negative (a free-asymptote fit can demand it); such
    parameter sets are accepted but reported as non-physical by
    :meth:`nonphysical_warnings`.
    """

    kappa_inf: float
    b: float
    c: float
    kappa_0: float = 1.0

    kind: ClassVar[ModelKind] = ModelKind.SIGMOID

    def __post_init__(self):
        if not self.b > 0:
            raise ModelDomainError(f"sigmoid rate b must be > 0, got {self.b}")
        if not self.c > 0:
            raise ModelDomainError(f"sigmoid exponent c must be > 0, got {self.c}")
        if not self.kappa_inf < self.kappa_0:
            raise ModelDomainError(
                f"sigmoid requires kappa_inf < kappa_0, got {self.kappa_inf} >= {self.kappa_0}"
            )
        if not self.kappa_0 <= MAX_LOAD_LEVEL:
            raise ModelDomainError(
                f"sigmoid kappa_0 must be <= {MAX_LOAD_LEVEL}, got {self.kappa_0}"
            )

    def nonphysical_warnings(self) -> tuple[str, ...]:
        if self.kappa_inf < 0:
            return (
                f"sigmoid kappa_inf = {self.kappa_inf:.6g} is negative: non-physical "
                "(implies failure at zero load in finite time); extrapolations below "
                "the data range are unreliable",
            )
        return ()


@dataclass(frozen=True)
class RateTheoryParams:
    """y = k_inf + asinh((b*t)**n / c) with b, c > 0, n < 0, k_inf in [0, 1)."""

    kappa_inf: float
    b: float
    c: float
    n: float

    kind: ClassVar[ModelKind] = ModelKind.RATE_THEORY

    def __post_init__(self):
        if not self.b > 0:
            raise ModelDomainError(f"rate-theory b must be > 0, got {self.b}")
        if not self.c > 0:
            raise ModelDomainError(f"rate-theory c must be > 0, got {self.c}")
        if not self.n < 0:
            raise ModelDomainError(f"rate-theory exponent n must be < 0, got {self.n}")
        if not 0 <= self.kappa_inf < 1:
            raise ModelDomainError(
                f"rate-theory kappa_inf must be in [0, 1), got {self.kappa_inf}"
            )

    def nonphysical_warnings(self) -> tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class PowellEyringParams:
    """y = k_inf + (k_0 - k_inf) * asinh(b*t)/(b*t) with 0 <= k_inf < k_0."""

    kappa_inf: float
    b: float
    kappa_0: float = 1.0

    kind: ClassVar[ModelKind] = ModelKind.POWELL_EYRING

    def __post_init__(self):
        if not self.b > 0:
            raise ModelDomainError(f"Powell-Eyring b must be > 0, got {self.b}")
        if not 0 <= self.kappa_inf < self.kappa_0:
            raise ModelDomainError(
                f"Powell-Eyring requires 0 <= kappa_inf < kappa_0, got "
                f"kappa_inf={self.kappa_inf}, kappa_0={self.kappa_0}"
            )
        if not self.kappa_0 <= MAX_LOAD_LEVEL:
            raise ModelDomainError(
                f"Powell-Eyring kappa_0 must be <= {MAX_LOAD_LEVEL}, got {self.kappa_0}"
            )

    def nonphysical_warnings(self) -> tuple[str, ...]:
        return ()


ModelParams = Union[
    LogarithmicParams,
    PowerLawParams,
    SigmoidParams,
    RateTheoryParams,
    PowellEyringParams,
]

_PARAMS_CLASSES = {
    ModelKind.LOGARITHMIC: LogarithmicParams,
    ModelKind.POWER_LAW: PowerLawParams,
    ModelKind.SIGMOID: SigmoidParams,
    ModelKind.RATE_THEORY: RateTheoryParams,
    ModelKind.POWELL_EYRING: PowellEyringParams,
}

# Canonical parameter ordering per kind; fixes the row/column order of
# covariance matrices and report tables.
PARAM_ORDER: dict[ModelKind, tuple[str, ...]] = {
    ModelKind.LOGARITHMIC: ("a", "b"),
    ModelKind.POWER_LAW: ("b", "n"),
    ModelKind.SIGMOID: ("kappa_inf", "kappa_0", "b", "c"),
    ModelKind.RATE_THEORY: ("kappa_inf", "b", "c", "n"),
    ModelKind.POWELL_EYRING: ("kappa_inf", "kappa_0", "b"),
}

# Kinds that diverge (y -> +inf) as t -> 0.
_DIVERGES_AT_ZERO = frozenset(
    {ModelKind.LOGARITHMIC, ModelKind.POWER_LAW, ModelKind.RATE_THEORY}
)


def params_class(kind: ModelKind) -> type:
    """Return the parameter dataclass for a model kind."""
    return _PARAMS_CLASSES[ModelKind(kind)]


def make_params(kind: ModelKind, values: dict) -> ModelParams:
    """Build a validated parameter set from a name -> value mapping."""
    cls = params_class(kind)
    valid = {f.name for f in fields(cls)}
    unknown = set(values) - valid
    if unknown:
        raise ModelDomainError(
            f"unknown parameter(s) {sorted(unknown)} for model '{ModelKind(kind)}'"
        )
    missing = {
        f.name for f in fields(cls) if f.default is MISSING and f.name not in values
    }
    if missing:
        raise ModelDomainError(
            f"missing parameter(s) {sorted(missing)} for model '{ModelKind(kind)}'"
        )
    return cls(**values)


def param_values(params: ModelParams) -> dict[str, float]:
    """Parameters as a name -> value dict in canonical order."""
    return {name: getattr(params, name) for name in PARAM_ORDER[params.kind]}


def _as_array(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _eval_values(kind: ModelKind, vals: dict, t: np.ndarray) -> np.ndarray:
    """Evaluate a model from a raw name -> value mapping on t > 0.

    No invariant checking: used by the fitter while parameters move.
    """
    if kind is ModelKind.LOGARITHMIC:
        return vals["a"] * np.log(t) + vals["b"]
    if kind is ModelKind.POWER_LAW:
        return vals["b"] * np.power(t, vals["n"])
    if kind is ModelKind.SIGMOID:
        # (1 + b t)^-c via exp/log1p keeps precision for small and large b*t.
        decay = np.exp(-vals["c"] * np.log1p(vals["b"] * t))
        return vals["kappa_inf"] + (vals["kappa_0"] - vals["kappa_inf"]) * decay
    if kind is ModelKind.RATE_THEORY:
        x = np.exp(vals["n"] * np.log(vals["b"] * t)) / vals["c"]
        return vals["kappa_inf"] + np.arcsinh(x)
    if kind is ModelKind.POWELL_EYRING:
        x = vals["b"] * t
        ratio = np.ones_like(x)
        nz = x != 0
        np.divide(np.arcsinh(x, where=nz, out=np.zeros_like(x)), x, out=ratio, where=nz)
        return vals["kappa_inf"] + (vals["kappa_0"] - vals["kappa_inf"]) * ratio
    raise ModelDomainError(f"unknown model kind {kind!r}")


def _eval_raw(params: ModelParams, t: np.ndarray) -> np.ndarray:
    """Evaluate the model on t > 0 (t = 0 handled by eval_model)."""
    return _eval_values(params.kind, param_values(params), t)


def eval_model(params: ModelParams, t_f):
    """Evaluate the load level y(t_f) for one of the five model families.

    Parameters
    ----------
    params : ModelParams
        A validated parameter set; its type selects the model.
    t_f : float or array_like
        Failure time(s) in hours, >= 0. t_f = 0 is only admitted for the
        sigmoid and Powell-Eyring forms (finite limit kappa_0); the other
        three diverge there and raise ModelDomainError.

    Returns
    -------
    float or numpy.ndarray
        Load level(s) as fractions of the short-term capacity.
    """
    arr, scalar = _as_array(t_f)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ModelDomainError("failure time must be finite and >= 0")
    has_zero = bool(np.any(arr == 0))
    if has_zero and params.kind in _DIVERGES_AT_ZERO:
        raise ModelDomainError(
            f"model '{params.kind}' diverges at t_f = 0 (no finite short-time limit)"
        )
    if has_zero:
        out = np.empty_like(arr)
        zero = arr == 0
        out[zero] = params.kappa_0
        out[~zero] = _eval_raw(params, arr[~zero])
    else:
        out = _eval_raw(params, arr)
    if not np.all(np.isfinite(out)):
        raise ModelDomainError("model evaluation produced a non-finite value")
    return float(out[0]) if scalar else out


def asymptote(params: ModelParams, end: str) -> float:
    """Limiting load level of the model at one end of the time axis.

    Parameters
    ----------
    params : ModelParams
    end : {"short_time", "long_time"}

    Returns
    -------
    float
        The finite limit where one exists; ``math.inf`` / ``-math.inf``
        mark divergence (e.g. the logarithmic model is unbounded in both
        directions, the power law blows up as t -> 0).
    """
    kind = params.kind
    if end == "long_time":
        if kind is ModelKind.LOGARITHMIC:
            return -math.inf
        if kind is ModelKind.POWER_LAW:
            return 0.0
        return params.kappa_inf
    if end == "short_time":
        if kind in _DIVERGES_AT_ZERO:
            return math.inf
        return params.kappa_0
    raise ModelDomainError(f"end must be 'short_time' or 'long_time', got {end!r}")


def _attainable_range(params: ModelParams) -> tuple[float, float]:
    """Open interval of load levels the model can reach for t in (0, inf)."""
    lo = asymptote(params, "long_time")
    hi = asymptote(params, "short_time")
    return lo, hi


def inverse_time(params: ModelParams, y: float) -> float:
    """Failure time t_f at which the model passes through load level y.

    Analytic inversions for the logarithmic, power-law, sigmoid and
    rate-theory forms; bracketed root finding (relative tolerance 1e-12)
    for Powell-Eyring, whose transcendental shape has no closed inverse.

    Raises
    ------
    ModelDomainError
        If y lies outside the open interval between the long-time
        asymptote and the short-time limit.
    """
    y = float(y)
    if not math.isfinite(y):
        raise ModelDomainError("target load level must be finite")
    lo, hi = _attainable_range(params)
    if not (lo < y < hi):
        raise ModelDomainError(
            f"load level {y} outside the attainable range ({lo}, {hi}) "
            f"of model '{params.kind}'"
        )
    kind = params.kind
    if kind is ModelKind.LOGARITHMIC:
        return math.exp((y - params.b) / params.a)
    if kind is ModelKind.POWER_LAW:
        return math.exp(math.log(y / params.b) / params.n)
    if kind is ModelKind.SIGMOID:
        # t = ((r)^(1/c) - 1)/b with r = (k0-kinf)/(y-kinf); expm1/log1p keep
        # the subtraction accurate when y is close to either asymptote.
        log_ratio = math.log1p((params.kappa_0 - y) / (y - params.kappa_inf))
        return math.expm1(log_ratio / params.c) / params.b
    if kind is ModelKind.RATE_THEORY:
        x = params.c * math.sinh(y - params.kappa_inf)
        return math.exp(math.log(x) / params.n) / params.b
    if kind is ModelKind.POWELL_EYRING:
        return _invert_powell_eyring(params, y)
    raise ModelDomainError(f"unknown model kind {kind!r}")


def _asinh_over_x(x: float) -> float:
    if x < 1e-4:
        # series: 1 - x^2/6 + 3 x^4/40, exact to < 1e-17 here
        return 1.0 - x * x / 6.0 + 3.0 * x**4 / 40.0
    return math.asinh(x) / x


def _invert_powell_eyring(params: PowellEyringParams, y: float) -> float:
    """Solve asinh(x)/x = g for x = b*t by bracketed bisection (brentq)."""
    g = (y - params.kappa_inf) / (params.kappa_0 - params.kappa_inf)
    # asinh(x)/x decreases monotonically from 1 (x=0) to 0 (x=inf).
    # Initial guess from the small-x series, then expand to a sign change.
    x0 = math.sqrt(6.0 * max(1.0 - g, 1e-300))
    lo, hi = x0 / 8.0, x0 * 8.0
    for _ in range(300):
        if _asinh_over_x(lo) > g:
            break
        lo /= 8.0
    else:
        raise ModelDomainError("Powell-Eyring inversion: no lower bracket found")
    for _ in range(300):
        if _asinh_over_x(hi) < g:
            break
        hi *= 8.0
    else:
        raise ModelDomainError("Powell-Eyring inversion: no upper bracket found")
    x = brentq(lambda v: _asinh_over_x(v) - g, lo, hi, xtol=1e-300, rtol=1e-12, maxiter=200)
    return x / params.b
