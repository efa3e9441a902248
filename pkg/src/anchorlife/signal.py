"""Failure-time extraction from raw records and rate-effect analysis.

Two detectors recover the time to failure from a sustained-load record:

* pressure drop: the earliest sample at which the controlled load falls
  below (1 - hysteresis) * target and never recovers. The hysteresis
  margin separates true failure from the control system's load ripple.
* intersection: the abscissa where straight lines fitted to the secondary
  creep stage (0.3..0.6 of the failure time) and the tertiary stage
  (0.9..1.0 of it) cross in a displacement versus ln(time) plot. The
  windows depend on the unknown failure time, so the point is found by
  fixed-point iteration seeded from a hint or from the record end.

Both report times relative to the instant of full load application.

rate_sensitivity quantifies how the short-term pull-out capacity grows
with loading rate (a power-law exponent from a log-log regression), and
bond_strength evaluates the uniform bond model tau = N / (pi * d * h_ef).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import RatePoint, TimeSeries
from .errors import DataError, DetectionError, InsufficientDataError, ParallelLinesError

__all__ = [
    "DetectionConfig",
    "AnchorGeometry",
    "RateSensitivity",
    "detect_failure_pressure",
    "detect_failure_intersection",
    "rate_sensitivity",
    "bond_strength",
]

# Samples required in each regression window of the intersection method.
MIN_WINDOW_SAMPLES = 10


@dataclass(frozen=True)
class DetectionConfig:
    """Tuning knobs for the two failure-time detectors."""

    method: str = "pressure_drop"  # or "intersection"
    hysteresis: float = 0.02
    secondary_window: tuple[float, float] = (0.3, 0.6)
    tertiary_window: tuple[float, float] = (0.9, 1.0)
    max_iterations: int = 20
    convergence: float = 0.001

    def __post_init__(self):
        if self.method not in ("pressure_drop", "intersection"):
            raise DataError(f"unknown detection method {self.method!r}")
        if not self.hysteresis > 0:
            raise DataError("hysteresis must be > 0")
        for name, (lo, hi) in (
            ("secondary_window", self.secondary_window),
            ("tertiary_window", self.tertiary_window),
        ):
            if not (0 < lo < hi <= 1):
                raise DataError(f"{name} bounds must satisfy 0 < lower < upper <= 1")
        if self.max_iterations < 1:
            raise DataError("max_iterations must be >= 1")
        if not self.convergence > 0:
            raise DataError("convergence must be > 0")


@dataclass(frozen=True)
class AnchorGeometry:
    """Nominal anchor diameter and embedment depth, both in mm."""

    diameter: float
    embedment: float

    def __post_init__(self):
        if not self.diameter > 0:
            raise DataError("diameter must be > 0")
        if not self.embedment > 0:
            raise DataError("embedment must be > 0")


def detect_failure_pressure(
    series: TimeSeries, config: DetectionConfig = DetectionConfig()
) -> float | None:
    """Failure time from the first non-recovering drop of the load channel.

    Returns
    -------
    float or None
        Seconds from full load application to failure; None when the load
        never leaves the hysteresis band (the test did not fail and the
        elapsed hold time is a censored lower bound).

    Raises
    ------
    DataError
        Missing load channel or non-positive target.
    """
    if series.loads is None:
        raise DataError("pressure-drop detection needs a load or pressure channel")
    if not series.load_target > 0:
        raise DataError("pressure-drop detection needs a positive load target")
    threshold = (1.0 - config.hysteresis) * series.load_target
    times = series.times
    loads = series.loads
    # Only the sustained phase counts; the loading ramp is below target by
    # construction.
    start = 0
    while start < len(times) and times[start] < series.full_load_time:
        start += 1
    # Last index at or above the threshold decides recovery: everything
    # after it is permanently below.
    last_above = -1
    for i in range(start, len(times)):
        if loads[i] >= threshold:
            last_above = i
    first_fail = last_above + 1 if last_above >= 0 else start
    if first_fail >= len(times):
        return None  # held until the end of the record: censored
    return times[first_fail] - series.full_load_time


def _window_line(ln_t, disp, lo, hi):
    """OLS line of displacement on ln(time) within [lo, hi] (ln bounds)."""
    mask = (ln_t >= lo) & (ln_t <= hi)
    n = int(np.count_nonzero(mask))
    if n < MIN_WINDOW_SAMPLES:
        raise InsufficientDataError(
            f"window [{math.exp(lo):.4g}, {math.exp(hi):.4g}] s holds {n} samples, "
            f"need {MIN_WINDOW_SAMPLES}"
        )
    x = ln_t[mask]
    d = disp[mask]
    mx = float(np.mean(x))
    md = float(np.mean(d))
    dx = x - mx
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise InsufficientDataError("window has no time spread")
    slope = float(np.dot(dx, d - md) / sxx)
    intercept = md - slope * mx
    return slope, intercept


def detect_failure_intersection(
    series: TimeSeries,
    config: DetectionConfig = DetectionConfig(method="intersection"),
    t_f_hint: float | None = None,
) -> float:
    """Failure time as the crossing of secondary- and tertiary-stage lines.

    The two regression windows are fractions of the failure time itself,
    so the crossing is iterated to a fixed point: start from ``t_f_hint``
    (seconds, relative to full load application) or the end of the record,
    fit both lines, move the estimate to the intersection, repeat.

    Two situations end the iteration early with the last well-defined
    crossing: the estimate stabilizing within ``config.convergence``, or
    the refined windows collapsing onto the same creep stage (parallel
    lines after at least one successful crossing). A hint that yields
    degenerate geometry immediately is discarded in favor of the record
    end before giving up.

    Raises
    ------
    ParallelLinesError
        The two windows never produced distinguishable slopes.
    DetectionError
        No convergence within ``config.max_iterations``.
    InsufficientDataError
        Fewer than 10 samples in a regression window.
    """
    if series.displacements is None:
        raise DataError("intersection detection needs a displacement channel")
    rel = np.asarray(series.times, dtype=float) - series.full_load_time
    disp = np.asarray(series.displacements, dtype=float)
    keep = rel > 0
    if int(np.count_nonzero(keep)) < 2 * MIN_WINDOW_SAMPLES:
        raise InsufficientDataError("too few samples after full load application")
    rel = rel[keep]
    disp = disp[keep]
    ln_t = np.log(rel)
    t_end = float(rel[-1])

    (s_lo, s_hi) = config.secondary_window
    (t_lo, t_hi) = config.tertiary_window

    def crossing(t_est):
        a1, b1 = _window_line(ln_t, disp, math.log(s_lo * t_est), math.log(s_hi * t_est))
        a2, b2 = _window_line(ln_t, disp, math.log(t_lo * t_est), math.log(t_hi * t_est))
        scale = max(abs(a1), abs(a2), 1e-12)
        if abs(a2 - a1) <= 1e-9 * scale:
            raise ParallelLinesError(
                "secondary and tertiary windows have indistinguishable slopes"
            )
        x = (b1 - b2) / (a2 - a1)
        t_new = math.exp(x)
        if not (rel[0] <= t_new <= 10 * t_end):
            raise DetectionError(
                f"intersection at {t_new:.4g} s falls outside the record"
            )
        return t_new

    t_est = float(t_f_hint) if t_f_hint is not None else t_end
    if t_est <= 0:
        raise DataError("t_f_hint must be > 0")
    last_good = None
    for _ in range(config.max_iterations):
        try:
            t_new = crossing(t_est)
        except (ParallelLinesError, DetectionError, InsufficientDataError):
            if last_good is not None:
                return last_good
            if t_f_hint is not None and t_est != t_end:
                # bad seed; retry from the record end before failing
                t_est = t_end
                t_f_hint = None
                continue
            raise
        if abs(t_new - t_est) / t_est < config.convergence:
            return t_new
        last_good = t_new
        t_est = t_new
    raise DetectionError(
        f"intersection estimate did not stabilize in {config.max_iterations} iterations"
    )


@dataclass(frozen=True)
class RateSensitivity:
    """Loading-rate sensitivity of the pull-out capacity.

    exponent is the slope of ln(peak) on ln(rate); percent_per_decade the
    corresponding capacity ratio across one decade of rate, minus one.
    Note that some published assessments quote 100 * exponent as a
    per-decade percentage, which understates the decade ratio.
    """

    exponent: float
    percent_per_decade: float


def rate_sensitivity(points) -> RateSensitivity:
    """Power-law rate sensitivity from (rate, peak) observations.

    Parameters
    ----------
    points : iterable of RatePoint

    Raises
    ------
    InsufficientDataError
        Fewer than two points or no spread in the rates.
    """
    pts = list(points)
    if len(pts) < 2:
        raise InsufficientDataError("rate sensitivity needs at least 2 points")
    rates = np.array([p.rate for p in pts], dtype=float)
    peaks = np.array([p.peak for p in pts], dtype=float)
    x = np.log(rates)
    yv = np.log(peaks)
    mx = float(np.mean(x))
    dx = x - mx
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise InsufficientDataError("rate sensitivity needs at least 2 distinct rates")
    exponent = float(np.dot(dx, yv - np.mean(yv)) / sxx)
    percent_per_decade = math.exp(exponent * math.log(10.0)) - 1.0
    return RateSensitivity(exponent=exponent, percent_per_decade=percent_per_decade)


def bond_strength(capacity: float, geometry: AnchorGeometry) -> float:
    """Uniform-bond-model strength tau = N / (pi * d * h_ef) in MPa.

    capacity is in kN, geometry in mm. The uniform model spreads the load
    over the nominal lateral surface; values published for specific
    products sometimes use effective dimensions and differ accordingly.
    """
    if not capacity > 0:
        raise DataError(f"capacity must be > 0, got {capacity}")
    newtons = capacity * 1e3
    return newtons / (math.pi * geometry.diameter * geometry.embedment)
