"""Least-squares estimation of time-to-failure models.

The logarithmic and power-law families are linear in their natural
regression domains (load level vs ln t, and ln load level vs ln t) and are
solved in closed form. The sigmoid, rate-theory and Powell-Eyring families
are fitted by a damped Gauss-Newton iteration run in a transformed
parameter space (log transforms keep b, c positive; a logistic transform
bounds asymptote levels), started from a small deterministic grid of
initial guesses to avoid the flat-valley local minima these curves are
known for when the data cluster around the inflection point.

Confidence bands use the delta method around the converged parameters with
a Student-t quantile; safe load levels for a required service life come
from straight model evaluation at that horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit
from scipy.stats import t as student_t

from .dataset import TtfDataset
from .errors import BandError, FitError, InsufficientDataError, ModelDomainError
from .models import (
    PARAM_ORDER,
    MAX_LOAD_LEVEL,
    ModelKind,
    ModelParams,
    _eval_values,
    asymptote,
    eval_model,
    make_params,
    param_values,
)

__all__ = [
    "FitConfig",
    "FitResult",
    "ComparisonRow",
    "ComparisonReport",
    "fit",
    "confidence_band",
    "safe_load",
    "compare_models",
    "default_config",
    "FIFTY_YEARS_HOURS",
]

# 50-year service life at 8760 h per 365-day year.
FIFTY_YEARS_HOURS = 438_000.0

LINEAR_DOMAIN = "linear_y_log_t"
LOG_DOMAIN = "log_y_log_t"

_DEFAULT_DOMAIN = {
    ModelKind.LOGARITHMIC: LINEAR_DOMAIN,
    ModelKind.POWER_LAW: LOG_DOMAIN,
    ModelKind.SIGMOID: LINEAR_DOMAIN,
    ModelKind.RATE_THEORY: LINEAR_DOMAIN,
    ModelKind.POWELL_EYRING: LINEAR_DOMAIN,
}

_LINEAR_KINDS = frozenset({ModelKind.LOGARITHMIC, ModelKind.POWER_LAW})


@dataclass(frozen=True)
class FitConfig:
    """Controls one model fit.

    fixed pins named parameters at exact values (they are returned
    bit-identical); residual_domain defaults per kind (log-log for the
    power law, load level otherwise).
    """

    kind: ModelKind
    fixed: dict = field(default_factory=dict)
    residual_domain: str | None = None
    max_iterations: int = 200
    tolerance: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(self, "fixed", dict(self.fixed))
        if self.tolerance <= 0:
            raise FitError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise FitError("max_iterations must be >= 1")
        if self.residual_domain not in (None, LINEAR_DOMAIN, LOG_DOMAIN):
            raise FitError(f"unknown residual domain {self.residual_domain!r}")
        order = PARAM_ORDER[self.kind]
        for name in self.fixed:
            if name not in order:
                raise FitError(f"model '{self.kind}' has no parameter {name!r}")

    @property
    def domain(self) -> str:
        return self.residual_domain or _DEFAULT_DOMAIN[self.kind]

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(n for n in PARAM_ORDER[self.kind] if n not in self.fixed)


def default_config(kind: ModelKind) -> FitConfig:
    """The per-kind configuration used by reports and comparisons.

    Sigmoid and Powell-Eyring fits pin the instantaneous level kappa_0 at
    1.0 (a 100% load level fails immediately by definition); the asymptote
    kappa_inf stays free.
    """
    kind = ModelKind(kind)
    if kind in (ModelKind.SIGMOID, ModelKind.POWELL_EYRING):
        return FitConfig(kind=kind, fixed={"kappa_0": 1.0})
    return FitConfig(kind=kind)


@dataclass(frozen=True)
class FitResult:
    """Estimated parameters plus residual statistics and diagnostics.

    sse, rmse and r_squared are measured in the fit's residual domain;
    covariance is over the free parameters in free_names order (None when
    the normal matrix is singular or there are no degrees of freedom).
    """

    kind: ModelKind
    params: ModelParams
    fixed: dict
    free_names: tuple[str, ...]
    residual_domain: str
    sse: float
    rmse: float
    r_squared: float
    covariance: np.ndarray | None
    n_points: int
    converged: bool
    iterations: int
    warnings: tuple[str, ...] = ()

    @property
    def n_free(self) -> int:
        return len(self.free_names)

    @property
    def dof(self) -> int:
        return self.n_points - self.n_free


# --------------------------------------------------------------------------
# parameter transforms: optimize in an unconstrained z-space


def _logit(p: float) -> float:
    p = min(max(p, 1e-12), 1 - 1e-12)
    return math.log(p / (1 - p))


def _safe_log(x: float) -> float:
    return math.log(max(x, 1e-300))


def _safe_exp(z: float) -> float:
    # overflow-safe: a wild trial step then yields an infinite SSE and is
    # rejected instead of raising
    return math.exp(min(z, 700.0))


# Per kind: evaluation order (dependencies first), forward map z -> value,
# inverse map value -> z. vals carries fixed and already-computed entries.
_TRANSFORMS = {
    ModelKind.LOGARITHMIC: {
        "order": ("a", "b"),
        "a": (lambda z, vals: -_safe_exp(z), lambda v, vals: _safe_log(-v)),
        "b": (lambda z, vals: z, lambda v, vals: v),
    },
    ModelKind.POWER_LAW: {
        "order": ("b", "n"),
        "b": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
        "n": (lambda z, vals: -_safe_exp(z), lambda v, vals: _safe_log(-v)),
    },
    ModelKind.SIGMOID: {
        "order": ("kappa_0", "kappa_inf", "b", "c"),
        "kappa_0": (
            lambda z, vals: MAX_LOAD_LEVEL * expit(z),
            lambda v, vals: _logit(v / MAX_LOAD_LEVEL),
        ),
        # kappa_0 - exp(z): keeps kappa_inf < kappa_0 but lets it go negative,
        # which free-asymptote fits on inflection-dominated data require.
        "kappa_inf": (
            lambda z, vals: vals["kappa_0"] - _safe_exp(z),
            lambda v, vals: _safe_log(vals["kappa_0"] - v),
        ),
        "b": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
        "c": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
    },
    ModelKind.RATE_THEORY: {
        "order": ("kappa_inf", "b", "c", "n"),
        "kappa_inf": (
            lambda z, vals: float(expit(z)),
            lambda v, vals: _logit(v),
        ),
        "b": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
        "c": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
        "n": (lambda z, vals: -_safe_exp(z), lambda v, vals: _safe_log(-v)),
    },
    ModelKind.POWELL_EYRING: {
        "order": ("kappa_0", "kappa_inf", "b"),
        "kappa_0": (
            lambda z, vals: MAX_LOAD_LEVEL * expit(z),
            lambda v, vals: _logit(v / MAX_LOAD_LEVEL),
        ),
        "kappa_inf": (
            lambda z, vals: vals["kappa_0"] * expit(z),
            lambda v, vals: _logit(v / vals["kappa_0"]),
        ),
        "b": (lambda z, vals: _safe_exp(z), lambda v, vals: _safe_log(v)),
    },
}


def _z_to_values(kind, fixed, free_names, z) -> dict:
    spec = _TRANSFORMS[kind]
    idx = {name: i for i, name in enumerate(free_names)}
    vals = dict(fixed)
    for name in spec["order"]:
        if name in idx:
            fwd, _ = spec[name]
            vals[name] = float(fwd(float(z[idx[name]]), vals))
    return vals


def _values_to_z(kind, fixed, free_names, values) -> np.ndarray:
    spec = _TRANSFORMS[kind]
    vals = dict(fixed)
    z = np.zeros(len(free_names))
    idx = {name: i for i, name in enumerate(free_names)}
    for name in spec["order"]:
        if name in idx:
            _, inv = spec[name]
            z[idx[name]] = inv(float(values[name]), vals)
            fwd, _ = spec[name]
            vals[name] = fwd(z[idx[name]], vals)
        # fixed entries already present in vals
    return z


# --------------------------------------------------------------------------
# residuals and the damped Gauss-Newton loop


def _domain_prediction(kind, vals, t, domain):
    with np.errstate(all="ignore"):
        f = _eval_values(kind, vals, t)
        if domain == LOG_DOMAIN:
            f = np.where(f > 0, np.log(np.maximum(f, 1e-300)), np.nan)
    return f


def _sse_of(residuals) -> float:
    s = float(np.dot(residuals, residuals))
    return s if math.isfinite(s) else math.inf


def _numeric_jacobian(fn, z, n_out):
    p = len(z)
    J = np.empty((n_out, p))
    for j in range(p):
        h = 1e-6 * max(1.0, abs(z[j]))
        zp = z.copy()
        zm = z.copy()
        zp[j] += h
        zm[j] -= h
        J[:, j] = (fn(zp) - fn(zm)) / (2 * h)
    return J


def _levenberg(residual_fn, z0, max_iterations, tolerance):
    """Damped Gauss-Newton: damping x10 on a failed step, /10 on success."""
    z = np.asarray(z0, dtype=float)
    r = residual_fn(z)
    sse = _sse_of(r)
    if not math.isfinite(sse):
        return None
    lam = 1e-3
    converged = sse == 0.0
    iterations = 0
    n = len(r)
    while iterations < max_iterations and not converged:
        iterations += 1
        J = _numeric_jacobian(residual_fn, z, n)
        if not np.all(np.isfinite(J)):
            break
        A = J.T @ J
        g = J.T @ r
        if float(np.max(np.abs(g), initial=0.0)) < 1e-14 * max(1.0, sse):
            converged = True
            break
        accepted = False
        eye = np.eye(len(z))
        while lam < 1e15:
            try:
                delta = np.linalg.solve(A + lam * eye, g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            z_new = z - delta
            r_new = residual_fn(z_new)
            sse_new = _sse_of(r_new)
            if sse_new < sse:
                rel = (sse - sse_new) / max(sse, 1e-300)
                z, r, sse = z_new, r_new, sse_new
                lam = max(lam / 10, 1e-14)
                accepted = True
                if rel < tolerance:
                    converged = True
                break
            lam *= 10
        if not accepted:
            # no improving step exists at any damping: the SSE change
            # achievable is below tolerance, i.e. a (local) minimum
            converged = True
            break
    return z, sse, converged, iterations


# --------------------------------------------------------------------------
# initial guesses


def _start_grid(kind, fixed, t, y) -> list[dict]:
    t_gm = float(np.exp(np.mean(np.log(t))))
    # Transition knee at the geometric-mean time plus one start per end of
    # the observed range: the knee location is the least identifiable
    # property of these curves and a single seed routinely lands in the
    # wrong basin.
    b_starts = sorted({1.0 / t_gm, 1.0 / float(np.min(t)), 1.0 / float(np.max(t))})
    min_y = float(np.min(y))
    kappa_starts = [0.0, 0.5 * min_y, 0.9 * min_y]
    c_starts = [0.05, 0.2, 1.0]
    n_starts = [-0.01, -0.05, -0.2]
    starts: list[dict] = []
    if kind is ModelKind.SIGMOID:
        for ki in kappa_starts if "kappa_inf" not in fixed else [None]:
            for c in c_starts if "c" not in fixed else [None]:
                for b in b_starts if "b" not in fixed else [None]:
                    s = {"kappa_0": 1.0}
                    if b is not None:
                        s["b"] = b
                    if ki is not None:
                        s["kappa_inf"] = ki
                    if c is not None:
                        s["c"] = c
                    starts.append(s)
    elif kind is ModelKind.RATE_THEORY:
        for ki in kappa_starts if "kappa_inf" not in fixed else [None]:
            for c in c_starts if "c" not in fixed else [None]:
                for n in n_starts if "n" not in fixed else [None]:
                    for b in b_starts if "b" not in fixed else [None]:
                        s = {}
                        if b is not None:
                            s["b"] = b
                        if ki is not None:
                            s["kappa_inf"] = max(ki, 1e-3)
                        if c is not None:
                            s["c"] = c
                        if n is not None:
                            s["n"] = n
                        starts.append(s)
    elif kind is ModelKind.POWELL_EYRING:
        for ki in kappa_starts if "kappa_inf" not in fixed else [None]:
            for b in b_starts if "b" not in fixed else [None]:
                s = {"kappa_0": 1.0}
                if b is not None:
                    s["b"] = b
                if ki is not None:
                    s["kappa_inf"] = max(ki, 1e-3)
                starts.append(s)
    elif kind is ModelKind.LOGARITHMIC:
        intercept, slope, _ = _ols_line(np.log(t), y, fixed.get("a"), fixed.get("b"))
        starts.append({"a": min(slope, -1e-6), "b": intercept})
    elif kind is ModelKind.POWER_LAW:
        intercept, slope, _ = _ols_line(np.log(t), np.log(y), fixed.get("n"), None)
        starts.append(
            {
                "b": math.exp(intercept) if "b" not in fixed else None,
                "n": min(slope, -1e-6),
            }
        )
    return starts


# --------------------------------------------------------------------------
# closed-form straight-line least squares (slope/intercept, optionally fixed)


def _ols_line(x, yv, fixed_slope=None, fixed_intercept=None):
    """Least squares for yv ~ slope*x + intercept; returns (intercept, slope, sse)."""
    x = np.asarray(x, float)
    yv = np.asarray(yv, float)
    if fixed_slope is not None and fixed_intercept is not None:
        slope, intercept = fixed_slope, fixed_intercept
    elif fixed_slope is not None:
        slope = fixed_slope
        intercept = float(np.mean(yv - slope * x))
    elif fixed_intercept is not None:
        intercept = fixed_intercept
        xx = float(np.dot(x, x))
        if xx == 0:
            raise FitError("degenerate design: all regressors zero")
        slope = float(np.dot(x, yv - intercept) / xx)
    else:
        n = len(x)
        mx = float(np.mean(x))
        my = float(np.mean(yv))
        dx = x - mx
        sxx = float(np.dot(dx, dx))
        if sxx == 0:
            raise FitError("degenerate design: all failure times identical")
        slope = float(np.dot(dx, yv - my) / sxx)
        intercept = my - slope * mx
    resid = yv - (slope * x + intercept)
    return intercept, slope, _sse_of(resid)


def _fit_closed_form(kind, config, t, y):
    """Exact OLS for the two transformed-domain linear families."""
    fixed = config.fixed
    if kind is ModelKind.LOGARITHMIC:
        intercept, slope, sse = _ols_line(
            np.log(t), y, fixed.get("a"), fixed.get("b")
        )
        if slope >= 0:
            raise FitError(
                "logarithmic fit produced a non-negative slope: load levels do "
                "not decrease with time in this dataset"
            )
        values = {"a": slope, "b": intercept}
    else:  # POWER_LAW in the log-log domain
        ln_b_fixed = _safe_log(fixed["b"]) if "b" in fixed else None
        intercept, slope, sse = _ols_line(
            np.log(t), np.log(y), fixed.get("n"), ln_b_fixed
        )
        if slope >= 0:
            raise FitError(
                "power-law fit produced a non-negative exponent: load levels do "
                "not decrease with time in this dataset"
            )
        values = {"b": fixed.get("b", math.exp(intercept)), "n": slope}
    values.update(fixed)  # bit-identical fixed values
    return values, sse


# --------------------------------------------------------------------------


def _validate_fixed(kind, fixed):
    checks = {
        "a": ("< 0", lambda v: v < 0),
        "n": ("< 0", lambda v: v < 0),
        "b": ("> 0", lambda v: v > 0),
        "c": ("> 0", lambda v: v > 0),
    }
    for name, value in fixed.items():
        if name in checks:
            cond, ok = checks[name]
            if not ok(value):
                raise FitError(f"fixed parameter {name}={value} violates {name} {cond}")
    k0 = fixed.get("kappa_0")
    ki = fixed.get("kappa_inf")
    if k0 is not None and not (0 < k0 <= MAX_LOAD_LEVEL):
        raise FitError(f"fixed kappa_0={k0} outside (0, {MAX_LOAD_LEVEL}]")
    if ki is not None:
        if kind is ModelKind.SIGMOID:
            upper = k0 if k0 is not None else MAX_LOAD_LEVEL
            if not ki < upper:
                raise FitError(f"fixed kappa_inf={ki} must be < kappa_0")
        elif kind is ModelKind.RATE_THEORY:
            if not 0 <= ki < 1:
                raise FitError(f"fixed kappa_inf={ki} outside [0, 1)")
        elif kind is ModelKind.POWELL_EYRING:
            upper = k0 if k0 is not None else MAX_LOAD_LEVEL
            if not 0 <= ki < upper:
                raise FitError(f"fixed kappa_inf={ki} outside [0, kappa_0)")


def _covariance(kind, values, free_names, t, domain, sse, n_points):
    """Delta-method covariance from the natural-space model Jacobian."""
    p = len(free_names)
    if p == 0:
        return np.zeros((0, 0)), None
    dof = n_points - p
    if dof <= 0:
        return None, "no degrees of freedom left for a covariance estimate"
    J = np.empty((len(t), p))
    for j, name in enumerate(free_names):
        h = 1e-6 * max(abs(values[name]), 1e-8)
        vp = dict(values)
        vm = dict(values)
        vp[name] = values[name] + h
        vm[name] = values[name] - h
        J[:, j] = (
            _domain_prediction(kind, vp, t, domain)
            - _domain_prediction(kind, vm, t, domain)
        ) / (2 * h)
    if not np.all(np.isfinite(J)):
        return None, "covariance unavailable: model gradient not finite at the fit"
    A = J.T @ J
    try:
        cov = np.linalg.inv(A) * (sse / dof)
    except np.linalg.LinAlgError:
        return None, "covariance unavailable: singular normal matrix"
    if not np.all(np.isfinite(cov)):
        return None, "covariance unavailable: singular normal matrix"
    return (cov + cov.T) / 2, None


def fit(dataset: TtfDataset, config: FitConfig) -> FitResult:
    """Estimate model parameters from a dataset by least squares.

    Censored points are excluded. The logarithmic and power-law families
    are solved in closed form in their linear domains; the others run a
    multi-start damped Gauss-Newton iteration. Input row order does not
    influence the result (points are processed in a canonical order).

    Raises
    ------
    InsufficientDataError
        Fewer usable points than max(2, free parameters) for the linear
        families or max(3, free parameters) otherwise.
    FitError
        Fixed-parameter conflicts, or no start reached a usable optimum.
    """
    kind = config.kind
    _validate_fixed(kind, config.fixed)
    pts = sorted(dataset.uncensored(), key=lambda p: (p.failure_time, p.load_level))
    n_censored = len(dataset) - len(pts)
    free_names = config.free_names
    p = len(free_names)
    minimum = max(2, p) if kind in _LINEAR_KINDS else max(3, p)
    if len(pts) < minimum:
        raise InsufficientDataError(
            f"model '{kind}' needs at least {minimum} uncensored points, "
            f"dataset '{dataset.id}' has {len(pts)}"
        )
    t = np.array([pt.failure_time for pt in pts])
    y = np.array([pt.load_level for pt in pts])
    domain = config.domain
    y_dom = np.log(y) if domain == LOG_DOMAIN else y

    closed_form = (
        (kind is ModelKind.LOGARITHMIC and domain == LINEAR_DOMAIN)
        or (kind is ModelKind.POWER_LAW and domain == LOG_DOMAIN)
    )
    iterations = 0
    converged = True
    if closed_form:
        values, sse = _fit_closed_form(kind, config, t, y)
    else:
        def residual_fn(z, _fixed=config.fixed):
            vals = _z_to_values(kind, _fixed, free_names, z)
            pred = _domain_prediction(kind, vals, t, domain)
            return pred - y_dom

        best = None
        for start in _start_grid(kind, config.fixed, t, y):
            start_free = {n: v for n, v in start.items() if n in free_names and v is not None}
            if set(start_free) != set(free_names):
                continue
            z0 = _values_to_z(kind, config.fixed, free_names, start_free)
            out = _levenberg(residual_fn, z0, config.max_iterations, config.tolerance)
            if out is None:
                continue
            z_fit, sse_fit, conv, iters = out
            if best is None or sse_fit < best[1]:
                best = (z_fit, sse_fit, conv, iters)
        if best is None:
            raise FitError(
                f"all starting points failed for model '{kind}' on dataset '{dataset.id}'"
            )
        z_fit, sse, converged, iterations = best
        values = _z_to_values(kind, config.fixed, free_names, z_fit)
        values.update(config.fixed)  # bit-identical fixed values

    try:
        params = make_params(kind, values)
    except ModelDomainError as exc:
        raise FitError(f"fit left the admissible parameter region: {exc}") from exc

    warnings = list(params.nonphysical_warnings()) if hasattr(params, "nonphysical_warnings") else []
    if kind is ModelKind.SIGMOID and values["kappa_inf"] < -5:
        warnings.append(
            "free-asymptote fit degenerated (kappa_inf far below zero): the data "
            "do not constrain a lower asymptote and the fitted curve is effectively "
            "logarithmic over the observable range"
        )
    if n_censored:
        warnings.append(f"{n_censored} censored point(s) excluded from the fit")
    cov, cov_note = _covariance(kind, values, free_names, t, domain, sse, len(pts))
    if cov_note:
        warnings.append(cov_note)
    if not converged:
        warnings.append(
            f"iteration stopped at max_iterations={config.max_iterations} before "
            f"meeting the SSE tolerance {config.tolerance:g}"
        )

    sst = float(np.dot(y_dom - np.mean(y_dom), y_dom - np.mean(y_dom)))
    if sst > 0:
        r_squared = 1.0 - sse / sst
    else:
        r_squared = 1.0 if sse == 0 else -math.inf
    return FitResult(
        kind=kind,
        params=params,
        fixed=dict(config.fixed),
        free_names=free_names,
        residual_domain=domain,
        sse=sse,
        rmse=math.sqrt(sse / len(pts)),
        r_squared=r_squared,
        covariance=cov,
        n_points=len(pts),
        converged=converged,
        iterations=iterations,
        warnings=tuple(warnings),
    )


def confidence_band(fit_result: FitResult, times, level: float = 0.95):
    """Delta-method confidence band for the fitted mean curve.

    Parameters
    ----------
    fit_result : FitResult
    times : array_like
        Horizons in hours, all > 0.
    level : float
        Two-sided coverage, e.g. 0.95.

    Returns
    -------
    numpy.ndarray of shape (len(times), 2)
        Lower and upper load levels. The band is for the fitted mean
        curve (not a prediction interval for new tests).

    Raises
    ------
    BandError
        No degrees of freedom, or covariance unavailable/singular.
    """
    if not 0 < level < 1:
        raise BandError(f"level must be in (0, 1), got {level}")
    dof = fit_result.dof
    if dof <= 0:
        raise BandError("no degrees of freedom: n_points must exceed free parameters")
    if fit_result.covariance is None:
        raise BandError("covariance unavailable for this fit; band omitted")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times <= 0):
        raise BandError("band horizons must be > 0")
    q = float(student_t.ppf(0.5 + level / 2, dof))
    values = param_values(fit_result.params)
    center = np.array([eval_model(fit_result.params, float(tv)) for tv in times])
    half = np.empty_like(center)
    cov = fit_result.covariance
    for i, tv in enumerate(times):
        g = np.empty(len(fit_result.free_names))
        for j, name in enumerate(fit_result.free_names):
            h = 1e-6 * max(abs(values[name]), 1e-8)
            vp = dict(values)
            vm = dict(values)
            vp[name] = values[name] + h
            vm[name] = values[name] - h
            arr = np.array([tv])
            g[j] = float(
                _eval_values(fit_result.kind, vp, arr)[0]
                - _eval_values(fit_result.kind, vm, arr)[0]
            ) / (2 * h)
        var = float(g @ cov @ g)
        half[i] = q * math.sqrt(max(var, 0.0))
    return np.column_stack([center - half, center + half])


def safe_load(fit_result: FitResult, service_life: float) -> float:
    """Sustained load level the fitted curve allows at a service life (hours)."""
    if service_life <= 0:
        raise FitError(f"service life must be > 0, got {service_life}")
    if not fit_result.converged:
        raise FitError("refusing to extrapolate from a non-converged fit")
    return float(eval_model(fit_result.params, service_life))


@dataclass(frozen=True)
class ComparisonRow:
    """One model's outcome inside a comparison (result or failure)."""

    kind: ModelKind
    result: FitResult | None = None
    error: str | None = None
    safe_load_50y: float | None = None
    asymptote_long_time: float | None = None


@dataclass(frozen=True)
class ComparisonReport:
    dataset_id: str
    rows: tuple[ComparisonRow, ...]

    def ranked(self) -> tuple[ComparisonRow, ...]:
        return self.rows


def compare_models(dataset: TtfDataset, kinds, configs: dict | None = None) -> ComparisonReport:
    """Fit several model families and rank them.

    Rows are ordered by SSE (each in its own residual domain), ties broken
    by fewer free parameters; fits that fail are kept as diagnostic rows
    at the end instead of aborting the comparison.
    """
    kinds = [ModelKind(k) for k in kinds]
    if not kinds:
        raise FitError("no model kinds requested")
    configs = configs or {}
    ok_rows = []
    bad_rows = []
    for kind in kinds:
        config = configs.get(kind, default_config(kind))
        try:
            result = fit(dataset, config)
            row = ComparisonRow(
                kind=kind,
                result=result,
                safe_load_50y=safe_load(result, FIFTY_YEARS_HOURS),
                asymptote_long_time=asymptote(result.params, "long_time"),
            )
            ok_rows.append(row)
        except (FitError, InsufficientDataError, ModelDomainError) as exc:
            bad_rows.append(ComparisonRow(kind=kind, error=str(exc)))
    ok_rows.sort(key=lambda r: (r.result.sse, r.result.n_free))
    return ComparisonReport(dataset_id=dataset.id, rows=tuple(ok_rows + bad_rows))
