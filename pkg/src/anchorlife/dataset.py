"""Test-data model, CSV schemas, and built-in literature corpora.

Three on-disk CSV layouts are understood (comment lines start with '#',
decimal point is '.'):

    failure data   load_level,failure_time_h[,censored]
                   (header 'load_level_pct' accepts percent values instead)
    raw record     time_s,displacement_mm,load_kN
                   (third column may be named 'pressure_bar' instead)
    rate study     rate_mm_s,peak_kN

Load levels are stored as fractions of the short-term capacity, failure
times in hours. Raw records keep the native sampling unit (seconds);
conversion to hours happens when a detected failure time enters a dataset.

Optional metadata travels as '# key: value' comments in failure-data files
(id, short_term_capacity_kn, capacity_cov) so that save/load round-trips
reproduce every field. Numbers are written in shortest round-trip form,
which preserves all 17 significant digits of a double.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import DataError
from .models import MAX_LOAD_LEVEL

__all__ = [
    "FailurePoint",
    "TtfDataset",
    "TimeSeries",
    "RatePoint",
    "load_dataset",
    "save_dataset",
    "load_series",
    "load_rates",
    "builtin_dataset",
    "BUILTIN_DATASET_NAMES",
]

HOURS_PER_YEAR = 8760.0
SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class FailurePoint:
    """One sustained-load test: relative load level and observed time.

    For censored points (test stopped or still running) failure_time is
    the elapsed hold time, a lower bound on the true time to failure.
    """

    load_level: float
    failure_time: float  # hours
    censored: bool = False

    def __post_init__(self):
        if not (0 < self.load_level <= MAX_LOAD_LEVEL):
            raise DataError(
                f"load level must be in (0, {MAX_LOAD_LEVEL}], got {self.load_level}"
            )
        if not (self.failure_time > 0 and math.isfinite(self.failure_time)):
            raise DataError(f"failure time must be > 0, got {self.failure_time}")


@dataclass(frozen=True)
class TtfDataset:
    """An ordered, immutable collection of sustained-load test outcomes."""

    id: str
    points: tuple[FailurePoint, ...]
    short_term_capacity: float = 0.0  # kN; 0 = unknown
    capacity_cov: float = 0.0  # coefficient of variation, fraction

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.short_term_capacity < 0:
            raise DataError("short-term capacity must be >= 0")
        if self.capacity_cov < 0:
            raise DataError("capacity CoV must be >= 0")

    @property
    def warnings(self) -> tuple[str, ...]:
        notes = []
        for i, p in enumerate(self.points):
            if p.load_level > 1.0:
                notes.append(
                    f"point {i + 1}: load level {p.load_level:g} exceeds the "
                    "short-term capacity (accepted, flagged)"
                )
        n_cens = sum(p.censored for p in self.points)
        if n_cens:
            notes.append(f"{n_cens} censored point(s) present; excluded from fitting")
        return tuple(notes)

    def uncensored(self) -> tuple[FailurePoint, ...]:
        return tuple(p for p in self.points if not p.censored)

    def censored_points(self) -> tuple[FailurePoint, ...]:
        return tuple(p for p in self.points if p.censored)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class TimeSeries:
    """Raw sustained-load record: time, displacement and/or load channel.

    times are seconds from the start of the record; full_load_time is the
    instant the applied load first reached the target (the origin for all
    reported failure times).
    """

    times: tuple[float, ...]
    displacements: tuple[float, ...] | None
    loads: tuple[float, ...] | None
    load_channel: str | None  # "load_kN" or "pressure_bar"
    load_target: float
    full_load_time: float

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if self.displacements is not None:
            object.__setattr__(
                self, "displacements", tuple(float(d) for d in self.displacements)
            )
        if self.loads is not None:
            object.__setattr__(self, "loads", tuple(float(v) for v in self.loads))
        if not self.times:
            raise DataError("time series is empty")
        if self.displacements is None and self.loads is None:
            raise DataError("time series needs a displacement or a load channel")
        for name, chan in (("displacement", self.displacements), ("load", self.loads)):
            if chan is not None and len(chan) != len(self.times):
                raise DataError(f"{name} channel length does not match time axis")
        for t0, t1 in zip(self.times, self.times[1:]):
            if not t1 > t0:
                raise DataError("time axis must be strictly increasing")
        if self.times[0] < 0:
            raise DataError("times must be >= 0")
        if self.full_load_time < self.times[0]:
            raise DataError("full-load time lies before the record starts")
        if self.loads is not None and self.load_channel not in ("load_kN", "pressure_bar"):
            raise DataError(
                f"load channel must be 'load_kN' or 'pressure_bar', got {self.load_channel!r}"
            )


@dataclass(frozen=True)
class RatePoint:
    """Loading rate (mm/s) paired with the mean peak capacity (kN)."""

    rate: float
    peak: float

    def __post_init__(self):
        if not self.rate > 0:
            raise DataError(f"loading rate must be > 0, got {self.rate}")
        if not self.peak > 0:
            raise DataError(f"peak capacity must be > 0, got {self.peak}")


# --------------------------------------------------------------------------
# Built-in corpora: load level / failure time tables for three adhesive
# products reported in the sustained-load literature. Levels as fractions,
# times in hours, exactly as printed in the source tables.

_BUILTIN_TABLES: dict[str, tuple[tuple[float, float], ...]] = {
    "product_a": (
        (0.88, 0.12),
        (0.76, 0.17),
        (0.68, 0.14),
        (0.57, 36.0),
        (0.57, 52.0),
        (0.57, 55.0),
        (0.57, 59.0),
        (0.46, 16174.0),
    ),
    "product_b": (
        (0.81, 0.11),
        (0.73, 0.67),
        (0.72, 0.32),
        (0.70, 3.29),
        (0.70, 3.6),
        (0.67, 35.0),
        (0.56, 24.0),
        (0.53, 862.0),
    ),
    "product_c": (
        (0.80, 0.32),
        (0.79, 0.15),
        (0.72, 11.0),
        (0.72, 7.76),
        (0.72, 37.0),
        (0.70, 0.25),
        (0.68, 0.29),
        (0.52, 1347.0),
        (0.50, 1576.0),
    ),
}

BUILTIN_DATASET_NAMES = tuple(sorted(_BUILTIN_TABLES))


def builtin_dataset(name: str) -> TtfDataset:
    """Return one of the bundled literature datasets.

    Parameters
    ----------
    name : {"product_a", "product_b", "product_c"}

    Returns
    -------
    TtfDataset
        The table content verbatim: levels as fractions, times in hours.
    """
    try:
        table = _BUILTIN_TABLES[name]
    except KeyError:
        raise DataError(
            f"unknown built-in dataset {name!r}; available: {', '.join(BUILTIN_DATASET_NAMES)}"
        ) from None
    points = tuple(FailurePoint(level, t_h) for level, t_h in table)
    return TtfDataset(id=name, points=points)


# --------------------------------------------------------------------------
# CSV I/O


_TRUE_WORDS = {"true", "1", "yes", "y"}
_FALSE_WORDS = {"false", "0", "no", "n", ""}


def _parse_bool(text: str, line_no: int) -> bool:
    word = text.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise DataError(f"line {line_no}: cannot parse censored flag {text!r}")


def _parse_float(text: str, line_no: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise DataError(f"line {line_no}: cannot parse {what} {text!r}") from None


def _iter_csv_rows(path):
    """Yield (line_no, fields) for non-comment, non-blank lines."""
    with open(path, "r", newline="") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield line_no, next(csv.reader([line]))


def _read_metadata(path) -> dict[str, str]:
    meta = {}
    with open(path, "r") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped.startswith("#"):
                continue
            body = stripped.lstrip("#").strip()
            if ":" in body:
                key, value = body.split(":", 1)
                meta[key.strip()] = value.strip()
    return meta


def load_dataset(path, format: str = "ttf_csv") -> TtfDataset:
    """Load a failure-time dataset from disk.

    Parameters
    ----------
    path : str or pathlib.Path
    format : {"ttf_csv"}
        Only one format exists today; the parameter pins the schema a file
        is parsed against.

    Returns
    -------
    TtfDataset

    Raises
    ------
    DataError
        Malformed header or row (the message names the offending line),
        non-positive failure time, or an empty table.
    """
    if format != "ttf_csv":
        raise DataError(f"unknown dataset format {format!r}")
    rows = _iter_csv_rows(path)
    try:
        header_line_no, header = next(rows)
    except StopIteration:
        raise DataError(f"{path}: empty dataset (no header)") from None
    cols = [h.strip().lower() for h in header]
    if cols and cols[0] in ("load_level", "load_level_pct"):
        percent = cols[0] == "load_level_pct"
    else:
        raise DataError(
            f"line {header_line_no}: header must start with 'load_level' or "
            f"'load_level_pct', got {header!r}"
        )
    if len(cols) < 2 or cols[1] != "failure_time_h":
        raise DataError(f"line {header_line_no}: second column must be 'failure_time_h'")
    has_censored = len(cols) >= 3 and cols[2] == "censored"

    points = []
    for line_no, row in rows:
        if len(row) < 2:
            raise DataError(f"line {line_no}: expected at least 2 fields, got {len(row)}")
        level = _parse_float(row[0], line_no, "load level")
        if percent:
            level /= 100.0
        t_h = _parse_float(row[1], line_no, "failure time")
        censored = False
        if has_censored and len(row) >= 3:
            censored = _parse_bool(row[2], line_no)
        try:
            points.append(FailurePoint(level, t_h, censored))
        except DataError as exc:
            raise DataError(f"line {line_no}: {exc}") from None
    if not points:
        raise DataError(f"{path}: empty dataset (header only)")

    meta = _read_metadata(path)
    return TtfDataset(
        id=meta.get("id", _stem(path)),
        points=tuple(points),
        short_term_capacity=float(meta.get("short_term_capacity_kn", 0.0)),
        capacity_cov=float(meta.get("capacity_cov", 0.0)),
    )


def _stem(path) -> str:
    import os

    return os.path.splitext(os.path.basename(str(path)))[0]


def dataset_to_csv(dataset: TtfDataset) -> str:
    """Serialize a dataset to the canonical CSV text (round-trip exact)."""
    buf = io.StringIO()
    buf.write(f"# id: {dataset.id}\n")
    buf.write(f"# short_term_capacity_kn: {dataset.short_term_capacity!r}\n")
    buf.write(f"# capacity_cov: {dataset.capacity_cov!r}\n")
    buf.write("load_level,failure_time_h,censored\n")
    for p in dataset.points:
        flag = "true" if p.censored else "false"
        buf.write(f"{p.load_level!r},{p.failure_time!r},{flag}\n")
    return buf.getvalue()


def save_dataset(dataset: TtfDataset, path) -> None:
    """Write a dataset in the failure-data CSV schema (see module docs)."""
    with open(path, "w", newline="") as fh:
        fh.write(dataset_to_csv(dataset))


def load_series(path, load_target: float = 0.0, full_load_time: float | None = None) -> TimeSeries:
    """Load a raw sustained-load record.

    Parameters
    ----------
    path : str or pathlib.Path
        CSV with columns time_s, displacement_mm and/or load_kN /
        pressure_bar (header names decide which channels exist).
    load_target : float
        The sustained target level in the load channel's unit.
    full_load_time : float, optional
        Origin for failure times, seconds. When omitted it is derived as
        the first instant the load channel reaches the target; without a
        load channel it falls back to the first sample time.
    """
    rows = _iter_csv_rows(path)
    try:
        header_line_no, header = next(rows)
    except StopIteration:
        raise DataError(f"{path}: empty record (no header)") from None
    cols = [h.strip() for h in header]
    if not cols or cols[0].lower() != "time_s":
        raise DataError(f"line {header_line_no}: first column must be 'time_s'")
    disp_idx = load_idx = None
    load_channel = None
    for i, name in enumerate(cols[1:], start=1):
        low = name.lower()
        if low == "displacement_mm":
            disp_idx = i
        elif low in ("load_kn", "pressure_bar"):
            load_idx = i
            load_channel = "load_kN" if low == "load_kn" else "pressure_bar"
        else:
            raise DataError(f"line {header_line_no}: unknown column {name!r}")
    if disp_idx is None and load_idx is None:
        raise DataError(f"line {header_line_no}: no displacement or load column")

    times, disps, loads = [], [], []
    for line_no, row in rows:
        if len(row) < len(cols):
            raise DataError(f"line {line_no}: expected {len(cols)} fields, got {len(row)}")
        times.append(_parse_float(row[0], line_no, "time"))
        if disp_idx is not None:
            disps.append(_parse_float(row[disp_idx], line_no, "displacement"))
        if load_idx is not None:
            loads.append(_parse_float(row[load_idx], line_no, "load"))
    if not times:
        raise DataError(f"{path}: empty record (header only)")

    loads_t = tuple(loads) if load_idx is not None else None
    if full_load_time is None:
        full_load_time = derive_full_load_time(times, loads_t, load_target)
    return TimeSeries(
        times=tuple(times),
        displacements=tuple(disps) if disp_idx is not None else None,
        loads=loads_t,
        load_channel=load_channel,
        load_target=load_target,
        full_load_time=full_load_time,
    )


def derive_full_load_time(times, loads, load_target: float) -> float:
    """First instant the load reaches the target; record start otherwise."""
    if loads is not None and load_target > 0:
        for t, v in zip(times, loads):
            if v >= load_target:
                return float(t)
    return float(times[0])


def load_rates(path) -> tuple[RatePoint, ...]:
    """Load a loading-rate study (rate_mm_s, peak_kN rows)."""
    rows = _iter_csv_rows(path)
    try:
        header_line_no, header = next(rows)
    except StopIteration:
        raise DataError(f"{path}: empty rate table (no header)") from None
    cols = [h.strip().lower() for h in header]
    if cols[:2] != ["rate_mm_s", "peak_kn"]:
        raise DataError(
            f"line {header_line_no}: header must be 'rate_mm_s,peak_kN', got {header!r}"
        )
    points = []
    for line_no, row in rows:
        if len(row) < 2:
            raise DataError(f"line {line_no}: expected 2 fields, got {len(row)}")
        rate = _parse_float(row[0], line_no, "rate")
        peak = _parse_float(row[1], line_no, "peak")
        try:
            points.append(RatePoint(rate, peak))
        except DataError as exc:
            raise DataError(f"line {line_no}: {exc}") from None
    if not points:
        raise DataError(f"{path}: empty rate table (header only)")
    return tuple(points)
