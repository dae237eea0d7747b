"""Canonical time-series containers and alignment operations.

A series is a uniformly spaced sequence of observations: a start timestamp
(UTC seconds), a constant interval (seconds), and a value array. Timestamps
are implicit (``t_i = start + i * interval``); missing observations are kept
in place as NaN so spacing stays uniform. Energy values are in milliwatts.

All containers are frozen and their arrays are made read-only, so instances
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotAMultiple, UnsortedWeather


def _as_readonly_values(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"values must be one-dimensional, got shape {arr.shape}")
    if np.isinf(arr).any():
        raise ValueError("non-missing values must be finite (inf not allowed)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly spaced observations of a single variable.

    Attributes:
        start: timestamp of the first observation (UTC seconds)
        interval: spacing between observations (seconds, > 0)
        values: observation array; NaN marks a missing observation
    """

    start: float
    interval: float
    values: np.ndarray

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError(f"interval must be > 0, got {self.interval}")
        object.__setattr__(self, "values", _as_readonly_values(self.values))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def timestamps(self) -> np.ndarray:
        return self.start + self.interval * np.arange(len(self))

    @property
    def missing(self) -> np.ndarray:
        """Boolean mask over observations, True where missing."""
        return np.isnan(self.values)

    def slice(self, begin: int, end: int | None = None) -> "TimeSeries":
        """Sub-series over index range [begin, end); start is shifted accordingly."""
        idx = range(len(self))[begin:end]
        offset = idx.start if len(idx) else begin
        return TimeSeries(self.start + offset * self.interval, self.interval,
                          self.values[begin:end])

    def with_values(self, values) -> "TimeSeries":
        return TimeSeries(self.start, self.interval, values)


@dataclass(frozen=True)
class MultiSeries:
    """Several time-aligned variables sharing one implicit timestamp index.

    ``values`` has shape (n_rows, n_columns); ``names`` labels the columns
    (unique, non-empty). NaN marks a missing cell.
    """

    start: float
    interval: float
    names: tuple
    values: np.ndarray

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError(f"interval must be > 0, got {self.interval}")
        names = tuple(self.names)
        if len(names) == 0:
            raise ValueError("MultiSeries needs at least one column")
        if any(not n for n in names):
            raise ValueError("column names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"column names must be unique, got {names}")
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != len(names):
            raise ValueError(
                f"values must have shape (n, {len(names)}), got {arr.shape}")
        if np.isinf(arr).any():
            raise ValueError("non-missing values must be finite (inf not allowed)")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def timestamps(self) -> np.ndarray:
        return self.start + self.interval * np.arange(len(self))

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def series(self, name: str) -> TimeSeries:
        """Extract one column as a TimeSeries."""
        return TimeSeries(self.start, self.interval, self.column(name))


@dataclass(frozen=True)
class WeatherRecord:
    """One weather observation; fields other than timestamp may be missing."""

    timestamp: float
    temperature: float | None = None  # degrees C
    humidity: float | None = None  # percent
    extra: dict = field(default_factory=dict)  # further numeric fields by name

    def __post_init__(self):
        if not np.isfinite(self.timestamp):
            raise ValueError("weather timestamp must be finite")
        for key, val in (("temperature", self.temperature),
                         ("humidity", self.humidity),
                         *self.extra.items()):
            if val is not None and not np.isfinite(val):
                raise ValueError(f"weather field {key!r} must be finite, got {val}")

    def get(self, name: str):
        if name == "temperature":
            return self.temperature
        if name == "humidity":
            return self.humidity
        return self.extra.get(name)


def resample(s: TimeSeries, target_interval: float, mode: str = "sum") -> TimeSeries:
    """Aggregate to a coarser interval that is an integer multiple of the source.

    Each output value aggregates the k = target/source values of its window
    with ``mode`` ("sum" for accumulating quantities such as energy, "mean"
    for state quantities such as temperature). A window containing any missing
    value yields a missing output, and a trailing partial window is dropped so
    the output stays exactly uniform.
    """
    if mode not in ("sum", "mean"):
        raise ValueError(f"mode must be 'sum' or 'mean', got {mode!r}")
    if target_interval <= 0 or target_interval % s.interval != 0:
        raise NotAMultiple(
            f"target interval {target_interval} is not a positive integer "
            f"multiple of the source interval {s.interval}")
    k = int(round(target_interval / s.interval))
    if k == 1:
        return s
    n_windows = len(s) // k
    if n_windows == 0:
        return TimeSeries(s.start, target_interval, np.empty(0))
    windows = s.values[: n_windows * k].reshape(n_windows, k)
    agg = windows.sum(axis=1) if mode == "sum" else windows.mean(axis=1)
    # NaN propagates through sum/mean, which is exactly the missing-window policy
    return TimeSeries(s.start, target_interval, agg)


def merge(energy: TimeSeries, weather: list, max_fill: int = 2) -> MultiSeries:
    """Attach weather columns to an energy series by last-observation-carried-forward.

    For each energy timestamp the eligible weather record is the latest one at
    or before that timestamp, no older than ``max_fill`` energy intervals.
    Rows with no eligible record get missing weather cells; the energy column
    is copied verbatim.

    Weather columns are temperature, humidity, and the sorted union of extra
    field names seen across the records.
    """
    ts = np.array([r.timestamp for r in weather], dtype=np.float64)
    if np.any(np.diff(ts) < 0):
        pos = int(np.argmax(np.diff(ts) < 0)) + 1
        raise UnsortedWeather(
            f"weather timestamps decrease at record {pos} "
            f"({ts[pos]} after {ts[pos - 1]})")

    extra_names = sorted({name for r in weather for name in r.extra})
    weather_names = ["temperature", "humidity"] + extra_names
    n = len(energy)
    out = np.full((n, 1 + len(weather_names)), np.nan)
    out[:, 0] = energy.values

    horizon = max_fill * energy.interval
    j = -1  # index of latest record with timestamp <= current energy time
    for i, t in enumerate(energy.timestamps):
        while j + 1 < len(weather) and ts[j + 1] <= t:
            j += 1
        if j >= 0 and t - ts[j] <= horizon:
            rec = weather[j]
            for c, name in enumerate(weather_names):
                val = rec.get(name)
                out[i, 1 + c] = np.nan if val is None else val
    return MultiSeries(energy.start, energy.interval,
                       ("energy", *weather_names), out)


def drop_missing(m: MultiSeries):
    """Remove rows containing any missing cell.

    Returns the compacted MultiSeries and an index map giving each kept row's
    original position. Removal breaks the uniform spacing, so the compacted
    frame's implicit timestamps are nominal; downstream lag embedding must use
    the index map to skip non-contiguous row pairs.
    """
    keep = ~np.isnan(m.values).any(axis=1)
    index_map = np.flatnonzero(keep)
    return MultiSeries(m.start, m.interval, m.names, m.values[keep]), index_map
