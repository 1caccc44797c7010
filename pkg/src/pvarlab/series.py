"""Core data model: uniformly sampled scalar paths and index segments.

A path is a sequence of membrane-potential-like samples (mV) on the grid
t0 + i*dt.  Segments are inclusive index ranges [i0, i1] into such a path;
a SegmentSet is an ordered, disjoint collection of them, typically the
spikeless stretches of a recording.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TimeSeries",
    "Segment",
    "SegmentSet",
    "SeriesParseError",
    "SeriesFormatError",
    "SeriesSizeError",
    "parse_series",
    "emit_series",
    "load_series",
    "write_series",
]

# relative tolerance on time-column spacing; DAQ files carry rounded stamps
SPACING_RTOL = 1e-9


class SeriesParseError(ValueError):
    """A token in the input could not be parsed as a number."""


class SeriesFormatError(ValueError):
    """Structurally bad input (non-uniform spacing, inconsistent columns)."""


class SeriesSizeError(ValueError):
    """Fewer than two usable samples."""


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar path.

    Attributes:
        values: samples in mV, float64, length >= 2, all finite
        dt: sampling step in seconds, > 0
        t0: time of the first sample in seconds
    """

    values: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if v.size < 2:
            raise SeriesSizeError(f"need at least 2 samples, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite (no NaN/inf)")
        if not (float(self.dt) > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def duration(self) -> float:
        """Time spanned by the samples, (N-1)*dt, in seconds."""
        return (self.n - 1) * self.dt

    def times(self) -> np.ndarray:
        """Sample times t0 + i*dt."""
        return self.t0 + self.dt * np.arange(self.n)

    def time_at(self, i: int) -> float:
        return self.t0 + i * self.dt

    def scaled(self, c: float) -> "TimeSeries":
        """Series with every value multiplied by c (same grid)."""
        return TimeSeries(values=self.values * c, dt=self.dt, t0=self.t0)


@dataclass(frozen=True, order=True)
class Segment:
    """Inclusive index range [i0, i1] of a spikeless stretch."""

    i0: int
    i1: int

    def __post_init__(self):
        if not (0 <= self.i0 < self.i1):
            raise ValueError(f"require 0 <= i0 < i1, got [{self.i0}, {self.i1}]")

    @property
    def n_samples(self) -> int:
        return self.i1 - self.i0 + 1

    def max_lag(self) -> int:
        """Largest step multiple m admitting at least one increment."""
        return self.i1 - self.i0


@dataclass(frozen=True)
class SegmentSet:
    """Ordered, pairwise disjoint segments of one source series."""

    segments: tuple[Segment, ...]
    n_source: int

    def __post_init__(self):
        segs = tuple(self.segments)
        for s in segs:
            if s.i1 >= self.n_source:
                raise ValueError(f"segment {s} exceeds source length {self.n_source}")
        for a, b in zip(segs, segs[1:]):
            if b.i0 <= a.i1:
                raise ValueError(f"segments {a} and {b} overlap or are out of order")
        object.__setattr__(self, "segments", segs)

    def __iter__(self):
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def max_lag(self) -> int:
        """Largest step multiple usable on at least one segment (0 if none)."""
        return max((s.max_lag() for s in self.segments), default=0)

    @classmethod
    def whole(cls, series: TimeSeries) -> "SegmentSet":
        """The full series as a single segment."""
        return cls(segments=(Segment(0, series.n - 1),), n_source=series.n)


def _tokenize(line: str) -> list[str]:
    if "," in line:
        return [tok.strip() for tok in line.split(",")]
    return line.split()


def parse_series(source, dt: float | None = None, columns: int | None = None) -> TimeSeries:
    """Parse a series file: one sample per line.

    Accepted line formats: ``<value>`` (needs the dt argument) or
    ``<time><sep><value>`` with sep a comma, tab or whitespace.  Lines
    starting with ``#`` and blank lines are skipped.  Two-column input must
    be uniformly spaced (each gap within SPACING_RTOL of the first gap);
    the stored dt is the mean gap unless dt is passed explicitly.

    Args:
        source: str, bytes, or a text file object
        dt: sampling step override in seconds
        columns: force 1- or 2-column interpretation (default: auto-detect)
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    times: list[float] = []
    values: list[float] = []
    ncol = columns
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = _tokenize(line)
        if ncol is None:
            ncol = len(toks)
            if ncol not in (1, 2):
                raise SeriesFormatError(
                    f"line {lineno}: expected 1 or 2 columns, found {len(toks)}")
        if len(toks) != ncol:
            raise SeriesFormatError(
                f"line {lineno}: expected {ncol} columns, found {len(toks)}")
        try:
            nums = [float(t) for t in toks]
        except ValueError:
            raise SeriesParseError(f"line {lineno}: non-numeric token in {line!r}") from None
        if not all(np.isfinite(nums)):
            raise SeriesParseError(f"line {lineno}: non-finite sample in {line!r}")
        if ncol == 2:
            times.append(nums[0])
            values.append(nums[1])
        else:
            values.append(nums[0])

    if len(values) < 2:
        raise SeriesSizeError(f"need at least 2 samples, got {len(values)}")

    if ncol == 1:
        if dt is None:
            raise SeriesFormatError("single-column input requires an explicit dt")
        return TimeSeries(values=np.array(values), dt=dt)

    t = np.array(times)
    gaps = np.diff(t)
    first = gaps[0]
    if first <= 0:
        raise SeriesFormatError("time column must be strictly increasing")
    if np.any(np.abs(gaps - first) > SPACING_RTOL * abs(first)):
        bad = int(np.argmax(np.abs(gaps - first) > SPACING_RTOL * abs(first)))
        raise SeriesFormatError(
            f"non-uniform spacing: gap {gaps[bad]!r} at sample {bad + 1} "
            f"differs from first gap {first!r}")
    step = dt if dt is not None else float(np.mean(gaps))
    return TimeSeries(values=np.array(values), dt=step, t0=float(t[0]))


def emit_series(series: TimeSeries) -> str:
    """Render a series in the two-column format parse_series reads.

    Values are written with shortest round-trip precision, so
    parse(emit(s)) reproduces the stored values exactly.
    """
    lines = []
    for i, v in enumerate(series.values):
        t = series.t0 + i * series.dt
        lines.append(f"{t!r},{v!r}")
    return "\n".join(lines) + "\n"


def load_series(path, dt: float | None = None, columns: int | None = None) -> TimeSeries:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_series(fh, dt=dt, columns=columns)


def write_series(series: TimeSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_series(series))
