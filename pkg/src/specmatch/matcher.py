"""Sliding-window spectrogram comparison with sum-of-absolute-differences error.

The query spectrogram is normalized once, slid across the full track's
spectrogram, and each candidate window is normalized independently before
the entrywise absolute differences are summed.  The window with the least
error is the match candidate; a flat curve (contrast near 1) means there is
no match anywhere in the track.

Two time axes are available for the curve.  ``EXACT_START`` reports each
window's true start time, (i-1) * step * hop / sample_rate.  ``PAPER_RESCALE``
linearly maps window indices onto [0, track duration]; it is kept for
reproducing historical plots and systematically shifts a true offset t to
roughly t * D / (D - S) for a D-second track and S-second query, which is
why minima land near the center of the queried interval.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ConfigMismatchError,
    IndexOutOfRangeError,
    SegmentTooLongError,
    ShapeMismatchError,
)
from .spectro import SpectrogramMatrix


class TimeMapping(Enum):
    """How window indices are converted to seconds on the error curve."""

    PAPER_RESCALE = "paper-rescale"
    EXACT_START = "exact-start"


@dataclass(frozen=True)
class MatchConfig:
    """Matching knobs: window stride in frames, time axis, normalization toggle."""

    step: int = 1
    time_mapping: TimeMapping = TimeMapping.EXACT_START
    normalize: bool = True

    def __post_init__(self):
        if self.step < 1:
            raise ValueError(f"step must be >= 1, got {self.step}")


@dataclass(frozen=True, eq=False)
class ErrorCurve:
    """Error as a function of window position.

    ``times`` and ``errors`` are parallel arrays; times are strictly
    increasing and errors nonnegative.
    """

    times: np.ndarray
    errors: np.ndarray
    segment_frames: int
    mapping_used: TimeMapping

    def __len__(self) -> int:
        return len(self.errors)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.errors.tolist()))


@dataclass(frozen=True)
class MatchResult:
    """Best window of one comparison plus a flatness statistic.

    ``contrast`` is best_error / median(errors): near 0 for a sharp match,
    near 1 for a featureless curve.  Ties resolve to the smallest index.
    """

    best_time: float
    best_error: float
    best_index: int
    contrast: float


def window_count(full_frames: int, segment_frames: int, step: int) -> int:
    """Number of complete sliding windows: floor((full - segment) / step) + 1."""
    if segment_frames > full_frames:
        return 0
    return (full_frames - segment_frames) // step + 1


def sliding_windows(full: SpectrogramMatrix, segment_frames: int, step: int = 1):
    """Views of the full track's frame rows, segment_frames long, step apart.

    Window i (1-based) covers frames (i-1)*step+1 .. (i-1)*step+segment_frames;
    a trailing incomplete window is dropped.

    Raises:
        SegmentTooLongError: segment_frames exceeds the track's frame count.
    """
    if segment_frames < 1:
        raise ValueError(f"segment_frames must be >= 1, got {segment_frames}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if segment_frames > full.frames:
        raise SegmentTooLongError(
            f"segment of {segment_frames} frames > track of {full.frames} frames"
        )
    count = window_count(full.frames, segment_frames, step)
    return [full.data[i * step : i * step + segment_frames] for i in range(count)]


def sad_error(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of absolute differences over all entries of two same-shape matrices.

    Raises:
        ShapeMismatchError: shapes differ.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes {a.shape} and {b.shape} differ")
    return float(np.abs(a - b).sum())


def rescale_index(
    index: int,
    window_count: int,
    duration_seconds: float,
    mapping: TimeMapping = TimeMapping.PAPER_RESCALE,
    *,
    step: int = 1,
    frame_hop_seconds: float = 0.0,
) -> float:
    """Convert a 1-based window index to seconds.

    PAPER_RESCALE maps 1..window_count linearly onto [0, duration_seconds]
    (a single window maps to 0).  EXACT_START returns the window's actual
    start time and needs ``step`` and ``frame_hop_seconds``.

    Raises:
        IndexOutOfRangeError: index outside 1..window_count.
    """
    if not 1 <= index <= window_count:
        raise IndexOutOfRangeError(f"index {index} outside 1..{window_count}")
    if mapping is TimeMapping.EXACT_START:
        return (index - 1) * step * frame_hop_seconds
    if window_count == 1:
        return 0.0
    return (index - 1) / (window_count - 1) * duration_seconds


def _curve_times(n: int, full: SpectrogramMatrix, cfg: MatchConfig) -> np.ndarray:
    idx = np.arange(n, dtype=np.float64)
    if cfg.time_mapping is TimeMapping.EXACT_START:
        return idx * cfg.step * full.frame_hop_seconds
    if n == 1:
        return np.zeros(1)
    return idx / (n - 1) * full.source_duration_seconds


def error_curve(
    full: SpectrogramMatrix, segment: SpectrogramMatrix, cfg: MatchConfig | None = None
) -> ErrorCurve:
    """Slide the segment across the full track and record the error per window.

    The segment is normalized once by (its max + 1); every window is
    normalized independently by (that window's max + 1).  With
    ``cfg.normalize`` off, raw magnitudes are compared instead.

    Raises:
        ConfigMismatchError: spectrograms computed under different configs.
        SegmentTooLongError: segment has more frames than the track.
    """
    if cfg is None:
        cfg = MatchConfig()
    if full.config != segment.config:
        raise ConfigMismatchError(f"{full.config} != {segment.config}")
    if segment.frames > full.frames:
        raise SegmentTooLongError(
            f"segment of {segment.frames} frames > track of {full.frames} frames"
        )

    seg = segment.data
    if cfg.normalize:
        seg = seg / (float(seg.max()) + 1.0)

    n = window_count(full.frames, segment.frames, cfg.step)
    errors = np.empty(n, dtype=np.float64)
    for i in range(n):
        window = full.data[i * cfg.step : i * cfg.step + segment.frames]
        if cfg.normalize:
            window = window / (float(window.max()) + 1.0)
        errors[i] = np.abs(seg - window).sum()

    return ErrorCurve(
        times=_curve_times(n, full, cfg),
        errors=errors,
        segment_frames=segment.frames,
        mapping_used=cfg.time_mapping,
    )


def _contrast(errors: np.ndarray, best_error: float) -> float:
    if np.all(errors == errors[0]):
        return 1.0
    median = float(np.median(errors))
    if median == 0.0:
        return 0.0
    return best_error / median


def match_segment(
    full: SpectrogramMatrix, segment: SpectrogramMatrix, cfg: MatchConfig | None = None
) -> MatchResult:
    """Best window of the error curve, earliest index on ties."""
    curve = error_curve(full, segment, cfg)
    i = int(np.argmin(curve.errors))
    best_error = float(curve.errors[i])
    return MatchResult(
        best_time=float(curve.times[i]),
        best_error=best_error,
        best_index=i + 1,
        contrast=_contrast(curve.errors, best_error),
    )


def curve_to_csv(curve: ErrorCurve) -> str:
    """Render a curve as CSV: header ``time_s,error``, 6 decimals, LF endings."""
    out = io.StringIO()
    out.write("time_s,error\n")
    for t, e in zip(curve.times, curve.errors):
        out.write(f"{t:.6f},{e:.6f}\n")
    return out.getvalue()
