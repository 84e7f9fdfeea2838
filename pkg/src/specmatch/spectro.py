"""Magnitude spectrograms: rectangular-window STFT plus max+1 normalization.

A signal is partitioned into window_len-sample frames at a hop stride
(trailing partial frame dropped), each frame is DFT'd without tapering, and
the magnitudes of bins 1..bins are kept in ascending frequency order.  For
real input those low bins carry the same magnitudes as the top mirror bins
of the full transform, so nothing is lost by storing the low half.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .audio_io import AudioBuffer
from .errors import AudioTooShortError

DEFAULT_WINDOW_LEN = 4096
DEFAULT_HOP = 512
DEFAULT_BINS = 1024


@dataclass(frozen=True)
class SpectroConfig:
    """Analysis geometry: window length, hop, and retained bin count (samples)."""

    window_len: int = DEFAULT_WINDOW_LEN
    hop: int = DEFAULT_HOP
    bins: int = DEFAULT_BINS

    def __post_init__(self):
        if self.window_len <= 0:
            raise ValueError(f"window_len must be positive, got {self.window_len}")
        if not 0 < self.hop <= self.window_len:
            raise ValueError(
                f"hop must be in 1..window_len, got hop={self.hop} window={self.window_len}"
            )
        if not 0 < self.bins <= self.window_len // 2:
            raise ValueError(
                f"bins must be in 1..window_len/2, got bins={self.bins} window={self.window_len}"
            )


@dataclass(frozen=True, eq=False)
class SpectrogramMatrix:
    """frames x bins nonnegative magnitudes with the timing of their source audio.

    Column j holds DFT bin j+1, i.e. frequency (j+1) * sample_rate / window_len.
    """

    data: np.ndarray
    frame_hop_seconds: float
    source_duration_seconds: float
    config: SpectroConfig

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def bins(self) -> int:
        return self.data.shape[1]


def frame_count(num_samples: int, window_len: int, hop: int) -> int:
    """Number of complete windows: floor((num_samples - window_len) / hop) + 1."""
    if num_samples < window_len:
        return 0
    return (num_samples - window_len) // hop + 1


def stft_magnitude(audio: AudioBuffer, config: SpectroConfig | None = None) -> SpectrogramMatrix:
    """Compute the magnitude spectrogram of a mono buffer.

    Raises:
        AudioTooShortError: fewer samples than one window.
    """
    if config is None:
        config = SpectroConfig()
    n = len(audio.samples)
    if n < config.window_len:
        raise AudioTooShortError(
            f"{n} samples < one {config.window_len}-sample window"
        )
    frames = np.lib.stride_tricks.sliding_window_view(audio.samples, config.window_len)
    frames = frames[:: config.hop]
    spectrum = np.fft.rfft(frames, axis=1)
    mags = np.abs(spectrum[:, 1 : config.bins + 1])
    return SpectrogramMatrix(
        data=mags,
        frame_hop_seconds=config.hop / audio.sample_rate,
        source_duration_seconds=audio.duration_seconds,
        config=config,
    )


def normalize(m: SpectrogramMatrix) -> SpectrogramMatrix:
    """Divide every entry by (global max + 1); the +1 keeps all-silent input at zero.

    Entries become volume ratios in [0, max/(max+1)), so two recordings of the
    same content at different gains compare almost identically.
    """
    peak = float(m.data.max()) if m.data.size else 0.0
    return replace(m, data=m.data / (peak + 1.0))
