"""Volume-independent audio snippet matching by spectrogram comparison.

Pipeline: decode WAVs to mono, compute rectangular-window magnitude
spectrograms, normalize each segment by (its max + 1), slide the query
across each track summing absolute differences, and report the window
with the least error.
"""

from . import errors
from .audio_io import AudioBuffer, gen_tone, load_audio, save_wav, trim
from .catalog import (
    Catalog,
    TrackEntry,
    build_catalog,
    load_catalog,
    query_catalog,
    save_catalog,
)
from .matcher import (
    ErrorCurve,
    MatchConfig,
    MatchResult,
    TimeMapping,
    curve_to_csv,
    error_curve,
    match_segment,
    rescale_index,
    sad_error,
    sliding_windows,
    window_count,
)
from .spectro import (
    SpectroConfig,
    SpectrogramMatrix,
    frame_count,
    normalize,
    stft_magnitude,
)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "Catalog",
    "ErrorCurve",
    "MatchConfig",
    "MatchResult",
    "SpectroConfig",
    "SpectrogramMatrix",
    "TimeMapping",
    "TrackEntry",
    "build_catalog",
    "curve_to_csv",
    "errors",
    "error_curve",
    "frame_count",
    "gen_tone",
    "load_audio",
    "load_catalog",
    "match_segment",
    "normalize",
    "query_catalog",
    "rescale_index",
    "sad_error",
    "save_catalog",
    "save_wav",
    "sliding_windows",
    "stft_magnitude",
    "trim",
    "window_count",
]
