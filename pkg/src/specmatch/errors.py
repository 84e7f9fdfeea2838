"""Exception types raised across the package.

Everything derives from ``SpecmatchError`` so callers can catch the whole
family at once; conditions that are really argument errors also subclass
``ValueError`` (or ``IndexError``) so generic handling keeps working.
"""


class SpecmatchError(Exception):
    """Base class for all errors raised by specmatch."""


class UnsupportedFormatError(SpecmatchError):
    """Audio file uses a codec or layout this package does not decode."""


class CorruptHeaderError(SpecmatchError):
    """File is not a well-formed RIFF/WAVE container."""


class InvalidRangeError(SpecmatchError, ValueError):
    """Trim boundaries are inconsistent with the buffer duration."""


class AliasedFrequencyError(SpecmatchError, ValueError):
    """Requested tone frequency is at or above the Nyquist limit."""


class AudioTooShortError(SpecmatchError, ValueError):
    """Audio has fewer samples than one analysis window."""


class SegmentTooLongError(SpecmatchError, ValueError):
    """Query spectrogram has more frames than the track it is matched against."""


class ShapeMismatchError(SpecmatchError, ValueError):
    """Two matrices that must share a shape do not."""


class IndexOutOfRangeError(SpecmatchError, IndexError):
    """Window index outside 1..window_count."""


class ConfigMismatchError(SpecmatchError, ValueError):
    """Spectrograms being compared were computed under different configs."""


class EmptyCorpusError(SpecmatchError):
    """No usable track was found when building or querying a catalog."""


class NoEligibleTrackError(SpecmatchError):
    """Every catalog track is shorter (in frames) than the query."""


class BadMagicError(SpecmatchError):
    """Catalog file does not start with the expected magic bytes."""


class UnsupportedVersionError(SpecmatchError):
    """Catalog file version is newer than this package understands."""


class CatalogIoError(SpecmatchError):
    """Catalog file is truncated or otherwise unreadable."""
