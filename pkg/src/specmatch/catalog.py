"""Precomputed spectrogram database: build from a WAV directory, persist, query.

File format (all integers little-endian):

    "SPMC" | version u32 | window_len u32 | hop u32 | bins u32 | track_count u32
    per track:
        name_len u32 | name (UTF-8) | sample_rate u32 | duration f64 | frames u32
        frames * bins magnitudes, row-major IEEE-754 float32

Magnitudes are stored raw (not normalized): window-level normalization
depends on window position and has to happen at query time.
"""

from __future__ import annotations

import struct
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio_io import AudioBuffer, load_audio
from .errors import (
    BadMagicError,
    CatalogIoError,
    EmptyCorpusError,
    NoEligibleTrackError,
    SpecmatchError,
    UnsupportedVersionError,
)
from .matcher import MatchConfig, MatchResult, match_segment
from .spectro import SpectroConfig, SpectrogramMatrix, stft_magnitude

MAGIC = b"SPMC"
VERSION = 1

_HEADER = struct.Struct("<4s5I")
_TRACK_META = struct.Struct("<IdI")  # sample_rate, duration_seconds, frames


@dataclass(frozen=True, eq=False)
class TrackEntry:
    """One catalog track: display name, source timing, and its spectrogram."""

    name: str
    duration_seconds: float
    sample_rate: int
    matrix: SpectrogramMatrix


@dataclass(frozen=True, eq=False)
class Catalog:
    """A set of tracks all analyzed under one SpectroConfig."""

    config: SpectroConfig
    tracks: tuple[TrackEntry, ...]


def _warn(warnings: list[str], message: str) -> None:
    warnings.append(message)
    print(f"WARN {message}", file=sys.stderr)


def build_catalog(
    directory, config: SpectroConfig | None = None
) -> tuple[Catalog, list[str]]:
    """Analyze every WAV in a directory (sorted by name) into a catalog.

    Files that fail to decode or are shorter than one analysis window are
    skipped; each skip is recorded in the returned warning list and echoed
    to standard error as a ``WARN <file>: <reason>`` line.

    Raises:
        EmptyCorpusError: no usable WAV in the directory.
    """
    if config is None:
        config = SpectroConfig()
    directory = Path(directory)
    wavs = sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() == ".wav"),
        key=lambda p: (p.stem, p.name),
    )

    warnings: list[str] = []
    entries: list[TrackEntry] = []
    seen: set[str] = set()
    for path in wavs:
        if path.stem in seen:
            _warn(warnings, f"{path.name}: duplicate track name '{path.stem}'")
            continue
        try:
            audio = load_audio(path)
            # float32 here so save/load round-trips bit-exactly
            matrix = stft_magnitude(audio, config)
            matrix = SpectrogramMatrix(
                data=matrix.data.astype(np.float32),
                frame_hop_seconds=matrix.frame_hop_seconds,
                source_duration_seconds=matrix.source_duration_seconds,
                config=config,
            )
        except (SpecmatchError, OSError) as exc:
            _warn(warnings, f"{path.name}: {exc}")
            continue
        seen.add(path.stem)
        entries.append(
            TrackEntry(
                name=path.stem,
                duration_seconds=audio.duration_seconds,
                sample_rate=audio.sample_rate,
                matrix=matrix,
            )
        )

    if not entries:
        raise EmptyCorpusError(f"no usable WAV file in {directory}")
    return Catalog(config=config, tracks=tuple(entries)), warnings


def save_catalog(catalog: Catalog, path) -> None:
    """Write a catalog to disk in the versioned binary format above."""
    cfg = catalog.config
    blob = bytearray(
        _HEADER.pack(MAGIC, VERSION, cfg.window_len, cfg.hop, cfg.bins, len(catalog.tracks))
    )
    for track in catalog.tracks:
        name = track.name.encode("utf-8")
        blob += struct.pack("<I", len(name))
        blob += name
        blob += _TRACK_META.pack(track.sample_rate, track.duration_seconds, track.matrix.frames)
        blob += np.ascontiguousarray(track.matrix.data, dtype="<f4").tobytes()
    Path(path).write_bytes(blob)


class _Reader:
    """Cursor over catalog bytes that reports the offset of any truncation."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int, what: str) -> bytes:
        if self.offset + n > len(self.data):
            raise CatalogIoError(
                f"truncated catalog: need {n} bytes for {what} at byte offset {self.offset}"
            )
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk


def load_catalog(path) -> Catalog:
    """Read a catalog written by save_catalog, bit-exactly.

    Raises:
        BadMagicError / UnsupportedVersionError: wrong file type or version.
        CatalogIoError: truncated or trailing bytes (offset in the message).
    """
    reader = _Reader(Path(path).read_bytes())
    magic, version, window_len, hop, bins, track_count = _HEADER.unpack(
        reader.take(_HEADER.size, "header")
    )
    if magic != MAGIC:
        raise BadMagicError(f"{path}: magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: version {version}, expected {VERSION}")
    config = SpectroConfig(window_len=window_len, hop=hop, bins=bins)

    tracks = []
    for _ in range(track_count):
        (name_len,) = struct.unpack("<I", reader.take(4, "name length"))
        name = reader.take(name_len, "track name").decode("utf-8")
        sample_rate, duration, frames = _TRACK_META.unpack(
            reader.take(_TRACK_META.size, "track metadata")
        )
        data = np.frombuffer(
            reader.take(frames * bins * 4, f"magnitudes of '{name}'"), dtype="<f4"
        ).reshape(frames, bins)
        tracks.append(
            TrackEntry(
                name=name,
                duration_seconds=duration,
                sample_rate=sample_rate,
                matrix=SpectrogramMatrix(
                    data=data,
                    frame_hop_seconds=hop / sample_rate,
                    source_duration_seconds=duration,
                    config=config,
                ),
            )
        )
    if reader.offset != len(reader.data):
        raise CatalogIoError(
            f"trailing data after last track at byte offset {reader.offset}"
        )
    return Catalog(config=config, tracks=tuple(tracks))


def query_catalog(
    catalog: Catalog, query: AudioBuffer, cfg: MatchConfig | None = None
) -> list[tuple[str, MatchResult]]:
    """Match a query snippet against every eligible track, best error first.

    Tracks with fewer frames than the query are skipped with a WARN line on
    standard error.  Ties in best error are ordered by track name.

    Raises:
        EmptyCorpusError: the catalog has no tracks.
        AudioTooShortError: query shorter than one analysis window.
        NoEligibleTrackError: every track is shorter than the query.
    """
    if cfg is None:
        cfg = MatchConfig()
    if not catalog.tracks:
        raise EmptyCorpusError("catalog has no tracks")
    query_spec = stft_magnitude(query, catalog.config)

    results = []
    for track in catalog.tracks:
        if track.matrix.frames < query_spec.frames:
            print(
                f"WARN {track.name}: track of {track.matrix.frames} frames shorter "
                f"than query of {query_spec.frames} frames, skipped",
                file=sys.stderr,
            )
            continue
        results.append((track.name, match_segment(track.matrix, query_spec, cfg)))
    if not results:
        raise NoEligibleTrackError(
            f"no track has at least {query_spec.frames} frames"
        )
    results.sort(key=lambda item: (item[1].best_error, item[0]))
    return results
