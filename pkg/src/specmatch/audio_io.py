"""WAV decode/encode, mono mixdown, trimming, and test-tone synthesis.

Only PCM WAV is handled: integer codes at 8/16/24 bit plus 32-bit float,
mono or stereo.  Stereo is averaged down to mono on load.  All samples are
kept as float64 in [-1, 1]; writing always emits 16-bit mono PCM.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AliasedFrequencyError,
    CorruptHeaderError,
    InvalidRangeError,
    UnsupportedFormatError,
)

_PCM_INT = 1
_PCM_FLOAT = 3


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono audio: a 1-D float64 sample array plus its sample rate in Hz.

    Buffers are treated as immutable; operations return new instances.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate


def _read_exact(data: bytes, offset: int, n: int, what: str) -> bytes:
    if offset + n > len(data):
        raise CorruptHeaderError(f"file ends inside {what} (need {n} bytes at offset {offset})")
    return data[offset : offset + n]


def load_audio(path) -> AudioBuffer:
    """Decode a PCM WAV file to a mono AudioBuffer.

    Stereo channels are averaged per sample.  Integer PCM is scaled by
    2^(bits-1); float data is clamped to [-1, 1].

    Raises:
        FileNotFoundError: path does not exist.
        CorruptHeaderError: not a parseable RIFF/WAVE file.
        UnsupportedFormatError: non-PCM codec, >2 channels, or a sample
            width outside 8/16/24-bit integer and 32-bit float.
    """
    data = Path(path).read_bytes()

    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeaderError(f"{path}: missing RIFF/WAVE signature")

    fmt = None
    payload = None
    offset = 12
    while offset + 8 <= len(data):
        chunk_id = data[offset : offset + 4]
        (chunk_size,) = struct.unpack_from("<I", data, offset + 4)
        body_off = offset + 8
        if chunk_id == b"fmt ":
            body = _read_exact(data, body_off, min(chunk_size, 16), "fmt chunk")
            if chunk_size < 16:
                raise CorruptHeaderError(f"{path}: fmt chunk too small ({chunk_size} bytes)")
            fmt = struct.unpack("<HHIIHH", body)
        elif chunk_id == b"data":
            payload = _read_exact(data, body_off, chunk_size, "data chunk")
        # Skip anything else (LIST, fact, ...); chunks are word-aligned.
        offset = body_off + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise CorruptHeaderError(f"{path}: no fmt chunk")
    if payload is None:
        raise CorruptHeaderError(f"{path}: no data chunk")

    audio_format, channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if audio_format not in (_PCM_INT, _PCM_FLOAT):
        raise UnsupportedFormatError(f"{path}: format code {audio_format} (only PCM 1 and float 3)")
    if channels not in (1, 2):
        raise UnsupportedFormatError(f"{path}: {channels} channels (only mono or stereo)")
    if sample_rate <= 0:
        raise CorruptHeaderError(f"{path}: sample rate {sample_rate}")

    if audio_format == _PCM_FLOAT:
        if bits != 32:
            raise UnsupportedFormatError(f"{path}: {bits}-bit float (only 32)")
        raw = np.frombuffer(payload[: len(payload) - len(payload) % 4], dtype="<f4")
        samples = np.clip(raw.astype(np.float64), -1.0, 1.0)
    elif bits == 8:
        # 8-bit PCM is unsigned with a 128 offset.
        raw = np.frombuffer(payload, dtype=np.uint8)
        samples = (raw.astype(np.float64) - 128.0) / 128.0
    elif bits == 16:
        raw = np.frombuffer(payload[: len(payload) - len(payload) % 2], dtype="<i2")
        samples = raw.astype(np.float64) / 32768.0
    elif bits == 24:
        trimmed = payload[: len(payload) - len(payload) % 3]
        as_bytes = np.frombuffer(trimmed, dtype=np.uint8).reshape(-1, 3)
        raw = (
            as_bytes[:, 0].astype(np.int32)
            | (as_bytes[:, 1].astype(np.int32) << 8)
            | (as_bytes[:, 2].astype(np.int32) << 16)
        )
        raw = np.where(raw >= 1 << 23, raw - (1 << 24), raw)
        samples = raw.astype(np.float64) / float(1 << 23)
    else:
        raise UnsupportedFormatError(f"{path}: {bits}-bit integer PCM (only 8/16/24)")

    if channels == 2:
        samples = samples[: len(samples) - len(samples) % 2].reshape(-1, 2).mean(axis=1)

    return AudioBuffer(samples=samples, sample_rate=sample_rate)


def trim(audio: AudioBuffer, start: float, end: float) -> AudioBuffer:
    """Cut ``[start, end)`` seconds out of a buffer, with zero acting as "open".

    (0, 0) returns the whole buffer, (0, e) the head up to ``e``, (s, 0) the
    tail from ``s``; boundaries are rounded to the nearest sample and ``end``
    is clamped to the buffer duration.

    Raises:
        InvalidRangeError: start > end (both nonzero) or start >= duration.
    """
    if start < 0 or end < 0:
        raise InvalidRangeError(f"negative trim bounds ({start}, {end})")
    duration = audio.duration_seconds
    if start != 0 and end != 0 and start > end:
        raise InvalidRangeError(f"start {start} > end {end}")
    if start != 0 and start >= duration:
        raise InvalidRangeError(f"start {start} >= duration {duration}")

    if start == 0 and end == 0:
        return audio
    end_eff = duration if end == 0 else min(end, duration)
    i = int(round(start * audio.sample_rate))
    j = int(round(end_eff * audio.sample_rate))
    return AudioBuffer(samples=audio.samples[i:j], sample_rate=audio.sample_rate)


def gen_tone(spec: list[tuple[float, float, float]], sample_rate: int) -> AudioBuffer:
    """Synthesize concatenated sine segments from (frequency, duration, amplitude) triples.

    Each segment restarts at phase zero: s[n] = amp * sin(2*pi*f*n/rate).

    Raises:
        AliasedFrequencyError: any frequency at or above sample_rate / 2.
        ValueError: non-positive duration or amplitude outside [0, 1].
    """
    nyquist = sample_rate / 2.0
    pieces = []
    for freq, dur, amp in spec:
        if freq >= nyquist:
            raise AliasedFrequencyError(f"{freq} Hz >= Nyquist {nyquist} Hz")
        if dur <= 0:
            raise ValueError(f"segment duration must be positive, got {dur}")
        if not 0.0 <= amp <= 1.0:
            raise ValueError(f"amplitude must be in [0, 1], got {amp}")
        n = int(round(dur * sample_rate))
        t = np.arange(n, dtype=np.float64)
        pieces.append(amp * np.sin(2.0 * math.pi * freq * t / sample_rate))
    samples = np.concatenate(pieces) if pieces else np.zeros(0)
    return AudioBuffer(samples=samples, sample_rate=sample_rate)


def save_wav(audio: AudioBuffer, path) -> None:
    """Write a buffer as 16-bit mono PCM WAV.

    Round-tripping through load_audio reproduces each sample to within one
    quantization step (1/32768).
    """
    quantized = np.clip(np.rint(audio.samples * 32768.0), -32768, 32767).astype("<i2")
    payload = quantized.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        _PCM_INT,
        1,
        audio.sample_rate,
        audio.sample_rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    Path(path).write_bytes(header + payload)
