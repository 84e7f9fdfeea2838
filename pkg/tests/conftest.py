"""Shared synthetic audio fixtures.

All melodies use note frequencies centered on analysis bins
(k * 44100 / 4096 Hz) so spectral leakage stays small and frozen error
bounds hold with margin.  Expensive spectrograms and the 3-track corpus
are session-scoped; tests must not mutate them.
"""

import numpy as np
import pytest

from specmatch import (
    AudioBuffer,
    SpectroConfig,
    build_catalog,
    gen_tone,
    save_catalog,
    save_wav,
    stft_magnitude,
)

SR = 44100
NOTE_SECONDS = 2.75


def bin_freq(k: int, sample_rate: int = SR, window_len: int = 4096) -> float:
    """Frequency at the center of analysis bin k."""
    return k * sample_rate / window_len


def make_melody(note_bins, note_seconds=NOTE_SECONDS, amplitude=0.9, sample_rate=SR):
    return gen_tone(
        [(bin_freq(k, sample_rate), note_seconds, amplitude) for k in note_bins],
        sample_rate,
    )


# 8 distinct notes, all consecutive pairs unique
MELODY_BINS = [24, 27, 30, 32, 36, 40, 45, 48]
CORPUS_BINS = {
    "melody_a": [24, 27, 30, 32, 36, 40, 45, 48],
    "melody_b": [22, 25, 28, 33, 37, 41, 44, 47],
    "melody_c": [20, 26, 31, 35, 38, 42, 46, 50],
}

# frame-aligned slice start closest to 10.0 s: frame 861 -> sample 440832
QUERY_FRAME = 861
QUERY_START = QUERY_FRAME * 512
QUERY_SAMPLES = 2 * SR


@pytest.fixture(scope="session")
def melody():
    """22 s eight-note melody, amplitude 0.9, 44.1 kHz."""
    return make_melody(MELODY_BINS)


@pytest.fixture(scope="session")
def melody_spec(melody):
    return stft_magnitude(melody)


@pytest.fixture(scope="session")
def aligned_query(melody):
    """2 s slice of the melody starting on the frame grid at ~10.0 s."""
    return AudioBuffer(
        melody.samples[QUERY_START : QUERY_START + QUERY_SAMPLES], SR
    )


@pytest.fixture(scope="session")
def aligned_query_spec(aligned_query):
    return stft_magnitude(aligned_query)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Directory of three distinct melody WAVs."""
    d = tmp_path_factory.mktemp("corpus")
    for name, note_bins in CORPUS_BINS.items():
        save_wav(make_melody(note_bins), d / f"{name}.wav")
    return d


@pytest.fixture(scope="session")
def corpus_catalog(corpus_dir):
    catalog, warnings = build_catalog(corpus_dir, SpectroConfig())
    assert not warnings
    return catalog


@pytest.fixture(scope="session")
def catalog_file(corpus_catalog, tmp_path_factory):
    path = tmp_path_factory.mktemp("db") / "corpus.spmc"
    save_catalog(corpus_catalog, path)
    return path


@pytest.fixture(scope="session")
def noise_query():
    rng = np.random.default_rng(42)
    return AudioBuffer(rng.uniform(-0.5, 0.5, SR), SR)


def pytest_terminal_summary(terminalreporter):
    """One visible pass/fail line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid or "::test_criterion_" not in nodeid:
                continue
            label = nodeid.split("::test_criterion_")[1].replace("_", " ")
            number, _, rest = label.partition(" ")
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((int(number), f"{status}  criterion {number}: {rest}"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
