"""Command-line surface: exit codes, output formats, determinism."""

import subprocess
import sys

import numpy as np
import pytest

from specmatch import AudioBuffer, gen_tone, load_audio, save_wav, trim
from specmatch.cli import main

from conftest import QUERY_SAMPLES, QUERY_START, SR


@pytest.fixture(scope="module")
def query_wav(corpus_dir, tmp_path_factory):
    """Frame-aligned 2 s slice of melody_a, cut from the decoded WAV."""
    track = load_audio(corpus_dir / "melody_a.wav")
    path = tmp_path_factory.mktemp("q") / "query.wav"
    save_wav(
        AudioBuffer(track.samples[QUERY_START : QUERY_START + QUERY_SAMPLES], SR), path
    )
    return path


@pytest.fixture(scope="module")
def short_wavs(tmp_path_factory):
    """Sub-second WAVs for fast curve runs under the default config."""
    d = tmp_path_factory.mktemp("short")
    full = gen_tone([(440, 0.3, 0.9), (550, 0.3, 0.9)], SR)
    save_wav(full, d / "full.wav")
    save_wav(AudioBuffer(full.samples[: int(0.2 * SR)], SR), d / "seg.wav")
    return d


class TestBuildDb:
    def test_three_tracks(self, corpus_dir, tmp_path, capsys):
        code = main(["build-db", str(corpus_dir), "-o", str(tmp_path / "db.spmc")])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3
        assert [ln.split()[0] for ln in lines] == ["melody_a", "melody_b", "melody_c"]
        assert lines[0].split()[1] == "22.000000"

    def test_empty_dir_exit_2(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["build-db", str(empty), "-o", str(tmp_path / "db.spmc")]) == 2

    def test_hop_larger_than_window_exit_1(self, corpus_dir, tmp_path, capsys):
        code = main(
            ["build-db", str(corpus_dir), "-o", str(tmp_path / "db.spmc"),
             "--hop", "8192", "--window", "4096"]
        )
        assert code == 1
        assert "hop" in capsys.readouterr().err

    def test_missing_dir_exit_1(self, tmp_path):
        assert main(["build-db", str(tmp_path / "nope"), "-o", str(tmp_path / "d")]) == 1


class TestMatch:
    def test_sliced_query_matches_source(self, catalog_file, query_wav, capsys):
        code = main(["match", str(query_wav), "--db", str(catalog_file), "--step", "10"])
        assert code == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0].split() == ["rank", "track", "best_time", "best_error",
                                    "contrast", "verdict"]
        rank1 = lines[1].split()
        assert rank1[0] == "1"
        assert rank1[1] == "melody_a"
        assert rank1[-1] == "MATCH"

    def test_noise_query_exit_3(self, catalog_file, noise_query, tmp_path, capsys):
        noise_path = tmp_path / "noise.wav"
        save_wav(noise_query, noise_path)
        code = main(["match", str(noise_path), "--db", str(catalog_file), "--step", "10"])
        assert code == 3
        for line in capsys.readouterr().out.strip().splitlines()[1:]:
            assert line.split()[-1] == "NO-MATCH"

    def test_start_end_equals_pretrimmed(self, catalog_file, corpus_dir,
                                         tmp_path, capsys):
        src = corpus_dir / "melody_a.wav"
        code = main(["match", str(src), "--db", str(catalog_file), "--step", "10",
                     "--start", "10", "--end", "12"])
        assert code == 0
        flagged = capsys.readouterr().out

        pre = tmp_path / "pretrimmed.wav"
        save_wav(trim(load_audio(src), 10, 12), pre)
        assert main(["match", str(pre), "--db", str(catalog_file), "--step", "10"]) == 0
        assert capsys.readouterr().out == flagged

    def test_query_longer_than_tracks_exit_2(self, catalog_file, tmp_path):
        long_path = tmp_path / "long.wav"
        save_wav(gen_tone([(440, 25.0, 0.5)], SR), long_path)
        assert main(["match", str(long_path), "--db", str(catalog_file)]) == 2

    def test_unreadable_inputs_exit_1(self, catalog_file, query_wav, tmp_path):
        assert main(["match", str(tmp_path / "no.wav"), "--db", str(catalog_file)]) == 1
        assert main(["match", str(query_wav), "--db", str(tmp_path / "no.spmc")]) == 1
        bad = tmp_path / "bad.spmc"
        bad.write_bytes(b"JUNKJUNKJUNKJUNKJUNKJUNK")
        assert main(["match", str(query_wav), "--db", str(bad)]) == 1

    def test_deterministic_output_and_curves(self, catalog_file, query_wav,
                                             tmp_path, capsys):
        outs, csvs = [], []
        for run in ("one", "two"):
            d = tmp_path / run
            code = main(["match", str(query_wav), "--db", str(catalog_file),
                         "--step", "10", "--curves-out", str(d)])
            assert code == 0
            outs.append(capsys.readouterr().out)
            assert sorted(p.name for p in d.iterdir()) == [
                "melody_a.csv", "melody_b.csv", "melody_c.csv"]
            csvs.append([(d / f"melody_{s}.csv").read_bytes() for s in "abc"])
        assert outs[0] == outs[1]
        assert csvs[0] == csvs[1]
        header = csvs[0][0].split(b"\n", 1)[0]
        assert header == b"time_s,error"
        assert b"\r" not in csvs[0][0]


class TestCurve:
    def test_self_curve_single_zero_row(self, short_wavs, tmp_path, capsys):
        out_csv = tmp_path / "self.csv"
        code = main(["curve", str(short_wavs / "full.wav"),
                     str(short_wavs / "full.wav"), "-o", str(out_csv)])
        assert code == 0
        assert out_csv.read_text() == "time_s,error\n0.000000,0.000000\n"
        assert capsys.readouterr().out == "min=0.000000 at t=0.000000\n"

    def test_row_count_formula(self, short_wavs, tmp_path):
        out_csv = tmp_path / "rows.csv"
        assert main(["curve", str(short_wavs / "full.wav"),
                     str(short_wavs / "seg.wav"), "-o", str(out_csv)]) == 0
        full_frames = (int(0.6 * SR) - 4096) // 512 + 1
        seg_frames = (int(0.2 * SR) - 4096) // 512 + 1
        rows = out_csv.read_text().strip().splitlines()
        assert len(rows) - 1 == (full_frames - seg_frames) + 1

    def test_paper_rescale_shifts_minimum(self, corpus_dir, query_wav, tmp_path, capsys):
        out_csv = tmp_path / "paper.csv"
        code = main(["curve", str(corpus_dir / "melody_a.wav"), str(query_wav),
                     "--paper-rescale", "-o", str(out_csv)])
        assert code == 0
        summary = capsys.readouterr().out
        t = float(summary.split("at t=")[1])
        assert t == pytest.approx(11.0, abs=0.25)

    def test_segment_too_long_exit_2(self, short_wavs, tmp_path):
        assert main(["curve", str(short_wavs / "seg.wav"),
                     str(short_wavs / "full.wav"), "-o", str(tmp_path / "x.csv")]) == 2

    def test_missing_input_exit_1(self, short_wavs, tmp_path):
        assert main(["curve", str(tmp_path / "no.wav"),
                     str(short_wavs / "seg.wav"), "-o", str(tmp_path / "x.csv")]) == 1


class TestGenTone:
    def test_writes_wav(self, tmp_path):
        out = tmp_path / "tone.wav"
        code = main(["gen-tone", "--spec", "440:0.5:1.0,494:0.5:1.0",
                     "--rate", "44100", "-o", str(out)])
        assert code == 0
        buf = load_audio(out)
        assert len(buf) == 44100
        assert buf.sample_rate == 44100

    def test_aliased_frequency_exit_1(self, tmp_path, capsys):
        code = main(["gen-tone", "--spec", "30000:1:1", "--rate", "44100",
                     "-o", str(tmp_path / "x.wav")])
        assert code == 1

    def test_empty_spec_exit_1(self, tmp_path):
        assert main(["gen-tone", "--spec", "", "-o", str(tmp_path / "x.wav")]) == 1

    def test_bad_triple_named_in_error(self, tmp_path, capsys):
        code = main(["gen-tone", "--spec", "440:0.5:1.0,oops",
                     "-o", str(tmp_path / "x.wav")])
        assert code == 1
        assert "oops" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = tmp_path / "cli.wav"
    proc = subprocess.run(
        [sys.executable, "-m", "specmatch", "gen-tone", "--spec", "440:0.1:0.5",
         "-o", str(out)],
        capture_output=True,
    )
    assert proc.returncode == 0
    assert out.exists()
