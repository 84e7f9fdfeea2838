"""Command-line interface: build catalogs, match snippets, export error curves.

Exit codes are a stable contract:
    0  success (for ``match``: rank-1 verdict is MATCH)
    1  unreadable input, I/O failure, or invalid options
    2  empty corpus / no eligible track / segment too long
    3  ``match`` ran but the rank-1 verdict is NO-MATCH
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .audio_io import gen_tone, load_audio, save_wav, trim
from .catalog import build_catalog, load_catalog, query_catalog, save_catalog
from .errors import (
    EmptyCorpusError,
    NoEligibleTrackError,
    SegmentTooLongError,
    SpecmatchError,
)
from .matcher import MatchConfig, TimeMapping, curve_to_csv, error_curve
from .spectro import SpectroConfig, stft_magnitude

DEFAULT_CONTRAST_THRESHOLD = 0.7


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _match_config(args) -> MatchConfig:
    mapping = TimeMapping.PAPER_RESCALE if args.paper_rescale else TimeMapping.EXACT_START
    return MatchConfig(step=args.step, time_mapping=mapping, normalize=not args.no_normalize)


def _write_csv(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(text)


def cmd_build(args) -> int:
    try:
        config = SpectroConfig(window_len=args.window, hop=args.hop, bins=args.bins)
    except ValueError as exc:
        return _fail(str(exc), 1)
    try:
        catalog, _warnings = build_catalog(args.directory, config)
        save_catalog(catalog, args.output)
    except EmptyCorpusError as exc:
        return _fail(str(exc), 2)
    except (SpecmatchError, OSError) as exc:
        return _fail(str(exc), 1)
    for track in catalog.tracks:
        print(f"{track.name}  {track.duration_seconds:.6f}  {track.matrix.frames}")
    return 0


def cmd_match(args) -> int:
    try:
        cfg = _match_config(args)
        catalog = load_catalog(args.db)
        query = load_audio(args.query)
        if args.start != 0.0 or args.end != 0.0:
            query = trim(query, args.start, args.end)
    except ValueError as exc:
        return _fail(str(exc), 1)
    except (SpecmatchError, OSError) as exc:
        return _fail(str(exc), 1)

    try:
        ranked = query_catalog(catalog, query, cfg)
    except NoEligibleTrackError as exc:
        return _fail(str(exc), 2)
    except EmptyCorpusError as exc:
        return _fail(str(exc), 2)
    except (SpecmatchError, OSError) as exc:
        return _fail(str(exc), 1)

    name_width = max([len("track")] + [len(name) for name, _ in ranked])
    print(f"{'rank':>4}  {'track':<{name_width}}  {'best_time':>12}  "
          f"{'best_error':>14}  {'contrast':>10}  verdict")
    for rank, (name, result) in enumerate(ranked, start=1):
        verdict = "MATCH" if result.contrast < args.threshold else "NO-MATCH"
        print(f"{rank:>4}  {name:<{name_width}}  {result.best_time:>12.6f}  "
              f"{result.best_error:>14.6f}  {result.contrast:>10.6f}  {verdict}")

    if args.curves_out is not None:
        out_dir = Path(args.curves_out)
        out_dir.mkdir(parents=True, exist_ok=True)
        query_spec = stft_magnitude(query, catalog.config)
        for track in catalog.tracks:
            if track.matrix.frames < query_spec.frames:
                continue
            curve = error_curve(track.matrix, query_spec, cfg)
            _write_csv(out_dir / f"{track.name}.csv", curve_to_csv(curve))

    top_verdict = ranked[0][1].contrast < args.threshold
    return 0 if top_verdict else 3


def cmd_curve(args) -> int:
    try:
        cfg = _match_config(args)
        full = stft_magnitude(load_audio(args.full))
        segment = stft_magnitude(load_audio(args.segment))
    except ValueError as exc:
        return _fail(str(exc), 1)
    except (SpecmatchError, OSError) as exc:
        return _fail(str(exc), 1)
    try:
        curve = error_curve(full, segment, cfg)
    except SegmentTooLongError as exc:
        return _fail(str(exc), 2)
    try:
        _write_csv(Path(args.output), curve_to_csv(curve))
    except OSError as exc:
        return _fail(str(exc), 1)
    i = int(curve.errors.argmin())
    print(f"min={curve.errors[i]:.6f} at t={curve.times[i]:.6f}")
    return 0


def _parse_tone_spec(text: str) -> list[tuple[float, float, float]]:
    triples = []
    for part in text.split(","):
        part = part.strip()
        fields = part.split(":")
        if len(fields) != 3:
            raise ValueError(f"bad tone triple '{part}': expected freq:dur:amp")
        try:
            triples.append((float(fields[0]), float(fields[1]), float(fields[2])))
        except ValueError:
            raise ValueError(f"bad tone triple '{part}': non-numeric field") from None
    if not triples:
        raise ValueError("empty tone spec")
    return triples


def cmd_gen(args) -> int:
    try:
        triples = _parse_tone_spec(args.spec)
        audio = gen_tone(triples, args.rate)
        save_wav(audio, args.output)
    except (ValueError, SpecmatchError, OSError) as exc:
        return _fail(str(exc), 1)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmatch",
        description="Match an audio snippet against a catalog by sliding-window "
        "spectrogram comparison (volume-independent).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-db", help="precompute spectrograms for a directory of WAVs")
    p.add_argument("directory", help="directory of WAV files")
    p.add_argument("-o", "--output", required=True, help="catalog file to write (.spmc)")
    p.add_argument("--window", type=int, default=4096, help="analysis window in samples")
    p.add_argument("--hop", type=int, default=512, help="stride between windows in samples")
    p.add_argument("--bins", type=int, default=1024, help="frequency bins kept per frame")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("match", help="rank catalog tracks against a query snippet")
    p.add_argument("query", help="query WAV file")
    p.add_argument("--db", required=True, help="catalog file built with build-db")
    p.add_argument("--step", type=int, default=1, help="window stride in frames")
    p.add_argument("--paper-rescale", action="store_true",
                   help="report times on the legacy rescaled axis instead of window starts")
    p.add_argument("--no-normalize", action="store_true",
                   help="compare raw magnitudes (volume-dependent)")
    p.add_argument("--start", type=float, default=0.0,
                   help="trim query from this second (0 = from the beginning)")
    p.add_argument("--end", type=float, default=0.0,
                   help="trim query up to this second (0 = to the end)")
    p.add_argument("--threshold", type=float, default=DEFAULT_CONTRAST_THRESHOLD,
                   help="contrast below this counts as MATCH")
    p.add_argument("--curves-out", metavar="DIR",
                   help="also write one error-curve CSV per track into DIR")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("curve", help="error curve of one snippet against one track")
    p.add_argument("full", help="full track WAV")
    p.add_argument("segment", help="query snippet WAV")
    p.add_argument("--step", type=int, default=1, help="window stride in frames")
    p.add_argument("--paper-rescale", action="store_true",
                   help="report times on the legacy rescaled axis instead of window starts")
    p.add_argument("--no-normalize", action="store_true",
                   help="compare raw magnitudes (volume-dependent)")
    p.add_argument("-o", "--output", required=True, help="CSV file to write")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("gen-tone", help="synthesize a test WAV from freq:dur:amp triples")
    p.add_argument("--spec", required=True,
                   help="comma-separated freq:dur:amp triples, e.g. '440:0.5:1.0,494:0.5:1.0'")
    p.add_argument("--rate", type=int, default=44100, help="sample rate in Hz")
    p.add_argument("-o", "--output", required=True, help="WAV file to write")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
