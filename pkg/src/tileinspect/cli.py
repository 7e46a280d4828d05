"""Command-line front end.

Subcommands: ``dwt``, ``inspect``, ``batch`` and ``synth``.  Exit status is 0
on success (or an OK verdict), 1 for a DEFECTIVE verdict from ``inspect``, 2
for usage errors and 3 for bad or unreadable data.  Reports go to stdout,
diagnostics and timing to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import EmptyInputError, TileInspectError
from .imageio import load_manifest, load_pgm, save_pgm, save_pyramid
from .inspection import InspectConfig, Inspector, Verdict, classify
from .metrics import LabeledVerdict, calibrate_threshold, confusion
from .synth import MANIFEST_NAME, CorpusSpec, generate_corpus
from .wavelet import decompose

EXIT_OK = 0
EXIT_DEFECTIVE = 1
EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    """Fixed six decimals with trailing zeros dropped (``0`` stays ``0``)."""
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _emit(args, text: str, record: dict) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def _read_image(path) -> np.ndarray:
    return load_pgm(Path(path).read_bytes())


def cmd_dwt(args) -> int:
    img = _read_image(args.input)
    pyr = decompose(img, args.levels, pad=args.pad)
    out = Path(args.out) if args.out else Path(args.input).with_suffix(".hdwt")
    out.write_bytes(save_pyramid(pyr))
    ll_rows, ll_cols = pyr.approximation.shape
    record = {
        "source": f"{pyr.source_rows}x{pyr.source_cols}",
        "levels": pyr.levels,
        "matrices": pyr.matrix_count,
        "ll": f"{ll_rows}x{ll_cols}",
        "energy": pyr.energy(),
        "detail_energy": pyr.detail_energy(),
        "padded": pyr.padded,
        "out": str(out),
    }
    _emit(args, (
        f"source={record['source']} levels={pyr.levels} matrices={pyr.matrix_count} "
        f"ll={record['ll']} energy={_fmt(record['energy'])} "
        f"detail_energy={_fmt(record['detail_energy'])} out={out}"
    ), record)
    return EXIT_OK


def cmd_inspect(args) -> int:
    reference = _read_image(args.reference)
    test = _read_image(args.test)
    config = InspectConfig(
        levels=args.levels,
        distance_threshold=args.threshold,
        map_coeff_threshold=args.map_threshold if args.map else None,
        pad_enabled=args.pad,
    )
    result = Inspector(reference, config).inspect(test)
    if args.map:
        Path(args.map).write_bytes(save_pgm(result.defect_map_fullres * 255.0))
    record = {"distance": result.distance, "verdict": result.verdict.value}
    _emit(args, f"distance={_fmt(result.distance)} verdict={result.verdict}", record)
    return EXIT_OK if result.verdict is Verdict.OK else EXIT_DEFECTIVE


def _load_batch(args):
    """Read the manifest and every image, reporting all failures together."""
    manifest_path = Path(args.manifest)
    manifest = load_manifest(manifest_path.read_bytes(), args.reference)
    if not manifest.entries:
        raise EmptyInputError(f"EmptyInput: manifest {manifest_path} has no entries")
    reference = _read_image(args.reference)
    base = manifest_path.parent
    images, problems = [], []
    for entry in manifest.entries:
        path = Path(entry.path)
        if not path.is_absolute():
            path = base / path
        try:
            img = _read_image(path)
        except (OSError, TileInspectError) as exc:
            problems.append(f"{entry.path}: {exc}")
            continue
        if img.shape != reference.shape:
            problems.append(
                f"{entry.path}: size {img.shape[0]}x{img.shape[1]} does not match "
                f"reference {reference.shape[0]}x{reference.shape[1]}")
            continue
        images.append(img)
    if problems:
        for line in problems:
            print(f"error: {line}", file=sys.stderr)
        raise TileInspectError(f"{len(problems)} of {len(manifest.entries)} images unusable")
    return manifest, reference, images


def cmd_batch(args) -> int:
    started = time.perf_counter()
    manifest, reference, images = _load_batch(args)
    inspector = Inspector(reference, InspectConfig(levels=args.levels, pad_enabled=args.pad))
    jobs = max(1, args.jobs)
    if jobs == 1:
        distances = [inspector.inspect(img).distance for img in images]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            distances = [r.distance for r in pool.map(inspector.inspect, images)]

    if args.calibrate:
        clean = [d for d, e in zip(distances, manifest.entries) if e.label is Verdict.OK]
        threshold = calibrate_threshold(clean, args.margin)
    else:
        threshold = args.threshold
    config = InspectConfig(levels=args.levels, distance_threshold=threshold)
    verdicts = [
        LabeledVerdict(e.path, e.label, classify(d, config), d)
        for e, d in zip(manifest.entries, distances)
    ]
    report = confusion(verdicts)

    record = dict(report.as_dict(), ca_percent=round(report.ca_percent, 1),
                  threshold=threshold, calibrated=bool(args.calibrate), levels=args.levels)
    lines = []
    if args.verbose:
        lines += [f"{v.image_id} truth={v.truth} predicted={v.predicted} "
                  f"distance={_fmt(v.distance)}" for v in verdicts]
    source = "calibrated" if args.calibrate else "fixed"
    lines.append(f"threshold={_fmt(threshold)} ({source}) levels={args.levels}")
    lines.append(report.table())
    lines.append(" ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                          for k, v in record.items()))
    _emit(args, "\n".join(lines), record)
    print(f"elapsed={time.perf_counter() - started:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args) -> int:
    started = time.perf_counter()
    try:
        spec = CorpusSpec(size=args.size, count=args.count, defect_ratio=args.defect_ratio,
                          noise_sigma=args.noise_sigma, seed=args.seed, levels=args.levels)
        spec.check_size()
    except (ValueError, TileInspectError) as exc:
        raise UsageError(str(exc)) from None
    manifest = generate_corpus(spec, args.out)
    n_def = sum(e.label is Verdict.DEFECTIVE for e in manifest.entries)
    manifest_path = Path(args.out) / MANIFEST_NAME
    record = {
        "manifest": str(manifest_path),
        "reference": str(Path(args.out) / manifest.reference_path),
        "ok": len(manifest.entries) - n_def,
        "defective": n_def,
    }
    _emit(args, (
        f"manifest={record['manifest']} reference={record['reference']}\n"
        f"ok={record['ok']} defective={record['defective']}"
    ), record)
    print(f"elapsed={time.perf_counter() - started:.3f}s", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tileinspect",
        description="Haar-wavelet defect inspection for grayscale tile images.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, levels=True):
        p.add_argument("--json", action="store_true", help="emit one JSON record instead of text")
        if levels:
            p.add_argument("--levels", "-k", type=_positive_int, default=3,
                           help="decomposition depth (default: 3)")

    p = sub.add_parser("dwt", help="decompose a PGM image into an HDWT pyramid file")
    p.add_argument("input", help="input PGM")
    p.add_argument("--out", "-o", help="output HDWT path (default: input with .hdwt suffix)")
    p.add_argument("--pad", action="store_true", help="edge-pad dimensions not divisible by 2**k")
    common(p)
    p.set_defaults(func=cmd_dwt)

    p = sub.add_parser("inspect", help="compare one test image against a reference")
    p.add_argument("--reference", "-r", required=True)
    p.add_argument("--test", "-t", required=True)
    p.add_argument("--threshold", type=_non_negative, default=0.0,
                   help="largest distance still judged OK (default: 0)")
    p.add_argument("--map", help="write a full-resolution defect map PGM here")
    p.add_argument("--map-threshold", type=_non_negative, default=0.0,
                   help="per-coefficient cutoff for the defect map (default: 0)")
    p.add_argument("--pad", action="store_true")
    common(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("batch", help="inspect every image in a manifest and report accuracy")
    p.add_argument("--manifest", "-m", required=True, help="CSV with header path,label")
    p.add_argument("--reference", "-r", required=True, help="defect-free reference PGM")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--threshold", type=_non_negative, default=0.0)
    mode.add_argument("--calibrate", action="store_true",
                      help="derive the threshold from the OK-labeled entries")
    p.add_argument("--margin", type=_non_negative, default=0.05,
                   help="calibration margin over the largest clean distance (default: 0.05)")
    p.add_argument("--jobs", "-j", type=_positive_int, default=1)
    p.add_argument("--pad", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true", help="list every image's result")
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("synth", help="generate a labeled synthetic tile corpus")
    p.add_argument("--out", "-o", required=True, help="output directory")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--count", type=int, default=85)
    p.add_argument("--defect-ratio", type=float, default=0.5)
    p.add_argument("--noise-sigma", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (TileInspectError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())
