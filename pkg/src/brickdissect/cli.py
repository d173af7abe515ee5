"""Command-line frontend: map | invmap | pieces | svg | verify | bench.

Exit codes: 0 success, 1 malformed input (unreadable files, bad CSV/JSON,
arity mismatches, bad flags), 2 volume or domain violations (non-unit
volume, points outside the cube/brick, invalid aspect).  Domain
diagnostics name the offending input line on stderr.

Points are accepted and emitted in the user's axis order; the sorting
permutation is applied internally.  Piece labels u are reported in the
sorted-axis convention.  Numbers are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import selfcheck
from .core import DissectionMap, make_brick_spec, normalize_volume
from .errors import (
    DimensionMismatch,
    DissectionError,
    InvalidAspect,
    NonPositiveLength,
    OutOfDomain,
    VolumeNotUnit,
)
from .montucla2d import enumerate_pieces, fuzzy_ceil, piece_count_bound
from .svg import MODES, render_dissection_svg

__all__ = ["main"]

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_DOMAIN = 2


class _MalformedInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # The spec reserves exit 2 for domain violations, so usage errors exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return f"{float(value):.12g}"


def _parse_lengths(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise _MalformedInput(f"bad --lengths value: {exc}") from None
    if not values:
        raise _MalformedInput("--lengths is empty")
    return values


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _MalformedInput(f"cannot read {path}: {exc}") from None


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_points(path: str, fmt: str, lengths):
    """Returns (points array (m, n), lengths, format).  Arity is validated."""
    text = _read_text(path)
    if fmt == "json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _MalformedInput(f"bad JSON in {path}: {exc}") from None
        if not isinstance(payload, dict) or "points" not in payload:
            raise _MalformedInput('JSON input must be an object with a "points" array')
        if lengths is None:
            lengths = payload.get("lengths")
            if lengths is None:
                raise _MalformedInput('no --lengths given and no "lengths" key in JSON input')
        rows = payload["points"]
    else:
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rows.append([float(part) for part in line.split(",")])
            except ValueError:
                raise _MalformedInput(f"line {lineno}: not a comma-separated point") from None
        if lengths is None:
            raise _MalformedInput("--lengths is required for CSV input")
    if not rows:
        raise _MalformedInput("no points in input")
    n = len(lengths)
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise _MalformedInput(
                f"line {i}: point has {len(row)} coordinates, lengths have {n}"
            )
    try:
        points = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise _MalformedInput(f"bad point data: {exc}") from None
    return points, [float(v) for v in lengths], fmt


def _emit_points(path: str, fmt: str, lengths, points: np.ndarray, labels: np.ndarray) -> None:
    if fmt == "json":
        payload = {
            "lengths": [float(_fmt(v)) for v in lengths],
            "points": [[float(_fmt(v)) for v in row] for row in points],
            "labels": [[int(v) for v in row] for row in labels],
        }
        _write_text(path, json.dumps(payload, indent=2) + "\n")
    else:
        lines = [
            ",".join(_fmt(v) for v in point) + "," + ",".join(str(int(v)) for v in label)
            for point, label in zip(points, labels)
        ]
        _write_text(path, "\n".join(lines) + "\n")


def _make_spec(args, lengths):
    if args.normalize:
        lengths = normalize_volume(lengths)
    return make_brick_spec(lengths)


def _cmd_map(args) -> int:
    lengths = _parse_lengths(args.lengths) if args.lengths else None
    points, lengths, fmt = _load_points(args.points_in, args.format, lengths)
    spec = _make_spec(args, lengths)
    dmap = DissectionMap(spec)
    x_sorted = points[:, spec.perm]
    image = dmap.forward(x_sorted)
    _emit_points(args.points_out, fmt, lengths, image.c, image.u)
    return EXIT_OK


def _cmd_invmap(args) -> int:
    lengths = _parse_lengths(args.lengths) if args.lengths else None
    points, lengths, fmt = _load_points(args.points_in, args.format, lengths)
    spec = _make_spec(args, lengths)
    dmap = DissectionMap(spec)
    x_sorted, u = dmap.inverse(points)
    inv_perm = np.argsort(spec.perm)
    x_user = x_sorted[:, inv_perm]
    _emit_points(args.points_out, fmt, lengths, x_user, u)
    return EXIT_OK


def _cmd_pieces(args) -> int:
    pieces = enumerate_pieces(args.aspect)
    bound = piece_count_bound(args.aspect)
    coarse = fuzzy_ceil(args.aspect) + 2
    print(f"aspect: {_fmt(args.aspect)}")
    print(f"pieces: {len(pieces)}")
    print(f"bound 2+ceil(sqrt(a^2-1)): {bound}")
    print(f"bound ceil(a)+2: {coarse}")
    for piece in pieces:
        vertices = "; ".join(f"({_fmt(x)}, {_fmt(y)})" for x, y in piece.polygon_in_rect)
        print(f"piece u=({piece.u[0]},{piece.u[1]}) area={_fmt(piece.area)} vertices: {vertices}")
    return EXIT_OK


def _cmd_svg(args) -> int:
    document = render_dissection_svg(args.aspect, args.mode)
    _write_text(args.out, document)
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = selfcheck.run_all(n=args.n, trials=args.trials, seed=args.seed)
    all_passed = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        all_passed &= result.passed
        print(f"{status} {result.name}: {result.detail}")
    return EXIT_OK if all_passed else EXIT_MALFORMED


def _cmd_bench(args) -> int:
    sizes = []
    if args.sizes.strip():
        try:
            sizes = [int(part) for part in args.sizes.split(",") if part.strip() != ""]
        except ValueError as exc:
            raise _MalformedInput(f"bad --sizes value: {exc}") from None
    if not sizes:
        raise _MalformedInput("--sizes is empty; give a comma-separated list of dimensions")
    if any(n < 1 for n in sizes):
        raise _MalformedInput("--sizes entries must be positive")
    result = bench_mod.run_benchmark(sizes, points_per_n=args.points_per_n, seed=args.seed)
    sys.stdout.write(result.csv())
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brickdissect", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_point_command(name, help_text, handler):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("points_in", help="input file of points, or - for stdin")
        p.add_argument("points_out", help="output file, or - for stdout")
        p.add_argument("--lengths", help="comma-separated brick side lengths")
        p.add_argument("--normalize", action="store_true",
                       help="rescale lengths to unit volume before validating")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.set_defaults(handler=handler)

    add_point_command("map", "map cube points to brick points (appends labels u)", _cmd_map)
    add_point_command("invmap", "map brick points back to cube points", _cmd_invmap)

    p = sub.add_parser("pieces", help="enumerate the 2D dissection pieces")
    p.add_argument("aspect", type=float, help="rectangle aspect ratio a (>= 1)")
    p.set_defaults(handler=_cmd_pieces)

    p = sub.add_parser("svg", help="render a 2D dissection figure")
    p.add_argument("aspect", type=float, help="rectangle aspect ratio a (>= 1)")
    p.add_argument("--mode", choices=MODES, default="side-by-side")
    p.add_argument("--out", default="-", help="output SVG path, or - for stdout")
    p.set_defaults(handler=_cmd_svg)

    p = sub.add_parser("verify", help="run the seeded self-check suites")
    p.add_argument("--n", type=int, default=3, help="dimension under test")
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("bench", help="measure per-point map time across dimensions")
    p.add_argument("--sizes", default=",".join(str(n) for n in bench_mod.DEFAULT_SIZES),
                   help="comma-separated list of dimensions")
    p.add_argument("--points-per-n", type=int, default=0,
                   help="points timed per dimension (0 = adaptive)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits; keep main() callable in-process
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except OutOfDomain as exc:
        prefix = f"line {exc.point + 1}: " if exc.point is not None else ""
        print(f"{prefix}{exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (VolumeNotUnit, NonPositiveLength, InvalidAspect, DimensionMismatch) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except _MalformedInput as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED
    except DissectionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED
    except (ValueError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
