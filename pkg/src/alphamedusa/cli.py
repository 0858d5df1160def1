"""Command line front end.

Two modes:

    alphamedusa --generate "20,4,10,0" --seed 7 --output points.traj
    alphamedusa --input points.traj --alpha-sq 9/4 --output run.medusa \
        --stats run.json --figures figs/ --probes 25 --seed 3

Exit codes: 0 success, 1 usage or file/format trouble, 2 degenerate
input, 3 a self-check probe disagreed with recomputation.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from .dataset import (
    ProbeMismatch,
    generate,
    load_trajectory_file,
    run_simulation,
)
from .engine import EngineConfig
from .errors import DegeneracyError, FormatError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_PROBE = 3


class UsageError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which we reserve
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="alphamedusa",
        description=(
            "Track the alpha complex of moving points exactly and emit "
            "the resulting space-time cell complex."
        ),
    )
    p.add_argument("--input", help="trajectory file to simulate")
    p.add_argument(
        "--alpha-sq",
        help="squared radius of the alpha complex, an exact rational like 9/4",
    )
    p.add_argument(
        "--output",
        help="destination for the medusa table or generated file (default stdout)",
    )
    p.add_argument("--stats", help="write run statistics as JSON to this file")
    p.add_argument(
        "--figures",
        metavar="DIR",
        help="also render barcode/counters/activity PNGs into DIR",
    )
    p.add_argument(
        "--probes",
        type=int,
        default=0,
        metavar="N",
        help="cross-check the kinetic state against recomputation at N random times",
    )
    p.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for --generate or for the probe schedule",
    )
    p.add_argument(
        "--generate",
        metavar="N,BENDS,BOX,SORTING",
        help=(
            "emit a synthetic trajectory file instead of simulating; "
            "SORTING=1 picks the two-population drift"
        ),
    )
    p.add_argument(
        "--digits",
        type=int,
        default=12,
        help="significant digits for decimal approximations (default 12)",
    )
    p.add_argument(
        "--no-prune",
        action="store_true",
        help="maintain radius certificates for every simplex, not just candidates",
    )
    p.add_argument(
        "--deg10-triangle",
        action="store_true",
        help="use the unreduced degree-10 triangle radius polynomial",
    )
    p.add_argument(
        "--no-filter",
        action="store_true",
        help="isolate roots of every certificate without the sign-based filter",
    )
    p.add_argument(
        "--no-cache", action="store_true", help="disable the root cache"
    )
    return p


def _parse_generate_arg(arg: str):
    parts = [s.strip() for s in arg.split(",")]
    if len(parts) != 4:
        raise FormatError(
            "--generate wants 'n,bends,box,sorting' (e.g. '20,4,10,0')"
        )
    try:
        n, bends = int(parts[0]), int(parts[1])
        box = Fraction(parts[2])
        sorting = parts[3].lower() in ("1", "true", "yes")
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad --generate value {arg!r}") from None
    return n, bends, box, sorting


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    if args.generate:
        n, bends, box, sorting = _parse_generate_arg(args.generate)
        tf = generate(args.seed, n, bends, box, sorting)
        _write(tf.text(), args.output)
        return EXIT_OK

    if not args.input or not args.alpha_sq:
        raise UsageError("--input and --alpha-sq are required (or use --generate)")
    try:
        alpha_sq = Fraction(args.alpha_sq)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--alpha-sq: not a rational: {args.alpha_sq!r}") from None

    tf = load_trajectory_file(args.input)
    config = EngineConfig(
        prune_certificates=not args.no_prune,
        degree6_triangle=not args.deg10_triangle,
        descartes_filter=not args.no_filter,
        root_cache=not args.no_cache,
    )
    started = time.perf_counter()
    result = run_simulation(
        tf.trajectories,
        alpha_sq,
        config,
        probes=args.probes,
        probe_seed=args.seed,
        digits=args.digits,
    )
    elapsed = time.perf_counter() - started

    _write(result.medusa_text, args.output)
    if args.stats:
        _write(result.stats_text, args.stats)
    if args.figures:
        from .report import render_report

        for path in render_report(result.engine, result.medusa, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    counters = result.engine.stats()
    print(
        f"{len(result.medusa)} cells, "
        f"{counters.flips + counters.radius_events + counters.bending_events + counters.insertions + counters.deletions} events, "
        f"{len(result.probe_times)} probes in {elapsed:.3f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except UsageError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneracyError as e:
        print(f"degenerate input: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ProbeMismatch as e:
        print(f"probe mismatch: {e}", file=sys.stderr)
        return EXIT_PROBE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
