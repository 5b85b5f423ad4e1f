"""Command-line interface.

Usage:
    pslsearch solve --length 1023 --seed 1 --max-nse 10000000 --out run.json --log run.csv
    pslsearch verify --sequence best.seq
    pslsearch exhaustive --length 13
    pslsearch bench --length 1023 --runs 10 --max-nse 10000000

Exit codes: 0 success, 1 usage or configuration error, 2 fitness overflow,
3 I/O or file format error.
"""

from __future__ import annotations

import argparse
import math
import statistics
import sys
from pathlib import Path

from pslsearch import __version__
from pslsearch.errors import CapabilityError, ConfigurationError, FitnessOverflowError, FormatError
from pslsearch.formats import (
    append_convergence_csv,
    format_sequence,
    read_sequence,
    write_run_record,
    write_sequence,
)
from pslsearch.oracle import exhaustive_psl, verify_sequence
from pslsearch.records import (
    DEFAULT_ALPHA1,
    DEFAULT_LS_LMT,
    SearchParams,
    default_alpha2,
)
from pslsearch.search import run_search

EXIT_OK, EXIT_USAGE, EXIT_OVERFLOW, EXIT_IO = 0, 1, 2, 3

BENCH_MODES = ("two-phase", "single-alpha1", "single-alpha2")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_search_flags(p: argparse.ArgumentParser, with_length=True):
    if with_length:
        p.add_argument("--length", "-L", type=int, required=True, help="sequence length L")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    p.add_argument("--alpha1", type=int, default=DEFAULT_ALPHA1, help="phase 1 exponent (default: 4)")
    p.add_argument(
        "--alpha2",
        type=int,
        default=None,
        help="phase 2 exponent (default: 13 for L < 2^17, 11 for L < 2^18, else 10)",
    )
    p.add_argument("--ls-lmt", type=int, default=DEFAULT_LS_LMT, help="unimproved scans before a phase switch (default: 2000)")
    p.add_argument("--flip-lmt", type=int, default=None, help="random flips at a phase switch (default: min(10, L))")
    p.add_argument("--n-lmt", type=int, default=None, help="neighbors per scan (default: min(L, 1024))")
    p.add_argument("--max-nse", type=int, default=None, help="stop after this many sequence evaluations")
    p.add_argument("--max-seconds", type=float, default=None, help="stop after this much wall-clock time")
    p.add_argument("--workers", type=int, default=1, help="threads per neighborhood scan (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pslsearch", description="Two-phase search for low-PSL binary sequences")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run one search")
    _add_search_flags(p)
    p.add_argument("--init", type=Path, default=None, help="warm-start sequence file")
    p.add_argument("--out", type=Path, default=None, help="run record output (JSON)")
    p.add_argument("--best", type=Path, default=None, help="best sequence output (default: <out>.seq)")
    p.add_argument("--log", type=Path, default=None, help="convergence CSV output")

    p = sub.add_parser("verify", help="recompute PSL and merit factor of a sequence file")
    p.add_argument("--sequence", type=Path, required=True)
    p.add_argument("--histogram", action="store_true", help="also print the |C_k| histogram")

    p = sub.add_parser("exhaustive", help="optimal PSL by full enumeration (L <= 28)")
    p.add_argument("--length", "-L", type=int, required=True)

    p = sub.add_parser("bench", help="repeated seeded runs per mode")
    _add_search_flags(p)
    p.add_argument("--runs", type=int, default=10, help="seeded runs per mode, seeds seed..seed+runs-1")
    p.add_argument(
        "--mode",
        action="append",
        choices=BENCH_MODES,
        default=None,
        help="repeatable; default runs all three",
    )
    return parser


def _params(args, **overrides) -> SearchParams:
    fields = dict(
        length=args.length,
        seed=args.seed,
        flip_lmt=args.flip_lmt,
        ls_lmt=args.ls_lmt,
        n_lmt=args.n_lmt,
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        max_nse=args.max_nse,
        max_seconds=args.max_seconds,
        workers=args.workers,
    )
    fields.update(overrides)
    return SearchParams(**fields)


def cmd_solve(args) -> int:
    init = read_sequence(args.init) if args.init is not None else None
    params = _params(args, init=init)
    on_event = None
    if args.log is not None:
        args.log.unlink(missing_ok=True)
        log = args.log

        def on_event(ev):
            append_convergence_csv(log, ev)

    record = run_search(params, on_event=on_event)
    if args.out is not None:
        write_run_record(args.out, record)
    best = args.best
    if best is None and args.out is not None:
        best = args.out.with_suffix(".seq")
    if best is not None:
        write_sequence(best, record.solution_best)
    print(
        f"L={record.params.length} PSL={record.psl_best} NSE={record.nse} "
        f"MF={record.merit_factor:.3f} elapsed={record.elapsed_seconds:.2f}s"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = verify_sequence(read_sequence(args.sequence))
    flag = "yes" if rep.below_sqrt_length else "no"
    print(f"L={rep.length} PSL={rep.psl} MF={rep.merit_factor:.3f} PSL<sqrt(L): {flag}")
    if args.histogram:
        for mag, count in rep.histogram.items():
            print(f"|C_k|={mag} count={count}")
    return EXIT_OK


def cmd_exhaustive(args) -> int:
    best, witness = exhaustive_psl(args.length)
    print(f"L={args.length} PSL={best} witness={format_sequence(witness)}")
    return EXIT_OK


def bench_alphas(mode: str, alpha1: int, alpha2: int) -> tuple[int, int]:
    if mode == "single-alpha1":
        return alpha1, alpha1
    if mode == "single-alpha2":
        return alpha2, alpha2
    return alpha1, alpha2


def cmd_bench(args) -> int:
    if args.runs < 1:
        raise ConfigurationError("--runs must be at least 1")
    alpha2 = args.alpha2 if args.alpha2 is not None else default_alpha2(args.length)
    modes = args.mode or list(BENCH_MODES)
    print(f"{'mode':<14} {'a1/a2':>6} {'runs':>5} {'psl_mean':>9} {'psl_min':>8} {'psl_max':>8} {'nse_per_s':>12}")
    for mode in modes:
        a1, a2 = bench_alphas(mode, args.alpha1, alpha2)
        psls, nse, seconds = [], 0, 0.0
        for r in range(args.runs):
            rec = run_search(_params(args, seed=args.seed + r, alpha1=a1, alpha2=a2))
            psls.append(rec.psl_best)
            nse += rec.nse
            seconds += rec.elapsed_seconds
        rate = nse / seconds if seconds > 0 else math.inf
        print(
            f"{mode:<14} {f'{a1}/{a2}':>6} {args.runs:>5} {statistics.fmean(psls):>9.3f} "
            f"{min(psls):>8} {max(psls):>8} {rate:>12.0f}"
        )
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "exhaustive": cmd_exhaustive, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except FitnessOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (ConfigurationError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
