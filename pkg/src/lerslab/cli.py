"""Command-line front end: ``lerslab sample|export-mesh|sweep|estimate|verify``.

Exit codes: 0 success, 1 usage or unreadable input, 2 validation failure,
3 sampler abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_ABORT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _draw(args):
    from lerslab.lers import sample_lers
    from lerslab.rng import RngStream

    return sample_lers(args.n, RngStream(args.seed), step_cap=args.step_cap)


def cmd_sample(args) -> int:
    from lerslab.export import write_obj
    from lerslab.lattice import build_complex

    s = _draw(args)
    print(f"n={s.n} seed={s.seed} size={s.size} steps={s.steps}")
    if args.mesh:
        write_obj(s.surface, build_complex(s.n), args.mesh)
        print(f"wrote {s.size} quads to {args.mesh}")
    return EXIT_OK


def cmd_export_mesh(args) -> int:
    from lerslab.export import write_obj
    from lerslab.lattice import build_complex

    s = _draw(args)
    write_obj(s.surface, build_complex(s.n), args.out)
    print(f"wrote {s.size} quads to {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    from lerslab.experiment import STATUS_OK, SweepConfig, records_to_csv, run_sweep

    try:
        cfg = SweepConfig(
            n_min=args.n_min,
            n_max=args.n_max,
            n_step=args.n_step,
            reps=args.reps,
            seed=args.seed,
            parallel=args.parallel,
            step_cap=args.step_cap,
        )
    except ValueError as exc:
        print(f"lerslab sweep: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = run_sweep(cfg)
    text = records_to_csv(records)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    aborted = sum(r.status != STATUS_OK for r in records)
    if aborted:
        print(f"lerslab sweep: {aborted} sample(s) aborted at the step cap", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    from lerslab.experiment import CsvFormatError, read_csv, size_table
    from lerslab.export import loglog_svg
    from lerslab.stats import HYPOTHESIS, bootstrap_ci, summarize

    try:
        records = read_csv(args.csv)
    except FileNotFoundError:
        print(f"lerslab estimate: no such file {args.csv}", file=sys.stderr)
        return EXIT_USAGE
    except CsvFormatError as exc:
        for problem in exc.problems:
            print(f"lerslab estimate: {problem}", file=sys.stderr)
        return EXIT_USAGE
    table = size_table(records)
    try:
        est = bootstrap_ci(table, B=args.bootstrap, alpha=args.alpha, rng=args.seed,
                           convention=args.convention)
    except ValueError as exc:
        print(f"lerslab estimate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    pct = round(100 * (1 - args.alpha))
    inside = est.contains(HYPOTHESIS)
    print(f"samples: {len(table)} over n = {', '.join(map(str, table.ns))}")
    print(f"convention: {est.convention}")
    print(f"slope c~ = {est.slope:.6f}  intercept = {est.intercept:.6f}")
    print(f"{pct}% bootstrap interval (B={est.replicates}): [{est.lo:.6f}, {est.hi:.6f}]")
    print(f"48/19 = {HYPOTHESIS:.6f} is {'inside' if inside else 'outside'} the interval")
    print("n,count,min,q1,median,q3,max,mean")
    summaries = summarize(table)
    for s in summaries:
        print(f"{s.n},{s.count},{s.min:g},{s.q1:g},{s.median:g},{s.q3:g},{s.max:g},{s.mean:.6g}")
    if args.svg:
        Path(args.svg).write_text(loglog_svg(summaries, est))
    if args.json:
        Path(args.json).write_text(json.dumps(est.as_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from lerslab.experiment import run_verify

    if args.n > args.max_n:
        print(f"lerslab verify: n={args.n} exceeds --max-n {args.max_n}", file=sys.stderr)
        return EXIT_USAGE
    report = run_verify(args.n, args.reps, args.seed, fault=0 if args.inject_fault else -1,
                        alpha=args.alpha)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lerslab", description="Loop-erased random surfaces on the cubical lattice.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_draw(p):
        p.add_argument("--n", type=_positive, required=True, help="cubes per side")
        p.add_argument("--seed", type=_nonneg, required=True, help="stream seed")
        p.add_argument("--step-cap", type=_positive, default=None)

    p = sub.add_parser("sample", help="draw one surface and print its size")
    add_draw(p)
    p.add_argument("--mesh", help="also write the surface as an OBJ file")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("export-mesh", help="draw one surface and write it as OBJ")
    add_draw(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_mesh)

    p = sub.add_parser("sweep", help="sample many surfaces, write CSV")
    p.add_argument("--n-min", type=_positive, required=True)
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--n-step", type=_positive, default=1)
    p.add_argument("--reps", type=_positive, required=True)
    p.add_argument("--seed", type=_nonneg, required=True, help="master seed")
    p.add_argument("--parallel", type=_positive, default=1, help="worker processes")
    p.add_argument("--step-cap", type=_positive, default=None)
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="fit the growth exponent from a sweep CSV")
    p.add_argument("csv")
    p.add_argument("--bootstrap", type=int, default=1000, help="bootstrap replicates")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=_nonneg, default=0, help="bootstrap seed")
    p.add_argument("--convention", choices=("log-of-means", "mean-of-logs"), default="log-of-means")
    p.add_argument("--svg", help="write a log-log plot")
    p.add_argument("--json", help="write the estimate record as JSON")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="sample with full invariant checks")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--reps", type=_positive, required=True)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--max-n", type=_positive, default=12)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    from lerslab.ust import StepCapExceeded

    try:
        return args.func(args)
    except StepCapExceeded as exc:
        print(f"lerslab {args.command}: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
