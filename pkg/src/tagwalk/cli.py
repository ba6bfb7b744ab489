"""Command line: ``tagwalk <group> <command> [options]``.

Exit codes: 0 ok, 2 usage, 3 bad configuration or parameters, 4 sizing,
5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import bench, stats
from .errors import InternalInconsistencyError, TagWalkError
from .gf2 import KINDS, SPARSE
from .group import dumps_instance, make_instance, make_params, read_instance, validate_instance
from .modified import solve_dlp_modified
from .table import STRATEGIES, table_info_row
from .walk import solve_dlp_original

log = logging.getLogger("tagwalk")


def _emit(text: str, out: str | None, append: bool = False) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if append and path.exists() and path.stat().st_size:
        # keep a single header line when appending rows
        text = text.split("\n", 1)[1]
    with path.open("a" if append else "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _dict_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _instance(args):
    if args.params:
        inst = read_instance(args.params)
        problem = validate_instance(inst)
        if problem:
            raise TagWalkError(f"{args.params}: {problem}")
        return inst
    params = make_params(args.eta, args.kind, args.q, seed=args.seed)
    return make_instance(params, seed=args.seed)


def cmd_params_gen(args) -> int:
    params = make_params(args.eta, args.kind, args.q, seed=args.seed)
    inst = make_instance(params, seed=args.seed)
    _emit(dumps_instance(inst, include_x=not args.no_x), args.out)
    return 0


def cmd_dlp_solve(args) -> int:
    inst = _instance(args)
    if args.walk == "original":
        report = solve_dlp_original(inst, args.r or 20, args.delta, args.max_points, args.seed, args.t)
    else:
        report = solve_dlp_modified(inst, args.r or 4, args.l, args.delta, args.max_points, args.seed,
                                    args.t, args.strategy)
    if not inst.check(report.x):
        raise InternalInconsistencyError("returned x does not satisfy g^x = h")
    log.info("verified g^x = h for x=%d", report.x)
    _emit(report.to_csv(), args.out)
    return 0


def cmd_stats_rho(args) -> int:
    params = make_params(args.eta, args.kind, args.q, seed=args.seed)
    samples = stats.run_trials(params, args.r, args.trials, args.seed, args.threads, args.t)
    if args.table == "summary":
        text = stats.summary_csv([stats.summarize(samples)])
    elif args.table == "samples":
        text = stats.samples_csv(samples)
    elif args.table == "qq":
        text = stats.qq_csv(stats.qq_points(samples))
    else:
        text = stats.histogram_csv(stats.histogram(samples, bins=args.bins))
    _emit(text, args.out)
    return 0


def cmd_bench_iterate(args) -> int:
    inst = _instance(args)
    report = bench.run_bench(inst, args.walk, args.r or (20 if args.walk == "original" else 4),
                             args.iterations, args.l, args.seed, args.t, args.strategy)
    _emit(bench.reports_csv([report]), args.out, append=True)
    return 0


def cmd_bench_compare(args) -> int:
    comp = bench.compare_moduli(args.eta, tuple(args.rs), args.l, args.iterations, args.seed)
    _emit(comp.to_csv(), args.out)
    log.warning("arbitrary-modulus speed-up exceeds sparse for every r: %s", comp.ordering_holds)
    return 0


def cmd_table_info(args) -> int:
    q = args.q if args.q else (1 << 19) - 1 if args.eta == 19 else None
    if q is None:
        from .group import catalogue_q
        q = catalogue_q(args.eta)
    _emit(_dict_csv([table_info_row(args.r, args.l, args.eta, args.t, q)]), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before the group or after the command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write CSV here instead of stdout")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="tagwalk", description="r-adding walks and tag tracing in GF(2^eta)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    groups = parser.add_subparsers(dest="group", required=True)

    def field_opts(p, eta=19):
        p.add_argument("--eta", type=int, default=eta)
        p.add_argument("--kind", choices=KINDS, default=SPARSE, help="irreducible modulus kind")
        p.add_argument("--q", type=int, default=None, help="subgroup order (default: catalogue)")

    def walk_opts(p):
        p.add_argument("--walk", choices=("original", "modified"), default="original")
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--l", type=int, default=10)
        p.add_argument("--t", type=int, default=None, help="tag width (default ceil(log2 r))")
        p.add_argument("--strategy", choices=STRATEGIES, default="transition")

    g = groups.add_parser("params").add_subparsers(dest="command", required=True)
    p = g.add_parser("gen", parents=[common], help="write a parameter file")
    field_opts(p)
    p.add_argument("--no-x", action="store_true", help="omit the hidden logarithm")
    p.set_defaults(func=cmd_params_gen)

    g = groups.add_parser("dlp").add_subparsers(dest="command", required=True)
    p = g.add_parser("solve", parents=[common], help="solve one instance")
    field_opts(p)
    walk_opts(p)
    p.add_argument("--params", help="parameter file (default: generate from --eta/--seed)")
    p.add_argument("--delta", type=int, default=2)
    p.add_argument("--max-points", type=int, default=None)
    p.set_defaults(func=cmd_dlp_solve)

    g = groups.add_parser("stats").add_subparsers(dest="command", required=True)
    p = g.add_parser("rho", parents=[common], help="first-collision lengths")
    field_opts(p)
    p.add_argument("--r", type=int, default=20)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--table", choices=("summary", "samples", "qq", "histogram"), default="summary")
    p.add_argument("--bins", type=int, default=40)
    p.set_defaults(func=cmd_stats_rho)

    g = groups.add_parser("bench").add_subparsers(dest="command", required=True)
    p = g.add_parser("iterate", parents=[common], help="time a fixed number of steps")
    field_opts(p, eta=1023)
    walk_opts(p)
    p.add_argument("--params")
    p.add_argument("--iterations", type=int, default=100000)
    p.set_defaults(func=cmd_bench_iterate)
    p = g.add_parser("compare", parents=[common], help="sparse vs arbitrary modulus")
    p.add_argument("--eta", type=int, default=1023)
    p.add_argument("--rs", type=int, nargs="+", default=[4, 16])
    p.add_argument("--l", type=int, default=10)
    p.add_argument("--iterations", type=int, default=20000)
    p.set_defaults(func=cmd_bench_compare)

    g = groups.add_parser("table").add_subparsers(dest="command", required=True)
    p = g.add_parser("info", parents=[common], help="M_l sizes and memory estimates")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--eta", type=int, default=19)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.set_defaults(func=cmd_table_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except TagWalkError as exc:
        print(f"tagwalk: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
