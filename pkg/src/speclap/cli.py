"""Command-line front end.

Three subcommands:

``run``
    Execute a config-driven suite and write reports.  Exit 0 when every
    row passes (inconclusive rows do not fail the run), 1 when any row
    fails, 2 for config or ingestion problems.  ``--config default``
    selects the stock suite.
``domain``
    Build one domain and print its geometry, optionally with the leading
    eigenvalues.
``check``
    Run a single registered check on one domain.  Check parameters are
    passed as ``--<name> <value>`` flags, e.g. ``--alpha 1 --p inf``.

The output directory honors ``SPECLAP_OUT`` when set; an explicit
``--out`` wins over both the environment and the config file.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .grid import BUILTIN_SHAPES, build_domain, eigendecompose, assemble_laplacian
from .harness import CHECKS, build_context, run_check
from .reporting import (
    ConfigError,
    default_config,
    emit_plotdata,
    emit_report,
    parse_config_file,
    run_suite,
    _fmt_float,
    _params_str,
    _split_token,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="speclap",
        description="spectral-calculus verification suite on masked grids",
    )
    sub = top.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a config-driven suite")
    run.add_argument("--config", required=True,
                     help="config file path, or 'default' for the stock suite")
    run.add_argument("--out", help="output directory override")
    run.add_argument("--format", choices=["csv", "json", "both"])
    run.add_argument("--workers", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--plots", action="store_true",
                     help="also emit per-fit plot data files")
    run.add_argument("--svg", action="store_true",
                     help="with --plots, also emit SVG figures")

    dom = sub.add_parser("domain", help="build a domain and print a summary")
    dom.add_argument("--shape", required=True,
                     help=f"one of {sorted(BUILTIN_SHAPES)} or a mask file path")
    dom.add_argument("--size", type=int, help="resolution (builtin shapes)")
    dom.add_argument("--print-spectrum", type=int, default=0, metavar="K",
                     help="also print the K smallest eigenvalues")

    chk = sub.add_parser("check", help="run one check on one domain",
                         epilog="check parameters are free-form flags: "
                                "--s 1 --r 2 --p inf")
    chk.add_argument("name", help=f"one of {sorted(CHECKS)}")
    chk.add_argument("--domain", default="interval:200",
                     help="shape:size or a mask file path (default interval:200)")
    chk.add_argument("--out", help="also write reports to this directory")
    chk.add_argument("--format", choices=["csv", "json", "both"], default="csv")
    return top


def _cmd_run(args) -> int:
    try:
        if args.config == "default":
            cfg = default_config()
        else:
            cfg = parse_config_file(args.config)
        updates = {}
        if args.out:
            updates["out_dir"] = args.out
        if args.format:
            updates["formats"] = (
                ("csv", "json") if args.format == "both" else (args.format,)
            )
        if args.workers:
            updates["workers"] = args.workers
        if args.seed is not None:
            updates["seed"] = args.seed
        if args.plots:
            updates["plots"] = True
        if args.svg:
            updates["svg"] = True
        if updates:
            cfg = dataclasses.replace(cfg, **updates)
        if args.out:
            # explicit flag wins over the environment override, but only for
            # this run; the process environment is restored afterwards
            prior = os.environ.get("SPECLAP_OUT")
            os.environ["SPECLAP_OUT"] = args.out
            try:
                report = run_suite(cfg)
            finally:
                if prior is None:
                    del os.environ["SPECLAP_OUT"]
                else:
                    os.environ["SPECLAP_OUT"] = prior
        else:
            report = run_suite(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    for row, sec in zip(report.rows, report.wall_clock):
        print(f"[{row.status:>12s}] {row.check:20s} {row.domain:14s} "
              f"{_params_str(row.params):40s} measured={_fmt_float(row.measured)} "
              f"({sec:.2f}s)")
    counts = report.counts()
    print(f"total={counts['total']} pass={counts['pass']} "
          f"fail={counts['fail']} inconclusive={counts['inconclusive']}")
    for row in report.failures():
        note = f" ({row.notes})" if row.notes else ""
        print(f"FAIL: {row.check} on {row.domain}{note}", file=sys.stderr)
    return EXIT_OK if not report.failures() else EXIT_FAIL


def _cmd_domain(args) -> int:
    try:
        dom = build_domain(args.shape, args.size)
    except (ValueError, OSError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"name      {dom.name}")
    print(f"dimension {dom.dim}")
    print(f"nodes     {dom.coords.shape[0]}")
    print(f"spacing   {_fmt_float(dom.h)}")
    if args.print_spectrum > 0:
        dec = eigendecompose(assemble_laplacian(dom), dom)
        k = min(args.print_spectrum, dec.eigenvalues.size)
        print(f"lambda_1..lambda_{k}:")
        for i in range(k):
            print(f"  {_fmt_float(dec.eigenvalues[i])}")
    return EXIT_OK


def _cmd_check(args, extra: list[str]) -> int:
    params = {}
    key = None
    for tok in extra:
        if tok.startswith("--"):
            if key is not None:
                print(f"flag --{key} has no value", file=sys.stderr)
                return EXIT_CONFIG
            key = tok[2:]
        elif key is None:
            print(f"unexpected argument {tok!r}", file=sys.stderr)
            return EXIT_CONFIG
        else:
            params[key] = tok
            key = None
    if key is not None:
        print(f"flag --{key} has no value", file=sys.stderr)
        return EXIT_CONFIG

    try:
        ctx = build_context(*_split_token(args.domain))
        report = run_check(args.name, ctx, params)
    except (ValueError, OSError) as exc:
        print(f"check error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    print(f"check      {report.check}")
    print(f"domain     {report.domain} ({report.grid})")
    print(f"params     {_params_str(report.params)}")
    print(f"measured   {_fmt_float(report.measured)}")
    print(f"target     {_fmt_float(report.target)}  [{report.comparison}]")
    print(f"tolerance  {_fmt_float(report.tolerance)}")
    print(f"status     {report.status}")
    if report.notes:
        print(f"notes      {report.notes}")

    if args.out:
        from .reporting import SuiteReport, _environment

        suite = SuiteReport(config={"one_off": report.check},
                            environment=_environment(),
                            rows=[report], wall_clock=[0.0])
        formats = ("csv", "json") if args.format == "both" else (args.format,)
        paths = emit_report(suite, args.out, formats)
        emit_plotdata(suite, args.out)
        for path in paths.values():
            print(f"wrote      {path}")
    return EXIT_OK if report.status != "fail" else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] == "check":
        args, extra = parser.parse_known_args(argv)
        return _cmd_check(args, extra)
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_domain(args)


if __name__ == "__main__":
    sys.exit(main())
