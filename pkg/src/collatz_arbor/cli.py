"""Command-line front end.

Exit codes: 0 success / all checks passed, 1 a verification check failed or
an identity was falsified, 2 usage error, 3 resource budget exceeded.
Results go to stdout, diagnostics to stderr.  JSON output is line-delimited
and byte-stable across identical invocations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import arbor, verify
from .errors import (
    CapacityError,
    DuplicateVertexError,
    InconsistencyError,
    MissingVertexError,
    NonEdgeError,
)
from .forward import DEFAULT_MAX_STEPS, trajectory
from .inverse import siblings

__all__ = ["main", "build_parser"]

MAX_NODES_ENV = "COLLATZ_ARBOR_MAX_NODES"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _decimal(text: str) -> int:
    # decimal digits only: no underscores, signs, or alternate bases
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    return int(text)


def _default_max_nodes() -> int:
    raw = os.environ.get(MAX_NODES_ENV)
    if raw is None:
        return arbor.DEFAULT_MAX_NODES
    if not raw.isdigit() or int(raw) < 1:
        raise ValueError(f"{MAX_NODES_ENV} must be a positive decimal integer, got {raw!r}")
    return int(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatz-arbor",
        description="Forward/inverse Collatz toolkit: orbits, sibling streams, "
                    "bounded tree construction, and structural verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_traj = sub.add_parser("trajectory", help="print the forward orbit of an odd start")
    p_traj.add_argument("x", type=_decimal)
    p_traj.add_argument("--max-steps", type=_decimal, default=DEFAULT_MAX_STEPS)
    _add_output(p_traj)

    p_sib = sub.add_parser("siblings", help="print the child stream of a parent")
    p_sib.add_argument("u", type=_decimal)
    stop = p_sib.add_mutually_exclusive_group(required=True)
    stop.add_argument("--count", type=_decimal, help="keep the first N children")
    stop.add_argument("--bound", type=_decimal, help="keep children up to this value")
    _add_output(p_sib)

    for name in ("tree", "export"):
        p_tree = sub.add_parser(name, help="build a truncated tree and export it")
        p_tree.add_argument("--depth", type=_decimal, default=None, help="maximum depth")
        p_tree.add_argument("--bound", type=_decimal, default=None, help="maximum value")
        p_tree.add_argument("--sibling-cap", type=_decimal, default=None)
        p_tree.add_argument("--max-nodes", type=_decimal, default=None,
                            help=f"node budget (default {arbor.DEFAULT_MAX_NODES}, "
                                 f"or ${MAX_NODES_ENV})")
        p_tree.add_argument("--format", choices=arbor.EXPORT_FORMATS, default="jsonl")
        p_tree.add_argument("--out", default=None, help="output path (default stdout)")

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", default="all",
                          choices=("all",) + verify.SUITE_NAMES + tuple(verify.SUITE_ALIASES),
                          help="suite to run (lemmaN aliases accepted)")
    p_verify.add_argument("--parent-bound", type=_decimal, default=verify.DEFAULT_PARENT_BOUND)
    p_verify.add_argument("--count", type=_decimal, default=verify.DEFAULT_SIBLING_COUNT)
    p_verify.add_argument("--max-d", type=_decimal, default=verify.DEFAULT_MAX_OFFSET)
    p_verify.add_argument("--partners", type=_decimal, default=verify.DEFAULT_PARTNERS)
    p_verify.add_argument("--depth", type=_decimal, default=6, help="tree depth for tree checks")
    p_verify.add_argument("--bound", type=_decimal, default=10**6,
                          help="tree value bound for tree checks")
    p_verify.add_argument("--conv-bound", type=_decimal, default=verify.DEFAULT_PARENT_BOUND,
                          help="start bound for the convergence sweep")
    p_verify.add_argument("--max-steps", type=_decimal, default=DEFAULT_MAX_STEPS)
    _add_output(p_verify)

    p_cover = sub.add_parser("cover", help="coverage of the odd values within a bound")
    p_cover.add_argument("--bound", type=_decimal, required=True)
    p_cover.add_argument("--depth", type=_decimal, required=True)
    p_cover.add_argument("--report-bound", type=_decimal, default=None,
                         help="report window (default: the tree bound)")
    p_cover.add_argument("--max-nodes", type=_decimal, default=None)
    _add_output(p_cover)

    return parser


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", choices=("human", "json"), default="human")


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _cmd_trajectory(args: argparse.Namespace) -> int:
    record = trajectory(args.x, max_steps=args.max_steps)
    if args.output == "json":
        _emit_json({
            "start": record.start,
            "values": list(record.values),
            "exponents": list(record.exponents),
            "length": record.length,
            "converged": record.converged,
        })
    else:
        print(" -> ".join(str(v) for v in record.values))
        print("a = " + ",".join(str(a) for a in record.exponents))
        state = "converged" if record.converged else "not converged"
        print(f"length = {record.length} ({state})")
    return EXIT_OK


def _cmd_siblings(args: argparse.Namespace) -> int:
    family = siblings(args.u, count=args.count, bound=args.bound)
    pairs = list(family.indexed())
    if args.output == "json":
        _emit_json({
            "parent": args.u,
            "count": args.count,
            "bound": args.bound,
            "indices": [n for n, _ in pairs],
            "values": [v for _, v in pairs],
        })
    else:
        print(", ".join(str(v) for _, v in pairs))
    return EXIT_OK


def _tree_config(args: argparse.Namespace) -> arbor.TruncationConfig:
    max_nodes = args.max_nodes if args.max_nodes is not None else _default_max_nodes()
    return arbor.TruncationConfig(
        max_depth=args.depth,
        value_bound=args.bound,
        sibling_cap=getattr(args, "sibling_cap", None),
        max_nodes=max_nodes,
    )


def _cmd_tree(args: argparse.Namespace) -> int:
    tree = arbor.build(_tree_config(args))
    if args.out is None:
        arbor.export(tree, args.format, sys.stdout.buffer)
        sys.stdout.buffer.flush()
    else:
        with open(args.out, "wb") as sink:
            arbor.export(tree, args.format, sink)
    print(f"nodes={len(tree)} max_depth={tree.max_depth}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    reports = verify.run_suite(
        args.suite,
        parent_bound=args.parent_bound,
        count=args.count,
        max_d=args.max_d,
        partners=args.partners,
        tree_depth=args.depth,
        tree_bound=args.bound,
        convergence_bound=args.conv_bound,
        max_steps=args.max_steps,
    )
    failed = False
    for report in reports:
        if args.output == "json":
            # elapsed is excluded so identical invocations stay byte-identical
            _emit_json(report.as_dict(include_elapsed=False))
        else:
            status = "PASS" if report.passed else "FAIL"
            box = " ".join(f"{k}={v}" for k, v in report.parameters.items())
            stats = report.statistics
            line = (f"{status} {report.check_name} [{box}] "
                    f"cases={stats.get('cases')} elapsed={stats.get('elapsed_s')}s")
            print(line)
            if report.counterexample is not None:
                print(f"     counterexample: {json.dumps(report.counterexample, sort_keys=True)}")
        if not report.passed:
            failed = True
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_cover(args: argparse.Namespace) -> int:
    max_nodes = args.max_nodes if args.max_nodes is not None else _default_max_nodes()
    config = arbor.TruncationConfig(max_depth=args.depth, value_bound=args.bound,
                                    max_nodes=max_nodes)
    tree = arbor.build(config)
    window = args.report_bound if args.report_bound is not None else args.bound
    report = arbor.coverage(tree, window)
    if args.output == "json":
        _emit_json({
            "bound": report.bound,
            "covered_count": report.covered_count,
            "missing": list(report.missing),
            "level_sizes": {str(k): v for k, v in sorted(report.level_sizes.items())},
            "first_depth": {str(k): v for k, v in sorted(report.first_depth.items())},
        })
    else:
        print(f"bound={report.bound} covered={report.covered_count} "
              f"missing={len(report.missing)}")
        if report.missing:
            shown = report.missing[:100]
            tail = "" if len(report.missing) <= 100 else f" ... ({len(report.missing) - 100} more)"
            print("missing: " + ", ".join(str(v) for v in shown) + tail)
        print("levels: " + ", ".join(f"{k}:{v}" for k, v in sorted(report.level_sizes.items())))
    return EXIT_OK


_HANDLERS = {
    "trajectory": _cmd_trajectory,
    "siblings": _cmd_siblings,
    "tree": _cmd_tree,
    "export": _cmd_tree,
    "verify": _cmd_verify,
    "cover": _cmd_cover,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed to stderr; normalize its code
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _HANDLERS[args.command](args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DuplicateVertexError, InconsistencyError) as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, TypeError, MissingVertexError, NonEdgeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
