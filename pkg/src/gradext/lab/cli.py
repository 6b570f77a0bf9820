"""``gradext`` command line.

Exit codes: 0 success (no violated verdict), 1 a violated verdict, 2 a
budget was exceeded, 3 bad input.
"""

from __future__ import annotations

import argparse
import sys

from ..decomp import DEFAULT_BUDGET
from ..errors import BudgetExceeded, GradextError
from ..extdim import DEFAULT_SLACK, LEVEL_CAP
from .claims import ClaimParams
from .compute import COMMANDS, Options, compute, parse_window
from .documents import dumps
from .suite import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, UnknownSuite, run_suite, suites


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-dim", type=int, default=4, help="dimension bound D of the module universe")
    p.add_argument("--slack", type=int, default=DEFAULT_SLACK, help="padding-dimension slack")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration work budget")
    p.add_argument("--seed", type=int, default=0)


def parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gradext", description="exact extension-dimension computations over F_p")
    sub = ap.add_subparsers(dest="action", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="run one computation and print JSON")
    c.add_argument("command", choices=sorted(COMMANDS))
    c.add_argument("instance", help="shipped fixture name or instance document path")
    _common(c)
    c.add_argument("--gen-bound", type=int, default=None, help="largest generator dimension tried")
    c.add_argument("--cap", type=int, default=LEVEL_CAP, help="largest level n computed")
    c.add_argument("--graded", action="store_true", help="work with graded modules")
    c.add_argument("--window", default=None, help="degree window for integer gradings: w or a:b")
    c.add_argument("--module", default="regular",
                   help="regular, loewy, simple:i, projective:i, indec:i, a module document, "
                        "or a comma-separated sum")
    c.add_argument("--target", default=None, help="second module for hom and ext1")

    s = sub.add_parser("run-suite", help="run a claim suite and write the verdict ledger")
    s.add_argument("suite", help=", ".join(sorted(suites())))
    s.add_argument("--output", "-o", default=None, help="ledger path (standard output if omitted)")
    s.add_argument("--runtimes", default=None, help="optional sidecar file with per-entry runtimes")
    s.add_argument("--jobs", type=int, default=1)
    _common(s)
    return ap


def _compute(args) -> int:
    opt = Options(max_dim=args.max_dim, slack=args.slack, gen_bound=args.gen_bound, cap=args.cap,
                  seed=args.seed, graded=args.graded, window=parse_window(args.window),
                  budget=args.budget, module=args.module, target=args.target)
    sys.stdout.write(dumps(compute(args.command, args.instance, opt)))
    return EXIT_OK


def _suite(args) -> int:
    params = ClaimParams(D=args.max_dim, slack=args.slack, budget=args.budget, seed=args.seed)
    code, doc = run_suite(args.suite, args.output, params, max(1, args.jobs), args.runtimes)
    if args.output is None:
        sys.stdout.write(dumps(doc))
    else:
        s = doc["summary"]
        print(f"{s['entries']} entries {s['verdicts']} -> {args.output}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _compute(args) if args.action == "compute" else _suite(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UnknownSuite, GradextError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
