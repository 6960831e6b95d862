"""Command-line front end.

Exit codes: 0 success, 1 syntax error, 2 formula outside the supported
fragment, 3 resource cap reached, 4 self-check mismatch, 64 bad usage.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    LTLSyntaxError,
    NegationNotEliminable,
    ResourceCapExceeded,
    UnsupportedCombination,
    UnsupportedFragment,
)
from .oracle import check_result
from .output import FORMATS, format_output
from .pipeline import STAGES, Options, run_pipeline
from .tgdra import DEFAULT_CAP

EXIT_OK, EXIT_SYNTAX, EXIT_FRAGMENT, EXIT_CAP, EXIT_CHECK, EXIT_USAGE = 0, 1, 2, 3, 4, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _check_arg(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected <maxPrefix>,<maxPeriod>") from None
    if p < 0 or q < 1:
        raise argparse.ArgumentTypeError("need maxPrefix >= 0 and maxPeriod >= 1")
    return p, q


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="ltlrabin",
        description="Translate LTL formulae to deterministic Rabin automata.",
    )
    ap.add_argument("-f", "--formula", help="formula to translate; without it formulae are read from stdin, one per line")
    ap.add_argument("--stage", choices=STAGES, default="dra")
    ap.add_argument("--format", choices=FORMATS, default="hoa")
    for what in ("formula", "vwaa", "acceptance", "states"):
        ap.add_argument(f"--no-simplify-{what}", action="store_true", help=f"skip {what} simplification")
    ap.add_argument("--check", type=_check_arg, metavar="P,Q", help="cross-check every stage on all lassos with prefix <= P, period <= Q")
    ap.add_argument("--cap-states", type=int, default=DEFAULT_CAP, metavar="N", help="abort when an automaton exceeds N states")
    ap.add_argument("--no-timing", action="store_true", help="omit time_ms from stats output")
    return ap


def _translate(text, opts, args, out, err) -> int:
    try:
        res = run_pipeline(text, opts)
        out.write(format_output(res, args.format, timing=not args.no_timing))
        if args.check:
            report = check_result(res, *args.check)
            for line in report.lines():
                err.write(line + "\n")
            err.write(report.summary() + "\n")
            if not report.ok:
                return EXIT_CHECK
    except LTLSyntaxError as e:
        err.write(f"{text}: syntax error: {e}\n")
        return EXIT_SYNTAX
    except (UnsupportedFragment, NegationNotEliminable) as e:
        err.write(f"{text}: {e}\n")
        return EXIT_FRAGMENT
    except ResourceCapExceeded as e:
        err.write(f"{text}: {e}\n")
        return EXIT_CAP
    except UnsupportedCombination as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    return EXIT_OK


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    args = make_parser().parse_args(argv)
    if args.format == "dstar" and args.stage != "dra":
        err.write(f"error: the dstar format is only available for --stage dra\n")
        return EXIT_USAGE
    opts = Options(
        stage=args.stage,
        simplify_formula=not args.no_simplify_formula,
        simplify_vwaa=not args.no_simplify_vwaa,
        simplify_acceptance=not args.no_simplify_acceptance,
        simplify_states=not args.no_simplify_states,
        cap_states=args.cap_states,
    )
    if args.formula is not None:
        return _translate(args.formula, opts, args, out, err)
    status = EXIT_OK
    for line in stdin:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        status = max(status, _translate(text, opts, args, out, err))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
