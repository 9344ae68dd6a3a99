"""Command-line entry point for checking scenarios against the differential-algebra kernel.

Commands:
    check <file> [--strict]            Every check that applies to the scenario.
    lie <file> --form <expr>           Lie derivative, pairing and flatness of a form.
    residue <file>                     Residue and order tables of the [residue] section.
    trdeg <file> --elems <list>        Transcendence degree of elements of the field.
    prolong <file> --elems <list> --order <N>
                                       Iterated derivatives up to order N.

Every command accepts --machine (tab-separated records), --stamp (timestamp in the
human report) and --verbose (debug logging on stderr).

Exit codes: 0 when every check passes, 1 when a check fails or on an internal error,
2 on usage or input errors.
"""

import argparse
import logging
import sys
from datetime import datetime

from src.errors import KernelAssertionError, KernelError
from src.reporting.commands import cmd_check, cmd_lie, cmd_prolong, cmd_residue, cmd_trdeg
from src.reporting.report import render_human, render_machine
from src.settings import DEFAULT_LOG_LEVEL, LOG_FORMAT

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2
EXIT_CHECK_FAILED = 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="scenario file")
    common.add_argument("--machine", action="store_true", help="tab-separated output")
    common.add_argument("--stamp", action="store_true", help="timestamp the human report")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="main.py", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="run every check")
    check.add_argument("--strict", action="store_true", help="failing hypotheses fail")

    lie = commands.add_parser("lie", parents=[common], help="Lie derivative of a form")
    lie.add_argument("--form", required=True, help='e.g. "d(t) - (1/u)*d(u)"')

    commands.add_parser("residue", parents=[common], help="residue tables")

    trdeg = commands.add_parser("trdeg", parents=[common], help="transcendence degree")
    trdeg.add_argument("--elems", required=True, help='e.g. "t (t^2 + u)"')

    prolong = commands.add_parser("prolong", parents=[common], help="iterated derivatives")
    prolong.add_argument("--elems", required=True)
    prolong.add_argument("--order", type=int, default=1)
    return parser


def run(args: argparse.Namespace):
    if args.command == "check":
        return cmd_check(args.file, strict=args.strict)
    if args.command == "lie":
        return cmd_lie(args.file, args.form)
    if args.command == "residue":
        return cmd_residue(args.file)
    if args.command == "trdeg":
        return cmd_trdeg(args.file, args.elems)
    return cmd_prolong(args.file, args.elems, args.order)


def main(argv=None) -> int:
    """
    Parses argv, runs the command and writes its report to stdout.

    Returns:
        int: The exit code.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else DEFAULT_LOG_LEVEL,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        report = run(args)
    except (OSError, KernelError) as e:
        logger.debug("Input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except KernelAssertionError as e:
        print(f"internal check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except Exception as e:
        logger.debug("Unexpected error", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    if args.machine:
        sys.stdout.write(render_machine(report))
    else:
        sys.stdout.write(render_human(report, datetime.now() if args.stamp else None))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
