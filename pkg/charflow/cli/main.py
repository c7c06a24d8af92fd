"""charflow command-line entry point."""

import logging
import sys
from typing import List, Optional

from charflow.cli import commands
from charflow.cli.parser import build_parser
from charflow.core.config import settings
from charflow.core.exceptions import (
    CharflowError,
    ExprSyntaxError,
    FieldFileError,
    InvalidInputError,
    UnknownEntryError,
)
from charflow.core.logging import init_logging
from charflow.modules.report.tolerances import TolerancePolicy
from charflow.schemas.run_config import RunConfig

logger = logging.getLogger("charflow.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

# namespace keys that are not RunConfig fields
_NON_CONFIG = {"command", "config", "tol", "log_level", "suite", "list_suites", "action", "name"}


def _run_config(args) -> RunConfig:
    flags = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    policy_pairs = getattr(args, "tol", None) or []
    flags["tolerances"] = TolerancePolicy.from_pairs(policy_pairs).overrides
    return RunConfig.load(getattr(args, "config", None), **flags)


def _dispatch(args, run: RunConfig) -> int:
    policy = TolerancePolicy(run.tolerances)
    if args.command == "trace":
        return commands.cmd_trace(run, policy)
    if args.command == "chart":
        return commands.cmd_chart(run, policy)
    if args.command == "minimize":
        return commands.cmd_minimize(run, policy)
    if args.command == "flux":
        return commands.cmd_flux(run, policy)
    if args.command == "verify":
        return commands.cmd_verify(run, policy, args.suite, args.list_suites)
    return commands.cmd_catalog(run, args.action, args.name)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    init_logging(getattr(args, "log_level", None))
    try:
        run = _run_config(args)
        if run.threads is not None:
            settings.THREADS = run.threads
        return _dispatch(args, run)
    except (InvalidInputError, ExprSyntaxError, FieldFileError, UnknownEntryError) as e:
        logger.error(e.message)
        print(f"charflow: error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"charflow: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except CharflowError as e:
        logger.error(f"{e.code}: {e.message} {e.details}")
        print(f"charflow: {e.code}: {e.message}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
