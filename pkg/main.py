"""
Command-line entry point.

Copyright 2026 Fibcat Contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
import argparse
import sys
from typing import List, Optional, Sequence

from config import ExitCode, ReportFormat, get_logger, settings, setup_logging
from config.constants import BASE_BLUEPRINTS, FIBER_BLUEPRINTS, ExtendTarget, GenMode, Suite
from fibcat import __version__
from fibcat.exceptions import FibcatError
from fibcat.handlers import CheckHandlers, ExtendHandlers, GenerateHandlers
from fibcat.services.suites import SuiteRunner

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Command-line flags."""
    parser = argparse.ArgumentParser(
        prog="fibcat",
        description="Check, extend and generate finite fibered-category structures.",
    )
    parser.add_argument("instance", nargs="?", help="instance file (for --check and --extend)")
    action = parser.add_mutually_exclusive_group(required=True)
    action.add_argument("--check", choices=[s.value for s in Suite], help="suite to run, or all")
    action.add_argument("--extend", choices=[t.value for t in ExtendTarget], help="partial structure to extend")
    action.add_argument("--gen", choices=[m.value for m in GenMode], help="corpus generation mode")
    action.add_argument("--sweep", metavar="DIR", help="check every instance file of a directory")
    parser.add_argument("--suite", default=Suite.ALL.value, choices=[s.value for s in Suite], help="suite for --sweep")
    parser.add_argument("--emit", metavar="PATH", help="write the extended instance (with --extend)")
    parser.add_argument("--seed", type=int, default=None, help="corpus seed")
    parser.add_argument("--format", dest="report_format", choices=[f.value for f in ReportFormat], default=None)
    parser.add_argument("--timings", action="store_true", help="include per-suite timings in reports")
    parser.add_argument("--base", choices=sorted(BASE_BLUEPRINTS), help="base blueprint for --gen")
    parser.add_argument("--fiber", choices=sorted(FIBER_BLUEPRINTS), help="fiber blueprint for --gen")
    parser.add_argument("--count", type=int, default=None, help="mutants emitted by --gen mutate")
    parser.add_argument("--out", default=None, help="output directory for --gen")
    parser.add_argument("--threads", type=int, default=None, help="parallel suite workers")
    parser.add_argument(
        "--log-level", type=str.upper, default=None, choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


class FibcatApplication:
    """Main application."""

    def __init__(self, args: argparse.Namespace) -> None:
        """
        Initialize the application.

        Args:
            args: Parsed command-line flags
        """
        self.args = args
        self.report_format = ReportFormat(args.report_format or settings.report_format)
        self.runner = SuiteRunner(threads=args.threads)

        # Handlers
        self.check_handlers = CheckHandlers(self.runner)
        self.extend_handlers = ExtendHandlers(self.runner)
        self.generate_handlers = GenerateHandlers()

    def _instance(self) -> str:
        if not self.args.instance:
            raise FibcatError("an instance file is required")
        return str(self.args.instance)

    def run(self) -> ExitCode:
        """Dispatch to the handler the flags select."""
        args = self.args
        include_timings = args.timings or settings.include_timings
        if args.check:
            return self.check_handlers.check(self._instance(), args.check, self.report_format, include_timings)
        if args.extend:
            return self.extend_handlers.extend(
                self._instance(), ExtendTarget(args.extend), args.emit, self.report_format
            )
        if args.sweep:
            return self.check_handlers.sweep(args.sweep, args.suite, self.report_format)
        return self.generate_handlers.generate(
            GenMode(args.gen),
            args.out or settings.corpus_dir,
            settings.default_seed if args.seed is None else args.seed,
            base=args.base,
            fiber=args.fiber,
            count=args.count or settings.mutation_count,
        )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(list(argv) if argv is not None else None)

    # Setup logging
    setup_logging(args.log_level)
    settings.ensure_directories()

    logger.info("=" * 60)
    logger.info(f"fibcat {__version__} starting...")
    command: List[str] = [f"{k}={v}" for k, v in sorted(vars(args).items()) if v not in (None, False)]
    logger.info(f"Arguments: {', '.join(command)}")
    logger.info("=" * 60)

    try:
        code = FibcatApplication(args).run()
    except (FibcatError, OSError) as e:
        logger.error(f"Input error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)
    except Exception as e:
        logger.critical(f"Fatal error: {e}", exc_info=True)
        return int(ExitCode.INPUT_ERROR)
    finally:
        logger.info("fibcat finished")
    return int(code)


if __name__ == "__main__":
    sys.exit(main())
