"""Batch command-line interface for layered-spectrum runs."""
import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from config import config
from disjoint.commands.cli_commands import EXIT_CONFIG, error_line, run
from disjoint.core.errors import ConfigError
from disjoint.dto.config_dto import SUBCOMMANDS, RunConfig

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def configure_logging(level: str, log_file: Optional[str] = None):
    """Log to stderr, and to ``log_file`` as well when one is configured."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disjoint",
        description="""
        Exact spectra of 2N-particle systems split into N disjoint layers.

        Subcommands:
          check       decoupling residuals of a spec file
          modes       inter-layer normal-mode frequencies
          spectrum    string levels, excitations and center-of-mass tower
          intra       intra-layer levels and radii
          separation  string-separation energy per layer versus N
          sweep       energy budget along one parameter axis
          verify      brute-force oracle suite
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="What to compute")
    parser.add_argument("--config", dest="config_path", help="Spec file (key = value with sections)")
    parser.add_argument("--out", dest="output_path", help="Main CSV output; secondary tables go next to it")
    parser.add_argument("--seed", type=int, help="Seed of the verify suites (default DISJOINT_SEED)")
    parser.add_argument("--threads", type=int, help="Sweep worker threads, 0 = one per CPU")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
                        help="Overrides DISJOINT_LOG_LEVEL")
    return parser


def _fail(error: ConfigError) -> int:
    print(error_line(error, EXIT_CONFIG), file=sys.stderr)
    return EXIT_CONFIG


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    problems = config.validate()
    if problems:
        configure_logging("INFO")
        for problem in problems:
            logger.error(f"Configuration problem: {problem}")
        return _fail(ConfigError("; ".join(problems)))
    configure_logging(args.log_level or config.logging.level, config.logging.file)

    try:
        run_config = RunConfig(
            subcommand=args.subcommand,
            config_path=args.config_path,
            output_path=args.output_path,
            seed=args.seed,
            threads=args.threads,
        )
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "arguments"
        return _fail(ConfigError(f"{field}: {error['msg'].removeprefix('Value error, ')}"))

    logger.info(f"Running {run_config.subcommand}")
    return run(run_config)


if __name__ == "__main__":
    sys.exit(main())
