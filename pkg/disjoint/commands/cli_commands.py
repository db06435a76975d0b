"""Subcommand handlers: run one configuration, write its CSV tables, map failures to exit codes."""
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

from config import config
from disjoint.commands.config_file import parse_config
from disjoint.core.assembly import SweepConfig
from disjoint.core.errors import (
    CapError, ConfigError, DecouplingError, DomainError, ModelError, VerificationError,
)
from disjoint.dto.config_dto import ParsedConfig, RunConfig
from disjoint.dto.table_dto import Table
from disjoint.services.run_service import RunService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_NUMERIC = 4

Outcome = tuple[list[Table], Optional[Exception], str]


def exit_code_for(error: BaseException) -> int:
    """2 for configuration problems, 3 for physics or validation failures, 4 for everything else."""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, (ModelError, DecouplingError, CapError, DomainError, VerificationError)):
        return EXIT_VALIDATION
    return EXIT_NUMERIC


def error_line(error: BaseException, code: int) -> str:
    """Machine-readable one-line error report."""
    message = " ".join(str(error).split()).replace('"', "'")
    return f'error code={code} kind={type(error).__name__} message="{message}"'


def secondary_path(output_path: Path, name: str) -> Path:
    return output_path.with_name(f"{output_path.stem}_{name}{output_path.suffix}")


def output_path_for(run_config: RunConfig) -> Path:
    if run_config.output_path:
        return Path(run_config.output_path)
    return Path(config.output_dir) / f"{run_config.subcommand}.csv"


def write_tables(tables: list[Table], output_path: Path) -> list[Path]:
    """Write the main table to ``output_path`` and secondary tables next to it, in order."""
    if not output_path.parent.is_dir():
        raise ConfigError(f"output directory {output_path.parent} does not exist", key="--out")
    written = []
    for table in tables:
        path = secondary_path(output_path, table.name) if table.name else output_path
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(table.to_csv())
        except OSError as e:
            raise ConfigError(f"cannot write {path}: {e.strerror}", key="--out") from e
        logger.info(f"Wrote {len(table.rows)} rows to {path}")
        written.append(path)
    return written


def read_config(path: str) -> ParsedConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}", key="--config") from e
    except UnicodeDecodeError as e:
        raise ConfigError(f"{path} is not UTF-8 text", key="--config") from e
    return parse_config(text)


def handle_check(service: RunService, run_config: RunConfig) -> Outcome:
    table, report = service.check(read_config(run_config.config_path))
    summary = (f"decoupling satisfied={str(report.satisfied).lower()} exact={str(report.exact).lower()} "
               f"worst_violation={report.worst_violation:.12e} "
               f"cm_coupling_residual={report.cm_coupling_residual:.12e}")
    failure = None
    if not report.satisfied:
        pairs = ", ".join(f"{i + 1}.{k + 1}" for i, k in report.violating_pairs)
        failure = DecouplingError(
            f"decoupling violated for pairs {pairs}; worst residual {report.worst_violation:.12e}"
        )
    return [table], failure, summary


def handle_modes(service: RunService, run_config: RunConfig) -> Outcome:
    tables = service.modes(read_config(run_config.config_path))
    return tables, None, f"modes count={len(tables[0].rows)}"


def handle_spectrum(service: RunService, run_config: RunConfig) -> Outcome:
    tables = service.spectrum(read_config(run_config.config_path))
    return tables, None, f"spectrum levels={len(tables[0].rows)}"


def handle_intra(service: RunService, run_config: RunConfig) -> Outcome:
    tables = service.intra(read_config(run_config.config_path))
    return tables, None, f"intra levels={len(tables[0].rows)}"


def handle_separation(service: RunService, run_config: RunConfig) -> Outcome:
    tables = service.separation(read_config(run_config.config_path))
    return tables, None, f"separation rows={len(tables[0].rows)}"


def handle_sweep(service: RunService, run_config: RunConfig) -> Outcome:
    table = service.sweep(read_config(run_config.config_path))
    return [table], None, f"sweep rows={len(table.rows)}"


def handle_verify(service: RunService, run_config: RunConfig) -> Outcome:
    seed = run_config.seed if run_config.seed is not None else config.seed
    n_random = read_config(run_config.config_path).run.random if run_config.config_path else 200
    table, passed = service.verify(seed, n_random)
    failed = [row[0] for row in table.rows if not row[1]]
    failure = VerificationError(f"failed checks: {', '.join(failed)}") if failed else None
    return [table], failure, f"verify seed={seed} passed={len(table.rows) - len(failed)}/{len(table.rows)}"


HANDLERS: dict[str, Callable[[RunService, RunConfig], Outcome]] = {
    "check": handle_check,
    "modes": handle_modes,
    "spectrum": handle_spectrum,
    "intra": handle_intra,
    "separation": handle_separation,
    "sweep": handle_sweep,
    "verify": handle_verify,
}


def run(run_config: RunConfig, service: Optional[RunService] = None) -> int:
    """Execute one subcommand; returns the process exit status."""
    try:
        if service is None:
            threads = run_config.threads if run_config.threads is not None else config.threads
            service = RunService(sweep_config=SweepConfig(threads=threads))
        tables, failure, summary = HANDLERS[run_config.subcommand](service, run_config)
        write_tables(tables, output_path_for(run_config))
        print(summary)
        if failure is not None:
            raise failure
        return EXIT_OK
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{run_config.subcommand} failed with exit code {code}: {e}")
        print(error_line(e, code), file=sys.stderr)
        return code
