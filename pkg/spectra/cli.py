"""Command line front end: ``python -m spectra <command> ...``.

Exit status is 0 on success or a positive answer, 1 on a negative answer
(false, empty spectrum, failed check) and 2 on errors.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import TextIO

from spectra import __version__, config as settings
from spectra.commands import formula, models, search
from spectra.errors import ModelFileError, SpectraError
from spectra.models.spectrum import AUTO

logger = logging.getLogger(__name__)

COMMAND_GROUPS = (formula, models, search)
COMMANDS = {name: handler for group in COMMAND_GROUPS for name, handler in group.HANDLERS.items()}
INPUT_PATHS = ("input", "formula", "structure", "graph")


@dataclass
class CliConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    report: Path | None = None
    formula: Path | None = None
    structure: Path | None = None
    graph: Path | None = None
    m: int | None = None
    size: int | None = None
    max_n: int | None = None
    method: str = AUTO
    budget: int | None = None
    force: bool = False
    format: str = "text"
    which: str = "C"
    seed: int | None = None
    samples: int | None = None
    mutations: int | None = None
    ground: bool = True
    assume_loop_free: bool = False
    scheme: str | None = None
    log_level: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(args).items() if k in names})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"logging level (default {settings.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in COMMAND_GROUPS:
        group.register(subparsers)
    return parser


def validate_paths(config: CliConfig) -> None:
    for name in INPUT_PATHS:
        path = getattr(config, name)
        if path is not None and not path.is_file():
            raise ModelFileError(f"file not found: {path}")


def run(config: CliConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        handler = COMMANDS[config.command]
    except KeyError:
        err.write(f"error: unknown command {config.command!r}\n")
        return 2
    try:
        validate_paths(config)
        status = handler(config, out)
    except SpectraError as e:
        logger.debug("Command %s failed", config.command, exc_info=True)
        err.write(f"error: {e.detail}\n")
        return e.exit_code
    logger.info("Command %s finished with status %d", config.command, status)
    return status


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = CliConfig.from_args(args)
    settings.configure_logging(config.log_level)
    return run(config)
