"""
Base CLI Class

This module provides the base class for every `ups` subcommand. It gives all
subcommands the same argument handling, output writing (JSON or CSV, to
stdout or a file), logging and error-to-exit-code mapping.
"""

import argparse
import csv
import io
import logging
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, ValidationError

from config import config
from plfun import PLFunc, to_csv_rows
from shared_components import InputError, UpsilonError, dump_json, error_handler

logger = logging.getLogger(__name__)

Payload = Union[BaseModel, List[BaseModel], Dict[str, Any]]


@dataclass
class CommandResult:
    """
    What a subcommand produced.

    `curves` lists the (label, function) pairs emitted as CSV rows; an empty
    list means the result has no CSV form.
    """
    payload: Payload
    exit_code: int = 0
    curves: List[Tuple[str, PLFunc]] = field(default_factory=list)


class BaseCommand(ABC):
    """
    Base class providing common functionality for all subcommands.

    Subclasses declare their arguments and compute a CommandResult; this
    class handles everything around that.
    """

    def __init__(self, name: str, description: str):
        """
        Initialize the command.

        Args:
            name: Subcommand name as typed on the command line
            description: One-line help text
        """
        self.name = name
        self.description = description
        self.logger = logging.getLogger(f"{__name__}.{name}")

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare the subcommand's own arguments."""

    @abstractmethod
    def execute(self, args: argparse.Namespace) -> CommandResult:
        """Run the computation for parsed arguments."""

    def register(self, subparsers: Any) -> None:
        """Add this command, with the shared output flags, to a subparser set."""
        parser = subparsers.add_parser(self.name, help=self.description, description=self.description)
        self.add_arguments(parser)
        parser.add_argument(
            "--emit",
            choices=config.output.allowed_formats,
            default=config.output.emit,
            help="output format (default: %(default)s)",
        )
        parser.add_argument("--out", type=Path, default=None, help="write output to this file instead of stdout")
        parser.set_defaults(command=self)

    def render(self, result: CommandResult, emit: str) -> str:
        """
        Serialize a result.

        Raises:
            InputError: If CSV is requested for a result without functions
        """
        if emit == "json":
            return dump_json(result.payload)
        if not result.curves:
            raise InputError(f"'{self.name}' has no CSV form; use --emit json")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["function", "t", "value"])
        for label, f in result.curves:
            for t, v in to_csv_rows(f, config.compute.sample_count):
                writer.writerow([label, t, v])
        return buffer.getvalue().rstrip("\n")

    def write_output(self, text: str, out: Union[Path, None]) -> None:
        """Write to `out`, or to stdout when no path is given."""
        if out is None:
            sys.stdout.write(text + "\n")
            return
        try:
            out.write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot write {out}: {e}")
        self.logger.info(f"wrote {out}")

    def run(self, args: argparse.Namespace) -> int:
        """
        Execute, write output, and map failures to exit codes.

        Returns:
            0 on success or pass, 1 on a failed check or computation error,
            2 on malformed input
        """
        try:
            result = self.execute(args)
            self.write_output(self.render(result, args.emit), args.out)
        except (InputError, ValidationError) as e:
            return self._fail(e, error_handler.handle_input_error(e))
        except UpsilonError as e:
            return self._fail(e, error_handler.handle_math_error(e))
        except Exception as e:
            self.logger.exception(f"{self.name} failed")
            return self._fail(e, error_handler.handle_general_error(e))
        self.logger.debug(f"{self.name} finished with exit code {result.exit_code}")
        return result.exit_code

    def _fail(self, error: Exception, message: str) -> int:
        print(f"error: {message}", file=sys.stderr)
        return error_handler.exit_code(error)
