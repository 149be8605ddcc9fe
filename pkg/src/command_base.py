"""
Command Base Classes - Foundation for the subcommand system
"""
import argparse
from dataclasses import dataclass
from typing import Any, Optional, Sequence, TextIO

from .data_models import DocumentError, ExperimentConfig, InputDocument
from .utils import render_rows


@dataclass
class CommandContext:
    """Everything a command needs: parsed flags, merged config, document, output stream"""

    args: argparse.Namespace
    config: ExperimentConfig
    document: Optional[InputDocument]
    out: TextIO

    def write(self, text: str) -> None:
        self.out.write(text)

    def write_rows(self, rows: Sequence[Sequence[Any]], columns: Sequence[str]) -> None:
        self.out.write(render_rows(rows, columns, self.config.format))

    def require_document(self) -> InputDocument:
        if self.document is None:
            raise DocumentError("This command needs an input document (--input)")
        return self.document


class CommandBase:
    """Base class for all subcommands"""

    def __init__(self):
        self.name: str = "unnamed"
        self.description: str = "No description"
        self.needs_document: bool = False

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        Register command-specific options

        The common options are added by the CLI; override to add more.
        """
        pass

    def execute(self, context: CommandContext) -> int:
        """
        Run the command

        Subclasses must override this method.

        Args:
            context: Parsed options, merged configuration and input

        Returns:
            Process exit status
        """
        raise NotImplementedError("Command must implement execute() method")

    def get_name(self) -> str:
        """Get the subcommand name"""
        return self.name

    def get_description(self) -> str:
        """Get the help text"""
        return self.description
