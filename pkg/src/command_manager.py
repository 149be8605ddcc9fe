"""
Command Manager - Discovers and registers subcommands
"""

import importlib
import inspect
import logging
from pathlib import Path
from typing import Dict, List, Optional

from .command_base import CommandBase

logger = logging.getLogger(__name__)


class CommandManager:
    """Manages subcommand discovery and registration"""

    def __init__(self):
        self.commands: Dict[str, CommandBase] = {}
        self._discover_commands()

    def _discover_commands(self):
        """Discover all commands in the commands directory"""
        commands_dir = Path(__file__).parent / "commands"

        if not commands_dir.exists():
            logger.warning("Commands directory not found: %s", commands_dir)
            return

        for command_file in sorted(commands_dir.glob("*.py")):
            if command_file.name.startswith("_"):
                continue  # Skip __init__.py and private files

            module_name = command_file.stem
            try:
                module = importlib.import_module(f"{__package__}.commands.{module_name}")
            except ImportError as e:
                logger.error("Error loading command module %s: %s", module_name, e)
                continue

            # Find all classes that inherit from CommandBase
            for name, obj in inspect.getmembers(module, inspect.isclass):
                if issubclass(obj, CommandBase) and obj is not CommandBase and obj.__module__ == module.__name__:
                    command = obj()
                    if command.name in self.commands:
                        logger.warning("Duplicate command name %s in %s", command.name, module_name)
                        continue
                    self.commands[command.name] = command
                    logger.debug("Discovered command: %s from %s", command.name, module_name)

    def get_command(self, name: str) -> Optional[CommandBase]:
        """
        Get a specific command by name

        Args:
            name: Subcommand name as typed on the command line

        Returns:
            Command instance or None if not found
        """
        return self.commands.get(name)

    def get_command_names(self) -> List[str]:
        """Sorted list of all command names"""
        return sorted(self.commands)
