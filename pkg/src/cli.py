"""
Command line front end

Builds the argparse parser from the discovered subcommands, resolves the
experiment configuration, runs one command and turns every failure into a
single JSON line on stderr.
"""

import argparse
import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, TextIO

from .command_base import CommandContext
from .command_manager import CommandManager
from .config_manager import ConfigManager
from .cplx_geom import DimensionMismatchError, IllConditionedError
from .data_models import OUTPUT_FORMATS, DocumentError, ExperimentConfig, InputDocument
from .rigidity import RecoveryError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageError(ValueError):
    code = "usage"


class JsonArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting"""

    def error(self, message):
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = JsonArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON input document ('-' for stdin)")
    common.add_argument("--output", "-o", help="Write output to this file instead of stdout")
    common.add_argument("--n", type=int, help="Ambient dimension")
    common.add_argument("--seed", type=int, help="Global seed")
    common.add_argument("--tol", type=float, help="Maximality tolerance")
    common.add_argument("--words", type=int, help="Maximum word length L")
    common.add_argument("--steps", type=int, help="Number of sequence steps K")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Table output format")
    common.add_argument("--budget", type=int, help="Optimizer evaluation budget")
    common.add_argument("--starts", type=int, help="Optimizer starts")
    common.add_argument("--eps", dest="eps_schedule", help="Perturbation schedule in k, e.g. '2^-k'")
    common.add_argument("--drift", type=float, help="Drift scale of the conjugating sequence")
    common.add_argument("--no-delta", action="store_true", help="Skip the dilation variant")
    common.add_argument("--no-user-config", action="store_true", help="Ignore the user global.json")
    common.add_argument("--verbose", "-v", action="count", default=0, help="More log output (repeatable)")
    return common


def configure_logging(verbosity: int):
    """WARNING by default, INFO with -v, DEBUG with -vv"""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def build_parser(manager: CommandManager) -> argparse.ArgumentParser:
    """Parser with one subcommand per discovered command"""
    parser = JsonArgumentParser(
        prog="borel-rigidity",
        description="Borel cocycle, Veronese flags and rigidity experiments",
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for name in manager.get_command_names():
        command = manager.get_command(name)
        subparser = subparsers.add_parser(name, parents=[common], help=command.get_description())
        command.add_arguments(subparser)
    return parser


def _flag_overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "n": args.n,
        "seed": args.seed,
        "tol": args.tol,
        "L": args.words,
        "K": args.steps,
        "format": args.format,
        "budget": args.budget,
        "starts": args.starts,
        "eps_schedule": args.eps_schedule,
        "drift": args.drift,
        "delta": False if args.no_delta else None,
    }


def load_document(source: Optional[str], stdin: Optional[TextIO] = None) -> Optional[InputDocument]:
    if source is None:
        return None
    if source == "-":
        return InputDocument.loads((stdin or sys.stdin).read())
    path = Path(source)
    if not path.exists():
        raise DocumentError(f"Input file not found: {path}")
    return InputDocument.load(path)


def resolve_config(
    args: argparse.Namespace,
    document: Optional[InputDocument],
    config_manager: Optional[ConfigManager] = None,
) -> ExperimentConfig:
    """defaults < global.json < document config < command line flags"""
    if args.no_user_config:
        config = ExperimentConfig()
    else:
        config = (config_manager or ConfigManager()).load_config()
    if document is not None:
        config = config.merged(document.config)
        if document.dimension() is not None and args.n is None:
            config = config.merged({"n": document.dimension()})
    return config.merged(_flag_overrides(args))


def error_code(error: Exception) -> str:
    if hasattr(error, "code") and isinstance(error.code, str):
        return error.code
    if isinstance(error, IllConditionedError):
        return "ill_conditioned"
    if isinstance(error, DimensionMismatchError):
        return "dimension_mismatch"
    if isinstance(error, OSError):
        return "io_error"
    return "invalid_value"


def execute(
    args: argparse.Namespace,
    manager: CommandManager,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
    config_manager: Optional[ConfigManager] = None,
) -> int:
    """Run the parsed command, returning the exit status"""
    out = out or sys.stdout
    err = err or sys.stderr
    command = manager.get_command(args.command)
    buffer = io.StringIO()
    try:
        document = load_document(args.input)
        if command.needs_document and document is None:
            raise DocumentError(f"{command.name} needs an input document (--input)")
        config = resolve_config(args, document, config_manager)
        context = CommandContext(args=args, config=config, document=document, out=buffer)
        status = command.execute(context)
        if args.output:
            Path(args.output).write_text(buffer.getvalue())
        else:
            out.write(buffer.getvalue())
        return status
    except (DocumentError, RecoveryError, ValueError, OSError) as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        record = {"error": error_code(e), "message": str(e), "command": args.command}
        err.write(json.dumps(record) + "\n")
        return EXIT_ERROR


def run(
    argv: List[str],
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
    config_manager: Optional[ConfigManager] = None,
) -> int:
    """Parse argv and run; usage errors are reported like any other error"""
    err = err or sys.stderr
    manager = CommandManager()
    try:
        args = build_parser(manager).parse_args(argv)
    except UsageError as e:
        err.write(json.dumps({"error": e.code, "message": str(e), "command": None}) + "\n")
        return EXIT_ERROR
    configure_logging(args.verbose)
    return execute(args, manager, out, err, config_manager)
