"""
borel - the Borel cocycle of four flags (or its coboundary on five)
"""
from ..borel import FlagConfig, borel_coboundary, borel_cocycle
from ..command_base import CommandBase, CommandContext
from ..data_models import DocumentError
from ..utils import format_real


class BorelCommand(CommandBase):
    """B_n of a 4-flag document; a 5-flag document gives the coboundary"""

    def __init__(self):
        super().__init__()
        self.name = "borel"
        self.description = "Borel cocycle of a 4-flag document (coboundary for 5 flags)"
        self.needs_document = True

    def execute(self, context: CommandContext) -> int:
        document = context.require_document()
        count = len(document.flags)
        if count not in (4, 5):
            raise DocumentError(f"flags: borel needs 4 or 5 flags, got {count}")
        config = FlagConfig(tuple(document.flags))
        if count == 4:
            value = borel_cocycle(config, context.config.seed)
        else:
            value = borel_coboundary(config, context.config.seed)
        context.write(format_real(value) + "\n")
        return 0
