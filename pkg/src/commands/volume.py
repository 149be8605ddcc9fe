"""
volume - signed hyperbolic volume of an ideal tetrahedron
"""
from ..command_base import CommandBase, CommandContext
from ..data_models import DocumentError
from ..hypvol import TetConfig, ideal_volume
from ..utils import format_real


class VolumeCommand(CommandBase):
    """Ideal volume of the four points of the input document"""

    def __init__(self):
        super().__init__()
        self.name = "volume"
        self.description = "Ideal tetrahedron volume of a 4-point document"
        self.needs_document = True

    def execute(self, context: CommandContext) -> int:
        document = context.require_document()
        if len(document.points) != 4:
            raise DocumentError(f"points: volume needs exactly 4 points, got {len(document.points)}")
        context.write(format_real(ideal_volume(TetConfig(tuple(document.points)))) + "\n")
        return 0
