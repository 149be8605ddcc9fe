"""
orbit - tetrahedra of the reflection tessellation up to a word length
"""
import argparse

from ..command_base import CommandBase, CommandContext
from ..hypvol import ideal_volume
from ..rigidity import orbit_generators
from ..tess import enumerate_orbit

ORBIT_COLUMNS = ("word", "length", "v0", "v1", "v2", "v3", "volume", "sign")


class OrbitCommand(CommandBase):
    def __init__(self):
        super().__init__()
        self.name = "orbit"
        self.description = "Enumerate the reflection orbit of the base tetrahedron"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--dilation", action="store_true", help="Also use the dilation element and its inverse"
        )

    def execute(self, context: CommandContext) -> int:
        generators, names = orbit_generators(context.args.dilation)
        rows = []
        for word, tet in enumerate_orbit(context.config.L, generators, names=names):
            volume = ideal_volume(tet)
            rows.append(
                (word.label, len(word))
                + tuple(point.to_complex() for point in tet)
                + (volume, "+" if volume > 0 else "-")
            )
        context.write_rows(rows, ORBIT_COLUMNS)
        return 0
