"""
veronese - Veronese flags of the document points, as a flag document
"""
import json

from ..command_base import CommandBase, CommandContext
from ..data_models import DocumentError, InputDocument
from ..veronese import veronese_flag


class VeroneseCommand(CommandBase):
    def __init__(self):
        super().__init__()
        self.name = "veronese"
        self.description = "Veronese flags of the document points, emitted as a document"
        self.needs_document = True

    def execute(self, context: CommandContext) -> int:
        document = context.require_document()
        if not document.points:
            raise DocumentError("points: veronese needs at least one point")
        n = context.config.n
        flags = [veronese_flag(point, n) for point in document.points]
        output = InputDocument(n=n, points=list(document.points), flags=flags)
        context.write(json.dumps(output.to_dict(), indent=2) + "\n")
        return 0
