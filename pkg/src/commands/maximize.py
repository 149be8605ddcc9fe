"""
maximize - derivative-free search for max |B_n| with recovery of the argmax
"""
import logging

from ..command_base import CommandBase, CommandContext
from ..rigidity import RecoveryError, maximality_bound, maximize_borel, recover_normalizer
from ..veronese import act_on_flag, veronese_point_recover

logger = logging.getLogger(__name__)

MAXIMIZE_COLUMNS = ("quantity", "value")


class MaximizeCommand(CommandBase):
    def __init__(self):
        super().__init__()
        self.name = "maximize"
        self.description = "Maximize |B_n| over flag configurations and recover the argmax"

    def execute(self, context: CommandContext) -> int:
        config = context.config
        n = config.n
        flags, value = maximize_borel(n, config.budget, config.seed, config.starts)
        bound = maximality_bound(n)
        defect = bound - value
        rows = [("n", n), ("value", value), ("bound", bound), ("defect", defect)]

        # accept the optimizer's own defect so the argmax can still be normalized
        tol = max(config.tol, 2.0 * defect)
        try:
            normalizer = recover_normalizer(flags, tol, config.seed)
        except RecoveryError as e:
            logger.warning("argmax could not be normalized: %s", e)
            rows.append(("status", e.code))
        else:
            rows.append(("status", "ok"))
            rows.append(("residual", normalizer.residual))
            rows.append(("apex", normalizer.tetrahedron[2].to_complex()))
            for index, flag in enumerate(flags):
                point, residual = veronese_point_recover(act_on_flag(normalizer.element, flag))
                rows.append((f"vertex{index}", point.to_complex()))
                rows.append((f"vertex{index}_residual", residual))
        context.write_rows(rows, MAXIMIZE_COLUMNS)
        return 0
