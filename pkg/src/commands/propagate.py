"""
propagate - synthetic sequence, per-step normalizer recovery and its propagation
"""
from ..command_base import CommandBase, CommandContext
from ..rigidity import PROPAGATION_COLUMNS, propagate_and_recover, synthesize_sequence


class PropagateCommand(CommandBase):
    def __init__(self):
        super().__init__()
        self.name = "propagate"
        self.description = "Per-step recovery report for a synthetic asymptotically maximal sequence"

    def execute(self, context: CommandContext) -> int:
        config = context.config
        reps, samples = synthesize_sequence(
            n=config.n,
            K=config.K,
            drift=config.drift_value(),
            eps_schedule=config.eps_schedule,
            seed=config.seed,
            L=config.L,
            delta=config.delta,
        )
        report = propagate_and_recover(
            samples, reps, L=config.L, tol=config.tol, seed=config.seed, delta=config.delta
        )
        context.write_rows(report.to_rows(), PROPAGATION_COLUMNS)
        return 0
