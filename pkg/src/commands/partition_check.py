"""
partition-check - block-join bounds against the full bound for every partition of n
"""
from ..borel import integer_partitions, partition_bound, partition_chain
from ..command_base import CommandBase, CommandContext
from ..hypvol import nu3

PARTITION_COLUMNS = ("partition", "block_bound", "intermediate", "full_bound", "relation")


class PartitionCheckCommand(CommandBase):
    def __init__(self):
        super().__init__()
        self.name = "partition-check"
        self.description = "Compare sum C(n_i+1,3) nu3 with C(n+1,3) nu3 over all partitions of n"

    def execute(self, context: CommandContext) -> int:
        n = context.config.n
        rows = []
        for partition in integer_partitions(n):
            block, full, _ = partition_bound(n, partition)
            exact, intermediate, full_exact = partition_chain(n, partition)
            relation = "strict" if exact < full_exact else "equality"
            label = "(" + ",".join(str(part) for part in partition) + ")"
            rows.append((label, block, float(intermediate) * nu3(), full, relation))
        context.write_rows(rows, PARTITION_COLUMNS)
        return 0
