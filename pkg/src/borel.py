"""
The Borel cocycle on four-tuples of complete flags

B_n sums the volumes of the quotient classes Q(F, J) over all multi-indices
J in {0..n-1}^4. Only classes of dimension m = 2 contribute.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .cplx_geom import (
    AffineFlag,
    Flag,
    check_same_dimension,
    decorate,
    orthonormal_basis,
    stacked_ranks,
)
from .hypvol import SpannedClass, class_volume, nu3
from .utils import compensated_sum, derive_seed

logger = logging.getLogger(__name__)

DEFAULT_DECORATION_SEED = 0


@dataclass(frozen=True)
class MultiIndex:
    """J = (j0, j1, j2, j3) with every entry in 0..n-1"""
    j: Tuple[int, int, int, int]

    def __post_init__(self):
        j = tuple(int(value) for value in self.j)
        if len(j) != 4:
            raise ValueError(f"A multi-index has 4 entries, got {len(j)}")
        object.__setattr__(self, "j", j)

    def check(self, n: int) -> None:
        if any(not 0 <= value < n for value in self.j):
            raise ValueError(f"Multi-index {self.j} out of range for n = {n}")

    @classmethod
    def all(cls, n: int) -> Iterator["MultiIndex"]:
        """Every multi-index for dimension n, in lexicographic order"""
        for j in itertools.product(range(n), repeat=4):
            yield cls(j)


@dataclass(frozen=True)
class FlagConfig:
    """Ordered tuple of 4 (or 5) flags of a common C^n"""
    flags: Tuple[Flag, ...]

    def __post_init__(self):
        flags = tuple(self.flags)
        if len(flags) not in (4, 5):
            raise ValueError(f"A flag configuration has 4 or 5 flags, got {len(flags)}")
        check_same_dimension(flags)
        object.__setattr__(self, "flags", flags)

    @property
    def n(self) -> int:
        return self.flags[0].n

    def __iter__(self) -> Iterator[Flag]:
        return iter(self.flags)

    def __getitem__(self, index: int) -> Flag:
        return self.flags[index]

    def __len__(self) -> int:
        return len(self.flags)

    def permuted(self, permutation: Sequence[int]) -> "FlagConfig":
        return FlagConfig(tuple(self.flags[i] for i in permutation))

    def transformed(self, matrix: np.ndarray) -> "FlagConfig":
        return FlagConfig(tuple(flag.transformed(matrix) for flag in self.flags))

    def conjugate(self) -> "FlagConfig":
        return FlagConfig(tuple(flag.conjugate() for flag in self.flags))

    def omit(self, index: int) -> "FlagConfig":
        return FlagConfig(self.flags[:index] + self.flags[index + 1:])


def decorate_config(config: FlagConfig, seed: int = DEFAULT_DECORATION_SEED) -> Tuple[AffineFlag, ...]:
    """Decorate every flag with a seed derived from (seed, position)"""
    return tuple(decorate(flag, derive_seed(seed, index)) for index, flag in enumerate(config))


def _check_affine(flags: Sequence[AffineFlag]) -> int:
    if len(flags) != 4:
        raise ValueError(f"Expected 4 affine flags, got {len(flags)}")
    return check_same_dimension([flag.flag for flag in flags])


def _quotient_vectors(flags: Sequence[AffineFlag], j: Sequence[int], m: int) -> np.ndarray:
    """Coordinates (m x 4) of the v_i^{j_i+1} in an orthonormal basis of W_num minus W_den"""
    den = np.hstack([flag.flag.subspace_basis(ji) for flag, ji in zip(flags, j)])
    num = np.hstack([flag.flag.subspace_basis(ji + 1) for flag, ji in zip(flags, j)])
    vectors = np.column_stack([flag.decoration[:, ji] for flag, ji in zip(flags, j)])

    den_basis = orthonormal_basis(den)
    if den_basis.shape[1]:
        num = num - den_basis @ (den_basis.conj().T @ num)
        vectors = vectors - den_basis @ (den_basis.conj().T @ vectors)
    u, _, _ = np.linalg.svd(num, full_matrices=False)
    quotient_basis = u[:, :m]
    return quotient_basis.conj().T @ vectors


def quotient_class(flags: Sequence[AffineFlag], j: MultiIndex) -> SpannedClass:
    """
    The class Q(F, J) of the decoration images in W_num / W_den

    W_den = sum F_i^{j_i}, W_num = sum F_i^{j_i + 1}. The quotient is realized
    as the orthogonal complement of W_den inside W_num.

    Raises:
        IllConditionedError: If a rank decision is ambiguous
    """
    n = _check_affine(flags)
    j.check(n)
    stack = np.zeros((2, n, 4 * n), dtype=complex)
    for i, (flag, ji) in enumerate(zip(flags, j.j)):
        stack[0, :, i * n:i * n + ji] = flag.flag.subspace_basis(ji)
        stack[1, :, i * n:i * n + ji + 1] = flag.flag.subspace_basis(ji + 1)
    den_dim, num_dim = stacked_ranks(stack)
    m = int(num_dim - den_dim)
    if m == 0:
        return SpannedClass(0, None, degenerate=True)
    return SpannedClass(m, _quotient_vectors(flags, j.j, m))


def _subspace_dimensions(flags: Sequence[AffineFlag], n: int) -> np.ndarray:
    """dim(F_0^{a} + F_1^{b} + F_2^{c} + F_3^{d}) for all a, b, c, d in 0..n"""
    steps = np.array(list(itertools.product(range(n + 1), repeat=4)))
    columns = np.arange(n)
    blocks = []
    for i, flag in enumerate(flags):
        mask = columns[None, None, :] < steps[:, i, None, None]
        blocks.append(flag.flag.basis[None, :, :] * mask)
    stack = np.concatenate(blocks, axis=2)
    return stacked_ranks(stack).reshape((n + 1,) * 4)


def borel_cocycle_affine(flags: Sequence[AffineFlag]) -> float:
    """
    B_n of four decorated flags

    All subspace-sum dimensions are computed in one batched SVD; quotient
    classes are only built for the multi-indices with m = 2.

    Raises:
        IllConditionedError: If a rank decision is ambiguous
    """
    n = _check_affine(flags)
    dims = _subspace_dimensions(flags, n)
    inner = dims[:n, :n, :n, :n]
    outer = dims[1:, 1:, 1:, 1:]
    contributing = np.argwhere(outer - inner == 2)

    contributions: List[float] = []
    for j in contributing:
        value = class_volume(SpannedClass(2, _quotient_vectors(flags, tuple(j), 2)))
        logger.debug("J=%s contributes %.17g", tuple(int(x) for x in j), value)
        contributions.append(value)
    return compensated_sum(contributions)


def borel_cocycle(config: FlagConfig, seed: int = DEFAULT_DECORATION_SEED) -> float:
    """
    The Borel cocycle B_n(F_0, F_1, F_2, F_3)

    Decorations are drawn from seeds derived from seed; the value does not
    depend on them.

    Raises:
        ValueError: If the configuration does not hold exactly 4 flags
        IllConditionedError: If a rank decision is ambiguous
    """
    if len(config) != 4:
        raise ValueError(f"borel_cocycle takes 4 flags, got {len(config)}")
    return borel_cocycle_affine(decorate_config(config, seed))


def borel_coboundary(config: FlagConfig, seed: int = DEFAULT_DECORATION_SEED) -> float:
    """Alternating sum of B_n over the five faces of a 5-tuple"""
    if len(config) != 5:
        raise ValueError(f"borel_coboundary takes 5 flags, got {len(config)}")
    return compensated_sum(
        (-1) ** i * borel_cocycle(config.omit(i), seed) for i in range(5)
    )


def block_join(f: AffineFlag, g: AffineFlag) -> AffineFlag:
    """
    Join decorated flags of C^{n1} and C^{n2} into one of C^{n1+n2}

    H^l = F^l for l <= n1 and F^{n1} + G^{l-n1} beyond, with the decorations
    concatenated.
    """
    n1, n2 = f.n, g.n
    decoration = np.zeros((n1 + n2, n1 + n2), dtype=complex)
    decoration[:n1, :n1] = f.decoration
    decoration[n1:, n1:] = g.decoration
    return AffineFlag.from_decoration(decoration)


def block_join_many(flags: Sequence[AffineFlag]) -> AffineFlag:
    """Iterated block join over any number of blocks"""
    if not flags:
        raise ValueError("block_join_many needs at least one affine flag")
    joined = flags[0]
    for flag in flags[1:]:
        joined = block_join(joined, flag)
    return joined


def _check_partition(n: int, partition: Sequence[int]) -> Tuple[int, ...]:
    parts = tuple(int(part) for part in partition)
    if not parts or any(part <= 0 for part in parts):
        raise ValueError(f"Partition parts must be positive integers: {partition}")
    if sum(parts) != n:
        raise ValueError(f"Partition {parts} does not sum to {n}")
    return parts


def partition_bound(n: int, partition: Sequence[int]) -> Tuple[float, float, bool]:
    """
    Bound on |B_n| over a block-join tuple versus the full bound

    Returns:
        (sum_i C(n_i + 1, 3) nu3, C(n + 1, 3) nu3, True iff the partition has
        at least two blocks)
    """
    parts = _check_partition(n, partition)
    block_total = sum(math.comb(part + 1, 3) for part in parts)
    return block_total * nu3(), math.comb(n + 1, 3) * nu3(), len(parts) >= 2


def partition_chain(n: int, partition: Sequence[int]) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Exact coefficients of nu3 in the chain of estimates for a partition

    Returns:
        (sum_i (n_i^2 - 1) n_i / 6, max_i (n_i^2 - 1) n / 6, (n^2 - 1) n / 6)
    """
    parts = _check_partition(n, partition)
    exact = sum(Fraction((part * part - 1) * part, 6) for part in parts)
    intermediate = Fraction(max(part * part - 1 for part in parts) * n, 6)
    full = Fraction((n * n - 1) * n, 6)
    return exact, intermediate, full


def integer_partitions(n: int) -> List[Tuple[int, ...]]:
    """All partitions of n as non-increasing tuples, (n) first"""
    if n < 1:
        raise ValueError("n must be positive")

    def parts_at_most(remaining: int, largest: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in parts_at_most(remaining - part, part):
                yield (part,) + rest

    return list(parts_at_most(n, n))
