"""
Complex projective and flag linear algebra

Points of the complex projective line, linear subspaces, complete flags and
decorated (affine) flags of C^n, together with the distances and rank tests
the cocycle computations are built on.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from .utils import random_complex_matrix

logger = logging.getLogger(__name__)

# Relative singular value threshold for numerical rank
TAU_RANK = 1e-9
# Equality threshold for projector and flag distances
TAU_EQ = 1e-8
# Relative singular values at or below this are treated as exact zeros
TAU_ZERO = 1e-12
# Quantization grid for hashable point keys
KEY_GRID = 1e-10


class DimensionMismatchError(ValueError):
    """Objects of different ambient dimensions were combined"""


class IllConditionedError(ValueError):
    """A rank decision fell between roundoff and the rank threshold"""


def stacked_ranks(stack: np.ndarray, strict: bool = True) -> np.ndarray:
    """
    Numerical ranks of a stack of matrices

    Args:
        stack: Array of shape (..., rows, cols)
        strict: Raise instead of guessing when a normalized singular value
            lies in the ambiguous band (TAU_ZERO, TAU_RANK]

    Returns:
        Integer array of shape stack.shape[:-2]

    Raises:
        IllConditionedError: If strict and a rank decision is ambiguous
    """
    stack = np.asarray(stack)
    if stack.shape[-1] == 0 or stack.shape[-2] == 0:
        return np.zeros(stack.shape[:-2], dtype=int)
    singular = np.linalg.svd(stack, compute_uv=False)
    largest = singular[..., :1]
    safe = np.where(largest > 0, largest, 1.0)
    relative = np.where(largest > 0, singular / safe, 0.0)
    if strict:
        ambiguous = (relative > TAU_ZERO) & (relative <= TAU_RANK)
        if np.any(ambiguous):
            worst = float(relative[ambiguous].max())
            raise IllConditionedError(
                f"ill-conditioned configuration: normalized singular value {worst:.3e} "
                f"is within the rank threshold {TAU_RANK:g}"
            )
    return np.count_nonzero(relative > TAU_RANK, axis=-1)


def numerical_rank(matrix: np.ndarray, strict: bool = True) -> int:
    """Numerical rank of a single matrix (see stacked_ranks)"""
    return int(stacked_ranks(np.asarray(matrix)[None, ...], strict=strict)[0])


def orthonormal_basis(matrix: np.ndarray, strict: bool = True) -> np.ndarray:
    """Orthonormal basis of the column span, shape (rows, rank)"""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape[1] == 0:
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    rank = numerical_rank(matrix, strict=strict)
    u, _, _ = np.linalg.svd(matrix, full_matrices=False)
    return u[:, :rank]


def projector_distance(a: np.ndarray, b: np.ndarray) -> float:
    """
    Operator-norm distance between the orthogonal projectors onto two spans

    Both arguments must have orthonormal columns. Spans of different
    dimensions are at distance 1.
    """
    if a.shape[1] != b.shape[1]:
        return 1.0
    if a.shape[1] == 0:
        return 0.0
    angles = linalg.subspace_angles(a, b)
    return float(np.sin(np.max(angles)))


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    Point [x:y] of the complex projective line

    Stored as the normalized representative: unit Euclidean norm, first
    nonzero coordinate real positive. The point at infinity is [1:0].
    """
    x: complex
    y: complex

    def __post_init__(self):
        x, y = complex(self.x), complex(self.y)
        if not all(math.isfinite(part) for part in (x.real, x.imag, y.real, y.imag)):
            raise ValueError("Homogeneous coordinates must be finite")
        norm = math.hypot(abs(x), abs(y))
        if norm == 0.0:
            raise ValueError("Homogeneous coordinates cannot both be zero")
        x, y = x / norm, y / norm
        lead = x if abs(x) > TAU_ZERO else y
        phase = lead / abs(lead)
        x, y = x / phase, y / phase
        if abs(x) <= TAU_ZERO:
            x, y = 0j, complex(abs(y), 0.0)
        elif abs(y) <= TAU_ZERO:
            x, y = complex(abs(x), 0.0), 0j
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_complex(cls, z: complex) -> "ProjectivePoint":
        """Point for z in C, or infinity for any infinite input"""
        z = complex(z)
        if math.isinf(z.real) or math.isinf(z.imag):
            return cls(1.0, 0.0)
        if math.isnan(z.real) or math.isnan(z.imag):
            raise ValueError("Cannot build a projective point from NaN")
        return cls(z, 1.0)

    @classmethod
    def infinity(cls) -> "ProjectivePoint":
        return cls(1.0, 0.0)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=complex)

    @property
    def is_infinity(self) -> bool:
        return abs(self.y) <= TAU_ZERO

    def to_complex(self) -> complex:
        """Affine coordinate x/y, complex infinity for [1:0]"""
        if self.is_infinity:
            return complex(math.inf, 0.0)
        return self.x / self.y

    def chordal_distance(self, other: "ProjectivePoint") -> float:
        """Chordal distance |x1 y2 - x2 y1| of normalized representatives, in [0, 1]"""
        return abs(self.x * other.y - other.x * self.y)

    def conjugate(self) -> "ProjectivePoint":
        return ProjectivePoint(self.x.conjugate(), self.y.conjugate())

    def key(self) -> Tuple[float, float, float, float]:
        """Hashable key snapped to a fixed grid"""
        parts = (self.x.real, self.x.imag, self.y.real, self.y.imag)
        return tuple(round(part / KEY_GRID) * KEY_GRID + 0.0 for part in parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.chordal_distance(other) < TAU_EQ

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        if self.is_infinity:
            return "ProjectivePoint(inf)"
        z = self.to_complex()
        return f"ProjectivePoint({z.real:.6g}{z.imag:+.6g}j)"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of C^n given by a basis of full column rank"""
    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex, copy=True)
        if basis.ndim != 2:
            raise ValueError("Subspace basis must be a matrix")
        if numerical_rank(basis, strict=False) != basis.shape[1]:
            raise ValueError("Subspace basis does not have full column rank")
        object.__setattr__(self, "basis", _readonly(basis))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def orthonormal(self) -> np.ndarray:
        return orthonormal_basis(self.basis, strict=False)

    def projector(self) -> np.ndarray:
        q = self.orthonormal()
        return q @ q.conj().T

    def distance(self, other: "Subspace") -> float:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"Ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )
        return projector_distance(self.orthonormal(), other.orthonormal())

    def intersection(self, other: "Subspace") -> "Subspace":
        """
        Intersection of two subspaces

        Raises:
            ValueError: If the intersection is the zero subspace
        """
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"Ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )
        a, b = self.orthonormal(), other.orthonormal()
        kernel = linalg.null_space(np.hstack([a, -b]), rcond=TAU_RANK)
        if kernel.shape[1] == 0:
            raise ValueError("Subspaces intersect trivially")
        return Subspace(orthonormal_basis(a @ kernel[: a.shape[1]], strict=False))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.distance(other) < TAU_EQ

    __hash__ = None


def _adapted_orthonormal(basis: np.ndarray) -> np.ndarray:
    """
    Orthonormal adapted basis with the same nested spans

    An already orthonormal input is kept bit for bit so that flags read back
    from a document reproduce the flags that were written. The result is
    always C-contiguous: BLAS rounding depends on memory layout.
    """
    n = basis.shape[0]
    if np.allclose(basis.conj().T @ basis, np.eye(n), rtol=0.0, atol=1e-13):
        return np.ascontiguousarray(basis)
    q, r = linalg.qr(basis)
    diagonal = np.abs(np.diag(r))
    scale = np.linalg.norm(basis, axis=0)
    if np.any(diagonal <= TAU_RANK * np.max(scale)):
        raise IllConditionedError("degenerate flag: adapted basis is numerically singular")
    phases = np.diag(r) / diagonal
    return np.ascontiguousarray(q * phases[None, :])


@dataclass(frozen=True, eq=False)
class Flag:
    """
    Complete flag of C^n

    Column i of the stored n x n basis is a unit vector with
    F^i = span(columns 1..i); the basis is orthonormal.
    """
    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex, copy=True)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1] or basis.shape[0] == 0:
            raise ValueError(f"Flag basis must be a non-empty square matrix, got shape {basis.shape}")
        if not np.all(np.isfinite(basis)):
            raise ValueError("Flag basis contains non-finite entries")
        object.__setattr__(self, "basis", _readonly(_adapted_orthonormal(basis)))

    @classmethod
    def standard(cls, n: int) -> "Flag":
        """span(e_1) < span(e_1, e_2) < ..."""
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def reversed_standard(cls, n: int) -> "Flag":
        """span(e_n) < span(e_n, e_{n-1}) < ..."""
        return cls(np.eye(n, dtype=complex)[:, ::-1])

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def subspace_basis(self, i: int) -> np.ndarray:
        """Orthonormal basis of F^i, shape (n, i)"""
        if not 0 <= i <= self.n:
            raise ValueError(f"Flag index {i} out of range 0..{self.n}")
        return self.basis[:, :i]

    def subspace(self, i: int) -> Subspace:
        return Subspace(self.subspace_basis(i))

    def projector(self, i: int) -> np.ndarray:
        q = self.subspace_basis(i)
        return q @ q.conj().T

    def transformed(self, matrix: np.ndarray) -> "Flag":
        """Image g.F under an invertible matrix"""
        matrix = np.asarray(matrix)
        if matrix.shape != (self.n, self.n):
            raise DimensionMismatchError(f"Cannot apply a {matrix.shape} matrix to a flag of C^{self.n}")
        return Flag(matrix @ self.basis)

    def conjugate(self) -> "Flag":
        """Entrywise complex conjugate flag"""
        return Flag(self.basis.conj())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Flag):
            return NotImplemented
        return self.n == other.n and flag_distance(self, other) < TAU_EQ

    __hash__ = None


def decoration_is_valid(flag: Flag, decoration: np.ndarray) -> bool:
    """
    Check F^i = C v^i + F^{i-1} for every i

    In the orthonormal adapted basis the coordinates of v^i must vanish past
    position i and be nonzero at position i.
    """
    decoration = np.asarray(decoration)
    if decoration.shape != (flag.n, flag.n):
        return False
    coords = flag.basis.conj().T @ decoration
    norms = np.linalg.norm(decoration, axis=0)
    for i in range(flag.n):
        if norms[i] == 0.0:
            return False
        if np.linalg.norm(coords[i + 1:, i]) > TAU_EQ * norms[i]:
            return False
        if abs(coords[i, i]) <= TAU_RANK * norms[i]:
            return False
    return True


@dataclass(frozen=True, eq=False)
class AffineFlag:
    """Complete flag with decoration vectors v^1..v^n (columns of decoration)"""
    flag: Flag
    decoration: np.ndarray

    def __post_init__(self):
        decoration = np.array(self.decoration, dtype=complex, order="C", copy=True)
        if not decoration_is_valid(self.flag, decoration):
            raise ValueError("Decoration is not adapted to the flag")
        object.__setattr__(self, "decoration", _readonly(decoration))

    @classmethod
    def from_decoration(cls, decoration: np.ndarray) -> "AffineFlag":
        """The decoration vectors determine the flag they span"""
        return cls(Flag(decoration), decoration)

    @property
    def n(self) -> int:
        return self.flag.n

    def strip(self) -> Flag:
        return self.flag


def flag_distance(f: Flag, g: Flag) -> float:
    """
    Distance between two complete flags

    Max over i = 1..n-1 of the operator-norm distance between the orthogonal
    projectors onto F^i and G^i.

    Raises:
        DimensionMismatchError: If the flags live in different dimensions
    """
    if f.n != g.n:
        raise DimensionMismatchError(f"Flags of C^{f.n} and C^{g.n} cannot be compared")
    distance = 0.0
    for i in range(1, f.n):
        distance = max(distance, projector_distance(f.subspace_basis(i), g.subspace_basis(i)))
    return distance


def decorate(flag: Flag, seed: int) -> AffineFlag:
    """
    Choose decoration vectors for a flag, deterministically from seed

    v^i = c_i q_i + sum_{l<i} c_l q_l with the q's the orthonormal adapted
    basis and |c_i| >= 1/2, so every v^i is well away from F^{i-1}.
    """
    rng = np.random.default_rng(seed)
    n = flag.n
    coeffs = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    coeffs = np.triu(coeffs)
    magnitudes = rng.uniform(0.5, 1.5, size=n)
    phases = np.exp(2j * math.pi * rng.random(n))
    coeffs[np.diag_indices(n)] = magnitudes * phases
    return AffineFlag(flag, flag.basis @ coeffs)


def check_same_dimension(flags: Sequence[Flag]) -> int:
    """Common ambient dimension of the flags"""
    dims = {flag.n for flag in flags}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Flags have different ambient dimensions: {sorted(dims)}")
    return dims.pop()


def general_position(flags: Sequence[Flag]) -> bool:
    """
    True iff every selection F_1^{j_1} + ... with sum j <= n has dimension sum j

    Raises:
        ValueError: Unless 2 to 4 flags are given
        DimensionMismatchError: If the flags live in different dimensions
    """
    if not 2 <= len(flags) <= 4:
        raise ValueError(f"general_position takes 2 to 4 flags, got {len(flags)}")
    n = check_same_dimension(flags)
    selections = [
        j for j in itertools.product(range(n + 1), repeat=len(flags))
        if 0 < sum(j) <= n
    ]
    stack = np.zeros((len(selections), n, n), dtype=complex)
    for row, selection in enumerate(selections):
        column = 0
        for flag, j in zip(flags, selection):
            stack[row, :, column:column + j] = flag.subspace_basis(j)
            column += j
    ranks = stacked_ranks(stack, strict=False)
    expected = np.array([sum(j) for j in selections])
    return bool(np.all(ranks == expected))


def random_flag(rng: np.random.Generator, n: int) -> Flag:
    """Flag spanned by a complex Gaussian adapted basis"""
    return Flag(random_complex_matrix(rng, n))
