"""
Volumes of ideal hyperbolic tetrahedra

The volume of the ideal tetrahedron with vertices z0..z3 on the sphere at
infinity is the Bloch-Wigner dilogarithm of their cross ratio.
"""

import cmath
import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.special import spence

from .cplx_geom import ProjectivePoint

logger = logging.getLogger(__name__)

# Brackets below this are treated as coincident points
COINCIDENCE_TOL = 1e-14
# Relative norm below which a quotient vector counts as zero
ZERO_VECTOR_TOL = 1e-9

OMEGA = cmath.exp(1j * math.pi / 3)


def bloch_wigner(z: complex) -> float:
    """
    Bloch-Wigner dilogarithm D(z) = Im Li2(z) + arg(1 - z) log|z|

    Inputs are moved into the region |z| <= 1, Re z <= 1/2 with
    D(1/z) = -D(z) and D(1 - z) = -D(z) before evaluating the dilogarithm.
    Real inputs, including 0, 1 and infinity, give 0.

    Args:
        z: Any complex number; infinite or NaN parts count as infinity

    Returns:
        D(z)
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return 0.0
    if z.imag == 0.0:
        return 0.0
    if abs(z) > 1.0:
        return -bloch_wigner(1.0 / z)
    if z.real > 0.5:
        return -bloch_wigner(1.0 - z)
    # scipy's spence(w) is Li2(1 - w)
    dilog = complex(spence(1.0 - z))
    return dilog.imag + cmath.phase(1.0 - z) * math.log(abs(z))


@functools.lru_cache(maxsize=None)
def nu3() -> float:
    """Volume of the regular ideal tetrahedron, the maximum of D"""
    return bloch_wigner(OMEGA)


@dataclass(frozen=True)
class TetConfig:
    """Ordered four vertices of an ideal tetrahedron (degenerate allowed)"""
    points: Tuple[ProjectivePoint, ProjectivePoint, ProjectivePoint, ProjectivePoint]

    def __post_init__(self):
        points = tuple(self.points)
        if len(points) != 4:
            raise ValueError(f"A tetrahedron has 4 vertices, got {len(points)}")
        if not all(isinstance(point, ProjectivePoint) for point in points):
            raise TypeError("Tetrahedron vertices must be ProjectivePoint instances")
        object.__setattr__(self, "points", points)

    @classmethod
    def from_complex(cls, *values: complex) -> "TetConfig":
        """Build from affine coordinates (math.inf or complex('inf') for infinity)"""
        return cls(tuple(ProjectivePoint.from_complex(value) for value in values))

    def __iter__(self) -> Iterator[ProjectivePoint]:
        return iter(self.points)

    def __getitem__(self, index: int) -> ProjectivePoint:
        return self.points[index]

    def __len__(self) -> int:
        return 4

    def permuted(self, permutation: Sequence[int]) -> "TetConfig":
        return TetConfig(tuple(self.points[i] for i in permutation))

    def to_complex(self) -> Tuple[complex, ...]:
        return tuple(point.to_complex() for point in self.points)

    def key(self) -> Tuple:
        """Order-independent key of the vertex set"""
        return tuple(sorted(point.key() for point in self.points))


BASE_TETRAHEDRON = TetConfig.from_complex(0.0, 1.0, OMEGA, math.inf)


def _bracket(p: ProjectivePoint, q: ProjectivePoint) -> complex:
    return p.x * q.y - q.x * p.y


def cross_ratio(t: TetConfig) -> complex:
    """
    cr = ((z3 - z0)(z2 - z1)) / ((z3 - z1)(z2 - z0)) in homogeneous form

    (0, 1, w, inf) maps to w. Coincident vertices give 0, 1 or complex
    infinity; 0/0 is resolved to 1.
    """
    z0, z1, z2, z3 = t.points
    numerator = _bracket(z3, z0) * _bracket(z2, z1)
    denominator = _bracket(z3, z1) * _bracket(z2, z0)
    numerator_zero = abs(numerator) <= COINCIDENCE_TOL
    denominator_zero = abs(denominator) <= COINCIDENCE_TOL
    if denominator_zero:
        return complex(1.0, 0.0) if numerator_zero else complex(math.inf, 0.0)
    if numerator_zero:
        return complex(0.0, 0.0)
    return numerator / denominator


def ideal_volume(t: TetConfig) -> float:
    """Signed hyperbolic volume of an ideal tetrahedron"""
    return bloch_wigner(cross_ratio(t))


def permutation_sign(permutation: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of indices"""
    sign = 1
    for a, b in itertools.combinations(range(len(permutation)), 2):
        if permutation[a] > permutation[b]:
            sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class SpannedClass:
    """
    Four vectors spanning C^m, up to simultaneous linear change of coordinates

    vectors has shape (m, 4), or is None for the degenerate class.
    """
    m: int
    vectors: Optional[np.ndarray] = None
    degenerate: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("Class dimension must be non-negative")
        if self.vectors is not None:
            vectors = np.array(self.vectors, dtype=complex, copy=True)
            if vectors.shape != (self.m, 4):
                raise ValueError(f"Expected vectors of shape ({self.m}, 4), got {vectors.shape}")
            vectors.setflags(write=False)
            object.__setattr__(self, "vectors", vectors)


def class_volume(c: SpannedClass) -> float:
    """Volume of the four projectivized vectors when m = 2, else 0"""
    if c.degenerate or c.m != 2 or c.vectors is None:
        return 0.0
    norms = np.linalg.norm(c.vectors, axis=0)
    largest = norms.max()
    if largest == 0.0 or np.any(norms <= ZERO_VECTOR_TOL * largest):
        return 0.0
    points = tuple(ProjectivePoint(c.vectors[0, i], c.vectors[1, i]) for i in range(4))
    return ideal_volume(TetConfig(points))
