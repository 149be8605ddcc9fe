"""
Reflection tessellation of the regular ideal tetrahedron

Extended Moebius maps (holomorphic or anti-holomorphic), the four face
reflections of the base tetrahedron (0, 1, w, inf), the dilation element
fixing two vertices, and breadth-first orbit enumeration over words.
"""

import cmath
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cplx_geom import ProjectivePoint
from .hypvol import BASE_TETRAHEDRON, TetConfig

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-10


def _normalize(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=complex, copy=True)
    if matrix.shape != (2, 2):
        raise ValueError(f"Moebius matrix must be 2 x 2, got {matrix.shape}")
    det = np.linalg.det(matrix)
    if abs(det) < 1e-300 or not np.isfinite(det):
        raise ValueError("Moebius matrix is singular")
    matrix = matrix / cmath.sqrt(det)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class ExtendedMoebius:
    """
    z -> m.z (orientation +1) or z -> m.conj(z) (orientation -1)

    The matrix is kept with determinant 1; it is only defined up to sign.
    """
    matrix: np.ndarray
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("Orientation must be +1 or -1")
        object.__setattr__(self, "matrix", _normalize(self.matrix))

    @classmethod
    def identity(cls) -> "ExtendedMoebius":
        return cls(np.eye(2))

    @classmethod
    def from_three_points(
        cls, p: ProjectivePoint, q: ProjectivePoint, r: ProjectivePoint
    ) -> "ExtendedMoebius":
        """
        The holomorphic map sending (p, q, r) to (inf, 0, 1)

        Raises:
            ValueError: If two of the points coincide
        """
        rp = r.x * p.y - p.x * r.y
        rq = r.x * q.y - q.x * r.y
        pq = p.x * q.y - q.x * p.y
        if min(abs(rp), abs(rq), abs(pq)) < 1e-14:
            raise ValueError("Three-point normalization needs distinct points")
        return cls(np.array([[rp * q.y, -rp * q.x], [rq * p.y, -rq * p.x]]))

    @property
    def is_holomorphic(self) -> bool:
        return self.orientation == 1

    def __call__(self, point: ProjectivePoint) -> ProjectivePoint:
        vector = point.vector if self.is_holomorphic else point.vector.conj()
        image = self.matrix @ vector
        return ProjectivePoint(image[0], image[1])

    def apply_tet(self, t: TetConfig) -> TetConfig:
        return TetConfig(tuple(self(point) for point in t))

    def __matmul__(self, other: "ExtendedMoebius") -> "ExtendedMoebius":
        """Composition self after other"""
        right = other.matrix if self.is_holomorphic else other.matrix.conj()
        return ExtendedMoebius(self.matrix @ right, self.orientation * other.orientation)

    def inverse(self) -> "ExtendedMoebius":
        inverse = np.linalg.inv(self.matrix)
        if self.is_holomorphic:
            return ExtendedMoebius(inverse)
        return ExtendedMoebius(inverse.conj(), -1)

    def distance(self, other: "ExtendedMoebius") -> float:
        """Frobenius distance up to the sign ambiguity; inf across orientations"""
        if self.orientation != other.orientation:
            return math.inf
        return float(min(
            np.linalg.norm(self.matrix - other.matrix),
            np.linalg.norm(self.matrix + other.matrix),
        ))

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return self.distance(ExtendedMoebius.identity()) < tol

    def fixed_points(self) -> List[ProjectivePoint]:
        """Fixed points of a holomorphic map (one for parabolics)"""
        if not self.is_holomorphic:
            raise ValueError("Fixed points are only computed for holomorphic maps")
        _, vectors = np.linalg.eig(self.matrix)
        points: List[ProjectivePoint] = []
        for column in vectors.T:
            point = ProjectivePoint(column[0], column[1])
            if all(point != other for other in points):
                points.append(point)
        return points


OMEGA = cmath.exp(1j * math.pi / 3)
CIRCLE_CENTER = complex(3.0, math.sqrt(3.0)) / 6.0


def base_reflections() -> List[ExtendedMoebius]:
    """
    Reflections in the faces of (0, 1, w, inf), in the order
    (0, 1, inf), (0, w, inf), (1, w, inf), (0, 1, w)
    """
    rotation = cmath.exp(4j * math.pi / 3)
    center = CIRCLE_CENTER
    return [
        ExtendedMoebius(np.eye(2), -1),
        ExtendedMoebius(np.diag([OMEGA, OMEGA.conjugate()]), -1),
        ExtendedMoebius(np.array([[rotation, 1 - rotation], [0, 1]]), -1),
        # inversion z -> c + (1/3) / (conj(z) - conj(c))
        ExtendedMoebius(np.array([[center, center * (-center.conjugate()) + 1 / 3], [1, -center.conjugate()]]), -1),
    ]


REFLECTION_NAMES = ("r1", "r2", "r3", "r4")
DILATION_NAMES = ("g", "G")


def dilation_element(t: TetConfig) -> ExtendedMoebius:
    """
    Conjugate of z -> 2z fixing t[0] and t[1]

    Uses the Moebius map g with g(t0, t1, t2) = (inf, 0, 1) and returns
    g^-1 mu2 g. If t[2] coincides with t[0] or t[1] the affine chart through
    t[0], t[1] is used instead.

    Raises:
        ValueError: If t[0] and t[1] coincide
    """
    p, q, r = t[0], t[1], t[2]
    if p == q:
        raise ValueError("Dilation element needs distinct first and second vertices")
    if r == p or r == q:
        r = ProjectivePoint(p.x + q.x, p.y + q.y)
    g = ExtendedMoebius.from_three_points(p, q, r)
    mu2 = ExtendedMoebius(np.diag([2.0, 1.0]))
    return g.inverse() @ mu2 @ g


def orientation_preserving_generators() -> List[ExtendedMoebius]:
    """Products r_i r_j (i < j) of face reflections"""
    reflections = base_reflections()
    return [
        reflections[i] @ reflections[j]
        for i in range(len(reflections))
        for j in range(i + 1, len(reflections))
    ]


@dataclass(frozen=True)
class GroupWord:
    """Word in generator indices, with its product cached"""
    letters: Tuple[int, ...]
    element: ExtendedMoebius = field(compare=False)
    names: Tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def label(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(
            self.names[letter] if letter < len(self.names) else f"s{letter + 1}"
            for letter in self.letters
        )


def word_element(letters: Sequence[int], generators: Sequence[ExtendedMoebius]) -> ExtendedMoebius:
    """Product s_{w1} s_{w2} ... s_{wN}, rightmost letter applied first"""
    element = ExtendedMoebius.identity()
    for letter in letters:
        element = element @ generators[letter]
    return element


def apply_word(
    letters: Sequence[int], generators: Sequence[ExtendedMoebius], t: TetConfig = BASE_TETRAHEDRON
) -> TetConfig:
    return word_element(letters, generators).apply_tet(t)


def default_generator_names(count: int, with_dilation: bool) -> Tuple[str, ...]:
    names = list(REFLECTION_NAMES[:min(count, 4)])
    if with_dilation:
        names.extend(DILATION_NAMES)
    return tuple(names) + tuple(f"s{i + 1}" for i in range(len(names), count))


def enumerate_orbit(
    L: int,
    generators: Sequence[ExtendedMoebius],
    base: TetConfig = BASE_TETRAHEDRON,
    names: Optional[Sequence[str]] = None,
) -> List[Tuple[GroupWord, TetConfig]]:
    """
    Breadth-first enumeration of the orbit of a tetrahedron

    A word w s extends w on the right, so w s (base) shares the face fixed
    by s with w (base) when s is a face reflection. Tetrahedra whose vertex
    sets coincide are kept once, with the first (shortest) word found.

    Args:
        L: Maximum word length
        generators: Generating maps
        base: Tetrahedron the words act on
        names: Optional generator labels for GroupWord.label

    Returns:
        List of (word, tetrahedron) in breadth-first order
    """
    if L < 0:
        raise ValueError("Word length must be non-negative")
    names = tuple(names) if names is not None else tuple(f"s{i + 1}" for i in range(len(generators)))
    cancelling = {
        (a, b)
        for a in range(len(generators))
        for b in range(len(generators))
        if (generators[a] @ generators[b]).is_identity()
    }

    root = GroupWord((), ExtendedMoebius.identity(), names)
    seen: Dict[Tuple, int] = {base.key(): 0}
    orbit: List[Tuple[GroupWord, TetConfig]] = [(root, base)]
    frontier = deque([root])
    for length in range(1, L + 1):
        next_frontier = deque()
        while frontier:
            word = frontier.popleft()
            for letter, generator in enumerate(generators):
                if word.letters and (word.letters[-1], letter) in cancelling:
                    continue
                element = word.element @ generator
                tet = element.apply_tet(base)
                key = tet.key()
                if key in seen:
                    continue
                seen[key] = len(orbit)
                child = GroupWord(word.letters + (letter,), element, names)
                orbit.append((child, tet))
                next_frontier.append(child)
        frontier = next_frontier
        logger.info("orbit layer %d: %d tetrahedra in total", length, len(orbit))
    return orbit


def orbit_points(orbit: Sequence[Tuple[GroupWord, TetConfig]]) -> List[ProjectivePoint]:
    """Distinct vertices of the orbit, in order of first appearance"""
    points: Dict[Tuple, ProjectivePoint] = {}
    for _, tet in orbit:
        for point in tet:
            points.setdefault(point.key(), point)
    return list(points.values())
