"""
Veronese flags and the irreducible representation of PSL(2, C)

C^n is identified with binary forms of degree n-1: e_k <-> s^k t^(n-1-k),
written as polynomials in u = s/t with coefficient index k. The Veronese
flag of [x:y] has V^m = multiples of (x + y u)^(n-m).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import optimize

from .cplx_geom import DimensionMismatchError, Flag, IllConditionedError, ProjectivePoint, flag_distance
from .tess import ExtendedMoebius

logger = logging.getLogger(__name__)

GRID_POLAR = 13
GRID_AZIMUTH = 24


def _power(coefficients: np.ndarray, exponent: int) -> np.ndarray:
    result = np.ones(1, dtype=complex)
    for _ in range(exponent):
        result = np.convolve(result, coefficients)
    return result


def _form(first: np.ndarray, first_exp: int, second: np.ndarray, second_exp: int, n: int) -> np.ndarray:
    """Coefficients of first^a * second^b padded to length n"""
    product = np.convolve(_power(first, first_exp), _power(second, second_exp))
    padded = np.zeros(n, dtype=complex)
    padded[:min(n, len(product))] = product[:n]
    return padded


def projective_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance in PSL(n, C): minimum over n-th roots of unity"""
    a, b = _det_normalize(a), _det_normalize(b)
    n = a.shape[0]
    return float(min(
        np.linalg.norm(a - cmath.exp(2j * math.pi * k / n) * b) for k in range(n)
    ))


def _det_normalize(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=complex, copy=True)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Group elements are square matrices, got shape {matrix.shape}")
    det = np.linalg.det(matrix)
    if not np.isfinite(det) or abs(det) == 0.0:
        raise ValueError("Group element matrix is singular")
    n = matrix.shape[0]
    scale = cmath.exp(cmath.log(det) / n)
    return matrix / scale


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of PSL(n, C), stored with determinant 1"""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _det_normalize(self.matrix)
        if abs(np.linalg.det(matrix) - 1.0) > 1e-10:
            raise IllConditionedError("Group element cannot be determinant-normalized accurately")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(np.eye(n, dtype=complex))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.matrix))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix)

    def distance(self, other: "GroupElement") -> float:
        return projective_distance(self.matrix, other.matrix)

    def norm(self) -> float:
        """Operator 2-norm of the determinant-1 representative"""
        return float(np.linalg.norm(self.matrix, 2))


def veronese_subspace_basis(xi: ProjectivePoint, n: int, i: int) -> np.ndarray:
    """
    The k-shifted binomial vectors spanning V_n(xi) of dimension n - i

    Column k has C(i, j) x^(i-j) y^j at position k + j, for k = 0..n-1-i.
    """
    if not 0 <= i < n:
        raise ValueError(f"Veronese index {i} out of range for n = {n}")
    binomial = np.array([math.comb(i, j) * xi.x ** (i - j) * xi.y ** j for j in range(i + 1)])
    basis = np.zeros((n, n - i), dtype=complex)
    for k in range(n - i):
        basis[k:k + i + 1, k] = binomial
    return basis


def veronese_flag(xi: ProjectivePoint, n: int) -> Flag:
    """
    Osculating flag of the rational normal curve at xi

    Column m of the adapted basis is (x + y u)^(n-m) (-conj(y) + conj(x) u)^(m-1).
    """
    if n < 1:
        raise ValueError("Veronese flags need n >= 1")
    line = np.array([xi.x, xi.y])
    complement = np.array([-xi.y.conjugate(), xi.x.conjugate()])
    columns = [_form(line, n - m, complement, m - 1, n) for m in range(1, n + 1)]
    return Flag(np.column_stack(columns))


def irreducible_rep(a: np.ndarray, n: int) -> GroupElement:
    """
    Symmetric power representation pi_n of a 2 x 2 matrix

    For A = [[a, b], [c, d]] column k holds the coefficients of
    (b + d u)^k (a + c u)^(n-1-k), so that pi_n(A) V_n(xi) = V_n(A xi).

    Raises:
        ValueError: If A is singular
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"Expected a 2 x 2 matrix, got shape {a.shape}")
    if abs(np.linalg.det(a)) < 1e-14 * max(1.0, np.linalg.norm(a) ** 2):
        raise ValueError("irreducible_rep needs an invertible matrix")
    first = np.array([a[0, 1], a[1, 1]])
    second = np.array([a[0, 0], a[1, 0]])
    columns = [_form(first, k, second, n - 1 - k, n) for k in range(n)]
    return GroupElement(np.column_stack(columns))


def conjugate_rep(a: np.ndarray, n: int) -> GroupElement:
    """Complex conjugate of pi_n"""
    return GroupElement(irreducible_rep(a, n).matrix.conj())


def act_on_flag(g: GroupElement, flag: Flag) -> Flag:
    if g.n != flag.n:
        raise DimensionMismatchError(f"Cannot apply an element of PSL({g.n}) to a flag of C^{flag.n}")
    return flag.transformed(g.matrix)


def act_extended(r: ExtendedMoebius, flag: Flag, n: int) -> Flag:
    """
    Extended Moebius action on flags of C^n

    The anti-holomorphic case conjugates the adapted basis before applying
    pi_n of the matrix part.
    """
    if flag.n != n:
        raise DimensionMismatchError(f"Flag lives in C^{flag.n}, expected C^{n}")
    basis = flag.basis if r.is_holomorphic else flag.basis.conj()
    return Flag(irreducible_rep(r.matrix, n).matrix @ basis)


def _sphere_grid() -> list:
    points = [
        ProjectivePoint(0.0, 1.0),
        ProjectivePoint(1.0, 1.0),
        ProjectivePoint(1.0, 0.0),
    ]
    for theta in np.linspace(0.0, math.pi, GRID_POLAR)[1:-1]:
        for phi in np.linspace(0.0, 2 * math.pi, GRID_AZIMUTH, endpoint=False):
            points.append(ProjectivePoint(math.sin(theta / 2) * cmath.exp(1j * phi), math.cos(theta / 2)))
    return points


def _projector_mismatch(point: ProjectivePoint, flag: Flag) -> float:
    candidate = veronese_flag(point, flag.n)
    return float(sum(
        np.linalg.norm(candidate.projector(i) - flag.projector(i)) ** 2 for i in range(1, flag.n)
    ))


def veronese_point_recover(flag: Flag) -> Tuple[ProjectivePoint, float]:
    """
    Point xi whose Veronese flag is closest to the given flag

    A coarse grid over the sphere picks a start, then Nelder-Mead refines in
    whichever affine chart keeps the start away from infinity.

    Returns:
        (xi, flag_distance(V_n(xi), flag))
    """
    n = flag.n
    if n == 1:
        return ProjectivePoint.infinity(), 0.0

    scored = [(flag_distance(veronese_flag(point, n), flag), point) for point in _sphere_grid()]
    best_distance, best = min(scored, key=lambda item: item[0])

    if abs(best.x) <= abs(best.y):
        def point_of(params):
            return ProjectivePoint(complex(params[0], params[1]), 1.0)
        start = best.x / best.y
    else:
        def point_of(params):
            return ProjectivePoint(1.0, complex(params[0], params[1]))
        start = best.y / best.x

    result = optimize.minimize(
        lambda params: _projector_mismatch(point_of(params), flag),
        np.array([start.real, start.imag]),
        method="Nelder-Mead",
        options={
            "xatol": 1e-13,
            "fatol": 1e-28,
            "maxiter": 4000,
            "initial_simplex": np.array([
                [start.real, start.imag],
                [start.real + 0.05, start.imag],
                [start.real, start.imag + 0.05],
            ]),
        },
    )
    refined = point_of(result.x)
    refined_distance = flag_distance(veronese_flag(refined, n), flag)
    logger.debug("veronese recovery: grid %.3e, refined %.3e", best_distance, refined_distance)
    if refined_distance < best_distance:
        return refined, refined_distance
    return best, best_distance
