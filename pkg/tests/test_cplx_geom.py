"""
Tests for projective points, subspaces and flags
"""
import numpy as np
import pytest

from src.cplx_geom import (
    AffineFlag,
    DimensionMismatchError,
    Flag,
    IllConditionedError,
    ProjectivePoint,
    Subspace,
    decorate,
    decoration_is_valid,
    flag_distance,
    general_position,
    numerical_rank,
    random_flag,
    stacked_ranks,
)
from src.utils import random_invertible
from src.veronese import veronese_flag


def test_projective_point_normalization():
    """Representatives are scaled to unit norm with a real positive lead"""
    p = ProjectivePoint(4j, 2j)
    assert abs(abs(p.x) ** 2 + abs(p.y) ** 2 - 1.0) < 1e-15
    assert p.x.imag == 0.0 and p.x.real > 0
    assert p == ProjectivePoint.from_complex(2.0)
    assert hash(p) == hash(ProjectivePoint.from_complex(2.0))
    assert p.to_complex() == pytest.approx(2.0)


def test_projective_point_infinity():
    inf = ProjectivePoint.from_complex(complex("inf"))
    assert inf.is_infinity
    assert inf == ProjectivePoint.infinity()
    assert inf != ProjectivePoint.from_complex(1e6)
    assert ProjectivePoint(0.0, 3.0) == ProjectivePoint.from_complex(0.0)
    with pytest.raises(ValueError):
        ProjectivePoint(0.0, 0.0)


def test_chordal_distance():
    zero, inf = ProjectivePoint.from_complex(0), ProjectivePoint.infinity()
    assert zero.chordal_distance(inf) == pytest.approx(1.0)
    assert zero.chordal_distance(zero) == 0.0
    p = ProjectivePoint.from_complex(1 + 2j)
    assert p.conjugate() == ProjectivePoint.from_complex(1 - 2j)


def test_ranks():
    """Values in the ambiguous band raise, exact zeros do not"""
    assert numerical_rank(np.diag([1.0, 1e-13])) == 1
    assert numerical_rank(np.diag([1.0, 1e-6])) == 2
    with pytest.raises(IllConditionedError):
        numerical_rank(np.diag([1.0, 1e-10]))
    assert numerical_rank(np.diag([1.0, 1e-10]), strict=False) == 1
    assert list(stacked_ranks(np.stack([np.eye(3), np.zeros((3, 3))]))) == [3, 0]


def test_subspace_intersection():
    a = Subspace(np.array([[1, 0], [0, 1], [0, 0]], dtype=complex))
    b = Subspace(np.array([[0, 0], [1, 0], [0, 1]], dtype=complex))
    line = a.intersection(b)
    assert line.dim == 1
    assert line == Subspace(np.array([[0], [2j], [0]]))
    with pytest.raises(ValueError):
        Subspace(np.array([[1], [0], [0]], dtype=complex)).intersection(
            Subspace(np.array([[0], [1], [0]], dtype=complex))
        )


def test_flag_basis_is_orthonormal_and_adapted(rng):
    matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    flag = Flag(matrix)
    assert np.allclose(flag.basis.conj().T @ flag.basis, np.eye(4), atol=1e-12)
    for i in range(1, 4):
        original = Subspace(matrix[:, :i])
        assert original.distance(flag.subspace(i)) < 1e-10


def test_flag_basis_is_c_contiguous(rng):
    """The stored layout does not depend on the input layout"""
    matrix = np.asfortranarray(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    assert Flag(matrix).basis.flags.c_contiguous

    orthonormal = Flag(matrix).basis
    reordered = Flag(np.asfortranarray(orthonormal))
    assert reordered.basis.flags.c_contiguous
    assert np.array_equal(reordered.basis, orthonormal)

    assert veronese_flag(ProjectivePoint.from_complex(0.5 + 0.8j), 3).basis.flags.c_contiguous
    affine = decorate(reordered, seed=1)
    again = AffineFlag(reordered, np.asfortranarray(affine.decoration))
    assert again.decoration.flags.c_contiguous
    assert np.array_equal(again.decoration, affine.decoration)


def test_flag_transform_and_distance(rng):
    """Upper triangular matrices fix the standard flag"""
    standard = Flag.standard(3)
    upper = np.triu(rng.standard_normal((3, 3)))
    np.fill_diagonal(upper, [1.0, 2.0, 3.0])
    assert standard.transformed(upper) == standard
    assert flag_distance(standard, Flag.reversed_standard(3)) == pytest.approx(1.0)

    f, g = random_flag(rng, 3), random_flag(rng, 3)
    assert flag_distance(f, g) == pytest.approx(flag_distance(g, f))
    assert flag_distance(f, f) < 1e-12
    assert f.conjugate().conjugate() == f

    with pytest.raises(DimensionMismatchError):
        flag_distance(f, random_flag(rng, 2))
    with pytest.raises(DimensionMismatchError):
        f.transformed(np.eye(2))


def test_flag_distance_example():
    """Projector gap between span(e1) and span(e1 + e2)"""
    diagonal = Flag(np.array([[1, 0], [1, 1]], dtype=complex))
    assert flag_distance(Flag.standard(2), diagonal) == pytest.approx(0.7071067811865476, abs=1e-15)

    rescaled = Flag(np.diag([2.0, -1j, 0.5]))
    assert flag_distance(Flag.standard(3), rescaled) < 1e-15


def test_flag_distance_triangle_inequality(rng):
    for index in range(300):
        n = 2 + index % 4
        f, g, h = (random_flag(rng, n) for _ in range(3))
        assert flag_distance(f, h) <= flag_distance(f, g) + flag_distance(g, h) + 1e-12
        assert 0.0 <= flag_distance(f, g) <= 1.0 + 1e-12


def test_decoration_is_valid_for_random_flags(rng):
    for index in range(1000):
        flag = random_flag(rng, 1 + index % 8)
        affine = decorate(flag, seed=index)
        assert decoration_is_valid(flag, affine.decoration)
        assert affine.strip() is flag


def test_decoration(rng):
    flag = random_flag(rng, 4)
    affine = decorate(flag, seed=3)
    assert decoration_is_valid(flag, affine.decoration)
    assert np.array_equal(decorate(flag, seed=3).decoration, affine.decoration)
    assert AffineFlag.from_decoration(affine.decoration).flag == flag

    shuffled = affine.decoration[:, ::-1]
    assert not decoration_is_valid(flag, shuffled)
    with pytest.raises(ValueError):
        AffineFlag(flag, shuffled)


def test_general_position(rng):
    flags = [random_flag(rng, 3) for _ in range(4)]
    assert general_position(flags)
    assert general_position(flags[:2])
    assert not general_position([Flag.standard(3), Flag.standard(3)])
    assert general_position([Flag.standard(3), Flag.reversed_standard(3)])

    with pytest.raises(ValueError):
        general_position(flags[:1])
    with pytest.raises(DimensionMismatchError):
        general_position([flags[0], random_flag(rng, 2)])


def test_general_position_of_veronese_flags():
    points = [ProjectivePoint.from_complex(z) for z in (0, 1, 0.5 + 0.8660254037844386j, complex("inf"))]
    assert general_position([veronese_flag(point, 3) for point in points])
    assert not general_position([veronese_flag(point, 3) for point in points[:3] + points[:1]])


def test_general_position_is_linear_invariant(rng):
    generic = [random_flag(rng, 3) for _ in range(4)]
    repeated = [generic[0], generic[1], generic[0]]
    pair = [Flag.standard(3), Flag.reversed_standard(3)]
    for _ in range(20):
        g = random_invertible(rng, 3)
        for flags in (generic, repeated, pair):
            moved = [flag.transformed(g) for flag in flags]
            assert general_position(moved) == general_position(flags)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
