"""
Tests for Veronese flags and the irreducible representation
"""
import numpy as np
import pytest
from scipy import linalg

from src.cplx_geom import DimensionMismatchError, Flag, ProjectivePoint, flag_distance
from src.tess import base_reflections
from src.utils import random_invertible, random_skew_hermitian
from src.veronese import (
    GroupElement,
    act_extended,
    act_on_flag,
    conjugate_rep,
    irreducible_rep,
    veronese_flag,
    veronese_point_recover,
    veronese_subspace_basis,
)

POINTS = [0.3 + 0.7j, -1.2 + 0.1j, 2.5 - 0.8j, complex("inf"), 0.0]


def test_equivariance(rng):
    """pi_n(A) V_n(xi) = V_n(A xi)"""
    for n in (2, 3, 4):
        a = random_invertible(rng, 2)
        rep = irreducible_rep(a, n)
        for z in POINTS:
            xi = ProjectivePoint.from_complex(z)
            image = ProjectivePoint(*(a @ xi.vector))
            moved = act_on_flag(rep, veronese_flag(xi, n))
            assert flag_distance(moved, veronese_flag(image, n)) < 1e-9


def test_representation_is_a_homomorphism(rng):
    a, b = random_invertible(rng, 2), random_invertible(rng, 2)
    for n in (2, 3, 5):
        product = irreducible_rep(a @ b, n)
        assert product.distance(irreducible_rep(a, n) @ irreducible_rep(b, n)) < 1e-9
        assert irreducible_rep(np.eye(2), n).distance(GroupElement.identity(n)) < 1e-12


def test_conjugate_rep(rng):
    a = random_invertible(rng, 2)
    assert np.allclose(conjugate_rep(a, 3).matrix, irreducible_rep(a, 3).matrix.conj())
    with pytest.raises(ValueError):
        irreducible_rep(np.ones((2, 2)), 3)


def test_extended_action_matches_points():
    """Reflections move Veronese flags like they move points"""
    for r in base_reflections():
        for z in POINTS:
            xi = ProjectivePoint.from_complex(z)
            moved = act_extended(r, veronese_flag(xi, 3), 3)
            assert flag_distance(moved, veronese_flag(r(xi), 3)) < 1e-9


def test_veronese_subspaces():
    """V^m is spanned by the multiples of (x + y u)^(n-m)"""
    xi = ProjectivePoint.from_complex(0.4 - 0.3j)
    flag = veronese_flag(xi, 4)
    for i in range(4):
        basis = veronese_subspace_basis(xi, 4, i)
        assert basis.shape == (4, 4 - i)
        q, _ = np.linalg.qr(basis)
        assert np.linalg.norm(flag.projector(4 - i) - q @ q.conj().T, 2) < 1e-10
    with pytest.raises(ValueError):
        veronese_subspace_basis(xi, 4, 4)


def test_distinct_points_give_distinct_flags():
    f = veronese_flag(ProjectivePoint.from_complex(0), 3)
    g = veronese_flag(ProjectivePoint.from_complex(1), 3)
    assert flag_distance(f, g) > 0.1


def test_group_element():
    """Elements are determinant 1 and compared modulo roots of unity"""
    m = np.array([[2, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=complex)
    g = GroupElement(m)
    assert abs(np.linalg.det(g.matrix) - 1.0) < 1e-12
    assert GroupElement(5j * m).distance(g) < 1e-12
    assert (g @ g.inverse()).distance(GroupElement.identity(3)) < 1e-12
    assert g.norm() >= 1.0
    with pytest.raises(ValueError):
        GroupElement(np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        act_on_flag(GroupElement.identity(2), veronese_flag(ProjectivePoint.from_complex(0), 3))


def test_point_recovery():
    for z in (0.3 + 0.7j, -2.0 + 5.0j, complex("inf")):
        xi = ProjectivePoint.from_complex(z)
        recovered, residual = veronese_point_recover(veronese_flag(xi, 3))
        assert residual < 1e-6
        assert recovered.chordal_distance(xi) < 1e-6


def test_point_recovery_examples(rng):
    xi = ProjectivePoint.from_complex(0.3 + 0.2j)
    recovered, residual = veronese_point_recover(veronese_flag(xi, 4))
    assert residual < 1e-9
    assert recovered.chordal_distance(xi) < 1e-9

    inf = ProjectivePoint.infinity()
    recovered, residual = veronese_point_recover(veronese_flag(inf, 3))
    assert residual < 1e-12 and recovered == inf

    rotation = linalg.expm(1e-3 * random_skew_hermitian(rng, 3))
    recovered, residual = veronese_point_recover(Flag.standard(3).transformed(rotation))
    assert recovered.chordal_distance(inf) < 1e-2
    assert 1e-6 < residual < 1e-2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
