"""
Tests for extended Moebius maps and the reflection tessellation
"""
import numpy as np
import pytest

from src.cplx_geom import ProjectivePoint
from src.hypvol import BASE_TETRAHEDRON, OMEGA, TetConfig, ideal_volume, nu3
from src.tess import (
    ExtendedMoebius,
    GroupWord,
    apply_word,
    base_reflections,
    default_generator_names,
    dilation_element,
    enumerate_orbit,
    orbit_points,
    orientation_preserving_generators,
    word_element,
)

P = ProjectivePoint.from_complex
ZERO, ONE, APEX, INF = P(0), P(1), P(OMEGA), ProjectivePoint.infinity()


def test_from_three_points():
    p, q, r = P(2.0), P(1j), P(-1.0)
    g = ExtendedMoebius.from_three_points(p, q, r)
    assert g(p).is_infinity
    assert g(q) == ZERO
    assert g(r) == ONE
    with pytest.raises(ValueError):
        ExtendedMoebius.from_three_points(p, p, r)


def test_composition_and_inverse():
    """(a @ b)(z) = a(b(z)) across orientations"""
    r1, r2, r3, r4 = base_reflections()
    h = ExtendedMoebius(np.array([[1, 2j], [0.5, 3]]))
    z = P(0.37 - 1.2j)
    for a, b in ((r2, r3), (h, r4), (r1, h), (h, h)):
        assert (a @ b)(z) == a(b(z))
        assert (a @ b).orientation == a.orientation * b.orientation
    for g in (h, r3, h @ r4):
        assert (g @ g.inverse()).is_identity()
        assert (g.inverse() @ g).is_identity()
    assert h.distance(r1) == float("inf")


def test_reflections_fix_faces():
    """Each reflection is an involution fixing three vertices of the base"""
    faces = ((ZERO, ONE, INF), (ZERO, APEX, INF), (ONE, APEX, INF), (ZERO, ONE, APEX))
    for r, face in zip(base_reflections(), faces):
        assert not r.is_holomorphic
        assert (r @ r).is_identity()
        for vertex in face:
            assert r(vertex) == vertex
        assert ideal_volume(r.apply_tet(BASE_TETRAHEDRON)) == pytest.approx(-nu3(), abs=1e-12)


def test_rotations_have_order_three():
    for g in orientation_preserving_generators():
        assert g.is_holomorphic
        assert not g.is_identity()
        assert (g @ g @ g).is_identity()


def test_dilation_element():
    d = dilation_element(BASE_TETRAHEDRON)
    assert d(ZERO) == ZERO
    assert d(ONE) == ONE
    assert not d.is_identity()
    moved = d.apply_tet(BASE_TETRAHEDRON)
    assert moved.key() != BASE_TETRAHEDRON.key()
    assert ideal_volume(moved) == pytest.approx(nu3(), abs=1e-12)
    fixed = d.fixed_points()
    assert len(fixed) == 2
    with pytest.raises(ValueError):
        dilation_element(TetConfig((ZERO, ZERO, ONE, INF)))


def test_orbit_sizes():
    reflections = base_reflections()
    assert len(enumerate_orbit(0, reflections)) == 1
    assert len(enumerate_orbit(1, reflections)) == 5
    assert len(enumerate_orbit(2, reflections)) == 17
    with pytest.raises(ValueError):
        enumerate_orbit(-1, reflections)


def test_orbit_volumes_alternate():
    """Reflection words of length l give volume (-1)^l nu3"""
    orbit = enumerate_orbit(3, base_reflections())
    keys = set()
    for word, tet in orbit:
        assert ideal_volume(tet) == pytest.approx((-1) ** len(word) * nu3(), abs=1e-10)
        assert apply_word(word.letters, base_reflections()).key() == tet.key()
        keys.add(tet.key())
    assert len(keys) == len(orbit)


def test_adjacent_tetrahedra_share_a_face():
    orbit = enumerate_orbit(2, base_reflections())
    parents = {word.letters: tet for word, tet in orbit}
    for word, tet in orbit[1:]:
        parent = parents[word.letters[:-1]]
        shared = set(p.key() for p in tet) & set(p.key() for p in parent)
        assert len(shared) == 3


def test_orbit_points():
    orbit = enumerate_orbit(1, base_reflections())
    points = orbit_points(orbit)
    assert len(points) == 8
    assert points[:4] == list(BASE_TETRAHEDRON)


def test_word_labels():
    names = default_generator_names(6, True)
    assert names == ("r1", "r2", "r3", "r4", "g", "G")
    assert default_generator_names(4, False) == ("r1", "r2", "r3", "r4")
    word = GroupWord((0, 2), word_element((0, 2), base_reflections()), names)
    assert word.label == "r1 r3"
    assert len(word) == 2
    assert GroupWord((), ExtendedMoebius.identity()).label == "e"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
