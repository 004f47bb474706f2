"""
单纯复形、G-作用、不动点与商复形
"""
import pytest

from core.exceptions import NotPure, NotRegular
from core.grp import centralizer, trivial_group
from core.gspace import (
    Orientation,
    SimplicialComplex,
    barycentric_subdivide,
    check_orientation,
    connected_components,
    coset_space,
    fixed_subcomplex,
    gcomplex_from_generators,
    is_regular,
    octahedron,
    orientation_preserved,
    polygon,
    quotient_complex,
    require_regular,
    simplex_boundary,
    torus7,
    trivial_action,
    validate_gcomplex,
)


def test_closure_under_faces():
    K = SimplicialComplex([], [(2, 0, 1)])
    assert K.f_vector() == [3, 3, 1]
    assert K.euler_characteristic() == 1
    assert (0, 2) in K
    assert K.simplices(1) == ((0, 1), (0, 2), (1, 2))


def test_builtin_surfaces():
    for builder, euler, f_vector in [
        (lambda: polygon(5), 0, [5, 5]),
        (lambda: simplex_boundary(2), 2, [4, 6, 4]),
        (torus7, 0, [7, 21, 14]),
        (octahedron, 2, [6, 12, 8]),
    ]:
        K, o = builder()
        assert K.f_vector() == f_vector
        assert K.euler_characteristic() == euler
        assert check_orientation(K, o)


def test_inconsistent_orientation_rejected():
    K, _ = polygon(4)
    bad = Orientation({s: 1 for s in K.simplices(1)})
    assert not check_orientation(K, bad)


def test_impure_complex_raises():
    K = SimplicialComplex([], [(0, 1, 2), (2, 3)])
    with pytest.raises(NotPure):
        check_orientation(K, Orientation({(0, 1, 2): 1}))


def test_vertex_order_normalization():
    o = Orientation({(0, 1): 1}, vertex_order=(1, 0))
    assert o.normalized().top_signs == {(0, 1): -1}
    assert o.negated().sign((0, 1)) == 1


def test_components():
    K = SimplicialComplex([5], [(0, 1), (2, 3), (3, 4)])
    assert len(connected_components(K)) == 3


def test_valid_actions(square_reflection, square_rotation):
    for K in (square_reflection, square_rotation):
        report = validate_gcomplex(K)
        assert report.valid
        assert report.violations == []


def test_non_simplicial_action_reported(z2):
    K, _ = polygon(4)
    space = gcomplex_from_generators(K, z2, [[0, 2, 1, 3]])
    report = validate_gcomplex(space)
    assert not report.valid
    assert not report.checks["simplicial"]


def test_edge_flip_needs_subdivision(z2):
    edge = gcomplex_from_generators(SimplicialComplex([], [(0, 1)]), z2, [[1, 0]])
    assert not is_regular(edge)
    assert not validate_gcomplex(edge).checks["regular"]
    with pytest.raises(NotRegular):
        require_regular(edge)
    subdivided = barycentric_subdivide(edge)
    assert is_regular(subdivided)
    assert subdivided.complex.f_vector() == [3, 2]


def test_subdivision_keeps_orientation():
    K, o = torus7()
    space = trivial_action(K, trivial_group(), orientation=o)
    subdivided = barycentric_subdivide(space)
    assert subdivided.complex.f_vector()[2] == 6 * 14
    assert check_orientation(subdivided.complex, subdivided.orientation)


def test_fixed_subcomplexes(square_reflection, square_rotation):
    fixed, residual = fixed_subcomplex(square_reflection, 1)
    assert fixed.vertices == (0, 2)
    assert fixed.dim == 0
    assert residual.group.order == 2
    assert residual.orientation is not None

    fixed, _ = fixed_subcomplex(square_rotation, 1)
    assert fixed.is_empty()

    whole, _ = fixed_subcomplex(square_reflection, 0)
    assert whole == square_reflection.complex


def test_fixed_sets_are_conjugation_equivariant(nonregular_examples):
    for K in nonregular_examples:
        K = barycentric_subdivide(K)
        G = K.group
        fixed = {g: set(fixed_subcomplex(K, g)[0].all_simplices()) for g in range(G.order)}
        for g in range(G.order):
            for h in range(G.order):
                moved = {K.act_simplex(h, s) for s in fixed[g]}
                assert fixed[G.conj(h, g)] == moved, (K.name, g, h)


def test_two_subdivisions_are_regular(nonregular_examples):
    for K in nonregular_examples:
        twice = barycentric_subdivide(barycentric_subdivide(K))
        assert is_regular(twice), K.name
        assert validate_gcomplex(twice).valid, K.name
        G = twice.group
        for s in twice.complex.all_simplices():
            for g in range(G.order):
                for h in range(G.order):
                    assert twice.act_simplex(G.mul(g, h), s) == twice.act_simplex(g, twice.act_simplex(h, s))
    assert not any(is_regular(K) for K in nonregular_examples if K.name != "triangle_Z3")


def test_orientation_invariance(square_reflection, square_rotation):
    assert not orientation_preserved(square_reflection, square_reflection.orientation)
    assert orientation_preserved(square_rotation, square_rotation.orientation)
    assert orientation_preserved(square_reflection, square_reflection.orientation, members=[0])


def test_transport_sign(square_reflection):
    # σ 把 (0, 1) 送到有序对 (0, 3)，升序不变
    assert square_reflection.transport_sign(1, (0, 1)) == 1
    assert square_reflection.act_simplex(1, (1, 2)) == (2, 3)
    assert square_reflection.transport_sign(1, (1, 2)) == -1


def test_quotient_complex(square_reflection, square_rotation):
    reflected = quotient_complex(square_reflection)
    assert [reflected.count(k) for k in range(2)] == [3, 2]
    assert reflected.euler_characteristic() == 1

    rotated = quotient_complex(square_rotation)
    assert [rotated.count(k) for k in range(2)] == [2, 2]
    assert rotated.euler_characteristic() == 0


def test_coset_space(s3):
    H = centralizer(s3, 3).members
    cosets = coset_space(s3, H)
    assert cosets.complex.f_vector() == [2]
    assert validate_gcomplex(cosets).valid
