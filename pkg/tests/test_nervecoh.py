"""
神经双复形与两个 oracle
"""
import pytest
from sympy.polys.domains import QQ

from core import corpus
from core.exceptions import DegreeOutOfRange, NotRegular
from core.grp import cyclic_group, dihedral_group, symmetric_group
from core.gspace import (
    SimplicialComplex,
    barycentric_subdivide,
    coset_space,
    gcomplex_from_generators,
    gset,
    is_regular,
    octahedron,
    polygon,
    quotient_complex,
    simplex_boundary,
    torus7,
)
from core.nervecoh import (
    DoubleCochain,
    InvariantComplex,
    NerveLevel,
    TotalComplex,
    betti_numbers,
    invariant_oracle,
    quotient_cohomology,
    total_cohomology,
    total_differential,
)


def cyclic_polygons():
    """n 边形上的旋转作用（自由，本身 regular）"""
    spaces = []
    for n in range(3, 8):
        K, o = polygon(n)
        rotation = [(i + 1) % n for i in range(n)]
        spaces.append(gcomplex_from_generators(K, cyclic_group(n), [rotation], orientation=o, name=f"C{n}"))
    return spaces


def dihedral_polygons():
    """n 边形上的二面体作用，细分一次后 regular"""
    spaces = []
    for n in range(3, 7):
        K, _ = polygon(n)
        G = dihedral_group(n)
        images = [[(i + 1) % n for i in range(n)], [(-i) % n for i in range(n)]]
        spaces.append(barycentric_subdivide(gcomplex_from_generators(K, G, images, name=f"D{n}")))
    return spaces


def regular_examples():
    z2, z3 = cyclic_group(2), cyclic_group(3)
    sphere, sphere_o = simplex_boundary(1)
    two_sphere, _ = simplex_boundary(2)
    return [
        corpus.square_reflection(z2),
        corpus.square_rotation(z2),
        corpus.circle(4, z2),
        corpus.circle(3, z3),
        corpus.discrete(2, z3),
        gset(symmetric_group(3), [[1, 0, 2], [1, 2, 0]], 3),
        gset(z2, [[1, 0, 2]], 3),
        corpus.octahedron_half_turn(),
        gcomplex_from_generators(sphere, z3, [[1, 2, 0]], orientation=sphere_o),
        barycentric_subdivide(gcomplex_from_generators(sphere, symmetric_group(3), [[1, 0, 2], [1, 2, 0]])),
        barycentric_subdivide(gcomplex_from_generators(two_sphere, z2, [[1, 0, 2, 3]], name="S2_swap")),
        coset_space(dihedral_group(4), [0]),
        *cyclic_polygons(),
        *dihedral_polygons(),
    ]


def test_example_family_is_regular():
    examples = regular_examples()
    assert len(examples) >= 20
    assert all(is_regular(K) for K in examples)


@pytest.mark.parametrize("K", regular_examples(), ids=lambda K: K.name)
def test_total_matches_both_oracles(K):
    for n in range(K.complex.dim + 1):
        total = total_cohomology(K, n, with_basis=False).dim
        assert total == invariant_oracle(K, n) == quotient_cohomology(K, n), (K.name, n)


def test_dihedral_polygon_quotient_is_interval():
    for K in dihedral_polygons():
        assert [total_cohomology(K, n, with_basis=False).dim for n in range(2)] == [1, 0], K.name


def test_quotient_top_degree(z2):
    edge = gcomplex_from_generators(SimplicialComplex([0, 1], [(0, 1)]), z2, [[0, 1]], name="edge")
    assert [quotient_cohomology(edge, n) for n in range(2)] == [1, 0]
    assert quotient_complex(edge).coboundary(edge.complex.dim).is_zero()
    torus = corpus.torus_z7()
    assert quotient_cohomology(torus, torus.complex.dim) == 1


def test_subdivided_actions_match_oracles(nonregular_examples):
    for K in nonregular_examples:
        # 2 维的例子只细分一次，一次细分已经 regular
        subdivided = barycentric_subdivide(K)
        if K.complex.dim <= 1:
            subdivided = barycentric_subdivide(subdivided)
        for n in range(subdivided.complex.dim + 1):
            total = total_cohomology(subdivided, n, with_basis=False).dim
            assert total == invariant_oracle(subdivided, n) == quotient_cohomology(subdivided, n), (K.name, n)


def test_known_dimensions(square_reflection, square_rotation):
    assert [total_cohomology(square_reflection, n).dim for n in range(3)] == [1, 0, 0]
    assert [total_cohomology(square_rotation, n).dim for n in range(3)] == [1, 1, 0]
    assert total_cohomology(gset(symmetric_group(3), [[1, 0, 2], [1, 2, 0]], 3), 0).dim == 1


def test_torus_quotient_betti_numbers():
    torus = corpus.torus_z7()
    assert [invariant_oracle(torus, n) for n in range(3)] == [1, 2, 1]
    assert [quotient_cohomology(torus, n) for n in range(3)] == [1, 2, 1]
    assert total_cohomology(torus, 1, with_basis=False).dim == 2


def test_simplicial_betti_numbers():
    assert betti_numbers(torus7()[0]) == [1, 2, 1]
    assert betti_numbers(octahedron()[0]) == [1, 0, 1]


def test_differential_squares_to_zero(square_reflection):
    total = TotalComplex(square_reflection)
    for n in range(3):
        assert total.differential(n + 1).matmul(total.differential(n)).is_zero()


def test_total_differential_on_cochains(square_rotation):
    c = DoubleCochain.single(square_rotation, 1, 0, {((0,), (1,)): 1, ((1,), (0,)): 2})
    c = c + DoubleCochain.single(square_rotation, 0, 1, {((0, 1), ()): 3})
    assert total_differential(total_differential(c)).is_zero()


def test_total_vector_encoding(square_rotation):
    total = TotalComplex(square_rotation)
    c = DoubleCochain.single(square_rotation, 1, 1, {((1, 2), (1,)): 5})
    vector = total.to_vector(c, 2)
    assert len(vector) == 1
    assert total.from_vector(vector, 2) == c


def test_basis_vectors_are_cocycles(square_rotation):
    total = TotalComplex(square_rotation)
    result = total_cohomology(square_rotation, 1)
    assert result.dim == len(result.basis) == 1
    for cochain in result.basis:
        assert total.differential(1).matvec(total.to_vector(cochain, 1)) == {}


def test_face_maps(square_reflection):
    level = NerveLevel(square_reflection, 2)
    sign, image, rest = level.face(0, (0, 1), (1, 1))
    assert (sign, image, rest) == (1, (0, 3), (1,))
    assert level.face(1, (0, 1), (1, 1)) == (1, (0, 1), (0,))
    assert level.face(2, (0, 1), (1, 0)) == (1, (0, 1), (1,))
    with pytest.raises(ValueError):
        level.face(3, (0, 1), (1, 1))


def test_degree_range(circle):
    with pytest.raises(DegreeOutOfRange):
        total_cohomology(circle, 3)
    with pytest.raises(DegreeOutOfRange):
        total_cohomology(circle, -1)
    assert total_cohomology(circle, 2).dim == 0


def test_non_regular_action_rejected(z2):
    edge = gcomplex_from_generators(SimplicialComplex([], [(0, 1)]), z2, [[1, 0]])
    with pytest.raises(NotRegular):
        total_cohomology(edge, 0)
    with pytest.raises(NotRegular):
        invariant_oracle(edge, 0)


def test_invariant_complex_average(square_reflection):
    invariant = InvariantComplex(square_reflection)
    X = square_reflection.complex
    c = {X.index((0, 1)): QQ(1)}
    averaged = invariant.average(c, 1)
    assert averaged == {X.index((0, 1)): QQ(1, 2), X.index((0, 3)): QQ(1, 2)}
    assert invariant.average(averaged, 1) == averaged


def test_invariant_cocycle_coordinates(square_rotation):
    invariant = InvariantComplex(square_rotation)
    [generator] = invariant.cocycle_basis(1)
    assert invariant.coordinates(1, generator) == [QQ(1)]
    doubled = {i: 2 * v for i, v in generator.items()}
    assert invariant.coordinates(1, doubled) == [QQ(2)]
    assert not invariant.is_coboundary(1, generator)
