"""
杯积 / 卡积、Poincaré 配对与 umkehr
"""
import pytest
from sympy.polys.domains import QQ

from core import corpus
from core.deloc import DelocClass
from core.exceptions import ComplexMismatch, DegreeMismatch, NotEquivariant, NotOriented, OrientationMissing
from core.gspace import Orientation, polygon
from core.pushpair import (
    Chain,
    Cochain,
    SimplicialGMap,
    UmkehrMap,
    cap,
    check_cycle_equivalence,
    check_functoriality,
    check_projection_formula,
    cohomological_assembly,
    compose_maps,
    constant_map,
    cup,
    evaluate,
    fundamental_class,
    gram_matrix,
    identity_map,
    pd_pairing,
    pullback,
    umkehr,
)
from orchestrator import full_class


def edge_cochain(X, edge=(0, 1), value=1):
    return Cochain(X, 1, {edge: QQ(value)})


def unit(X, degree=0):
    return Cochain(X, degree, {s: QQ.one for s in X.simplices(degree)})


# ==================== 杯积 / 卡积 ====================

def test_cup_with_unit(circle):
    X = circle.complex
    e = edge_cochain(X)
    assert cup(unit(X), e).values == e.values
    assert cup(e, unit(X)).values == e.values
    assert cup(e, e).is_zero()


def test_cap_with_fundamental_class(circle):
    X = circle.complex
    fundamental = fundamental_class(X, circle.orientation).chain
    assert cap(fundamental, unit(X)).values == fundamental.values
    assert cap(fundamental, edge_cochain(X)).values == {(1,): QQ(1)}
    assert evaluate(edge_cochain(X, (0, 3)), fundamental) == -1
    assert fundamental.boundary().values == {}


def test_cup_cap_mismatches(circle):
    X = circle.complex
    other, _ = polygon(5)
    with pytest.raises(ComplexMismatch):
        cup(unit(X), unit(other))
    with pytest.raises(DegreeMismatch):
        cap(Chain(X, 0, {(0,): QQ.one}), edge_cochain(X))
    with pytest.raises(DegreeMismatch):
        evaluate(unit(X), Chain(X, 1, {(0, 1): QQ.one}))


def test_fundamental_class_errors(circle):
    X = circle.complex
    with pytest.raises(OrientationMissing):
        fundamental_class(X, None)
    with pytest.raises(NotOriented):
        fundamental_class(X, Orientation({e: 1 for e in X.simplices(1)}))


# ==================== 配对 ====================

def test_circle_pairing(circle):
    X = circle.complex
    assert pd_pairing(circle, 0, unit(X), edge_cochain(X)) == 1
    with pytest.raises(DegreeMismatch):
        pd_pairing(circle, 0, unit(X), unit(X))


def test_reflection_fixed_points_pairing(square_reflection):
    gram = gram_matrix(square_reflection, corpus.GENERATOR, 0)
    assert gram.rows == [[QQ(1, 2), QQ(0)], [QQ(0), QQ(1, 2)]]
    assert gram.perfect
    block = gram.to_block()
    assert block.gram == [["1/2", "0"], ["0", "1/2"]]
    with pytest.raises(NotOriented):
        gram_matrix(square_reflection, 0, 0)


def test_gram_matrices_are_perfect(square_rotation):
    cases = [
        (square_rotation, 0, [0, 1]),
        (corpus.torus_z7(), 0, [0, 1, 2]),
        (corpus.octahedron_half_turn(), 0, [0, 1, 2]),
        (corpus.octahedron_half_turn(), corpus.GENERATOR, [0]),
    ]
    for K, g, degrees in cases:
        for k in degrees:
            assert gram_matrix(K, g, k).perfect, (K.name, g, k)
    assert len(gram_matrix(corpus.torus_z7(), 0, 1).rows) == 2


# ==================== G-映射 ====================

def test_map_validation(square_reflection, square_rotation, circle):
    with pytest.raises(NotEquivariant):
        SimplicialGMap(square_reflection, square_rotation, {v: v for v in range(4)})
    with pytest.raises(ComplexMismatch):
        SimplicialGMap(circle, circle, {0: 0, 1: 1})
    with pytest.raises(ComplexMismatch):
        SimplicialGMap(circle, circle, {0: 0, 1: 2, 2: 2, 3: 3})
    with pytest.raises(ComplexMismatch):
        compose_maps(identity_map(circle), identity_map(corpus.circle(4)))


def test_pullback_of_cover():
    hexagon, triangle = corpus.circle(6), corpus.circle(3)
    cover = corpus.double_cover(hexagon, triangle)
    pulled = pullback(cover, edge_cochain(triangle.complex))
    assert pulled.values == {(0, 1): QQ(1), (3, 4): QQ(1)}


# ==================== umkehr ====================

def test_circle_to_point(circle):
    collapse = constant_map(circle)
    x = DelocClass(circle, {0: {1: {circle.complex.index((0, 1)): QQ.one}}})
    image = umkehr(collapse, x)
    assert image.space is collapse.target
    assert image.parts == {0: {0: {0: QQ(1)}}}
    assert UmkehrMap(collapse).degree_shifts == {0: -1}
    assert umkehr(collapse, DelocClass(circle, {0: {0: unit(circle.complex).vector()}})).parts == {}


def test_double_cover_multiplies_by_degree():
    hexagon, triangle = corpus.circle(6), corpus.circle(3)
    cover = corpus.double_cover(hexagon, triangle)
    u = UmkehrMap(cover)
    entry = u.classes[0]
    for k in (0, 1):
        for a in entry.target.cocycles(k):
            image = u.apply_class(0, pullback(cover, a, entry.source.complex))
            doubled = Cochain(a.complex, k, {s: 2 * v for s, v in a.values.items()})
            assert entry.target.same_class(image, doubled)


def test_skipped_and_inactive_classes(square_reflection, square_rotation):
    reflection = UmkehrMap(constant_map(square_reflection))
    assert set(reflection.skipped) == {0}
    assert reflection.degree_shifts == {1: 0}

    rotation = UmkehrMap(constant_map(square_rotation))
    assert rotation.skipped == {}
    assert rotation.degree_shifts == {0: -1}
    assert not rotation.classes[corpus.GENERATOR].active


def test_strict_application(square_reflection):
    collapse = constant_map(square_reflection)
    x = full_class(square_reflection)
    with pytest.raises(NotOriented):
        umkehr(collapse, x)
    image = umkehr(collapse, x, strict=False)
    assert set(image.parts) == {corpus.GENERATOR}
    with pytest.raises(ComplexMismatch):
        umkehr(collapse, full_class(corpus.square_reflection()))


def test_corpus_functoriality():
    for pair in corpus.umkehr_corpus():
        report = check_functoriality(pair.first, pair.second)
        assert report.equal, (pair.name, report.discrepancies)


def test_corpus_projection_formula():
    for pair in corpus.umkehr_corpus():
        assert check_projection_formula(pair.first), pair.name
        assert check_projection_formula(pair.second), pair.name


def test_corpus_cycle_equivalence():
    for pair in corpus.umkehr_corpus():
        assert check_cycle_equivalence(pair.first, full_class(pair.first.source)), pair.name


def test_functoriality_reports_skips():
    pairs = {p.name: p for p in corpus.umkehr_corpus()}
    report = check_functoriality(pairs["square→point→point"].first, pairs["square→point→point"].second)
    assert report.equal
    assert set(report.skipped) == {"0"}
    assert report.checked > 0


def test_free_orbit_shift():
    pairs = {p.name: p for p in corpus.umkehr_corpus()}
    assert UmkehrMap(pairs["free_orbit→square→point"].first).degree_shifts == {0: 1}


def test_cohomological_assembly(square_reflection):
    fixed = {corpus.GENERATOR: {0: {0: QQ.one, 1: QQ.one}}}
    assert cohomological_assembly(square_reflection, DelocClass(square_reflection, fixed)) == \
           {corpus.GENERATOR: QQ(2)}
