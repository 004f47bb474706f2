"""
平坦等变丛、Chern 特征与 Chern-assembly 恒等式
"""
import pytest

from core import corpus
from core.assembly import (
    ClassFunction,
    CorpusEntry,
    FlatEquivBundle,
    bundle_from_generators,
    ch_top,
    chern_assembly_check,
    deloc_chern,
    direct_sum,
    euler_assembly,
    euler_character,
    fixed_point_side,
    induced_bundle,
    induced_character,
    representation_bundle,
    trivial_bundle,
    validate_bundle,
)
from core.cyclotomic import ONE, ZERO, CyclotomicNumber
from core.exceptions import InvalidBundle
from core.grp import burghelea_hp, centralizer, cyclic_group, trivial_group
from core.gspace import point_space

ZETA3 = CyclotomicNumber.zeta(3)


@pytest.fixture
def point2(z2):
    return point_space(z2, name="point[Z2]")


@pytest.fixture
def sign(point2):
    return representation_bundle(point2, {corpus.GENERATOR: [[-ONE]]}, name="sign")


def test_builtin_corpus_passes():
    report = chern_assembly_check(corpus.assembly_corpus())
    assert report.total == 12
    assert report.passed == 12, [f.witness for f in report.failures]
    assert all(entry.equal for entry in report.entries)
    lhs = {entry.name: entry.lhs for entry in report.entries}
    assert lhs["point/zeta3/g"] == "E(3)"
    assert lhs["octahedron/σ"] == "2"


def test_corrupted_bundle_is_reported(point2, sign):
    broken = sign.with_matrix(corpus.GENERATOR, 0, [[CyclotomicNumber.rational(2)]])
    report = validate_bundle(broken)
    assert not report.valid
    assert not report.checks["cocycle"]

    check = chern_assembly_check([CorpusEntry("broken", point2, broken, corpus.GENERATOR)])
    assert check.passed == 0
    assert check.failures[0].name == "broken"
    assert "余圈" in check.failures[0].witness


def test_wrong_expectation_is_reported(point2, sign):
    entry = CorpusEntry("sign/σ", point2, sign, corpus.GENERATOR, CyclotomicNumber.rational(1))
    report = chern_assembly_check([entry])
    assert report.passed == 0
    assert "期望" in report.failures[0].witness


def test_flatness_violation(square_reflection):
    E = trivial_bundle(square_reflection).with_matrix(0, 1, [[-ONE]])
    report = validate_bundle(E)
    assert not report.checks["flat"]
    assert not report.checks["identity"]


def test_missing_generator_matrix(point2):
    with pytest.raises(InvalidBundle):
        bundle_from_generators(point2, 1, {})
    with pytest.raises(InvalidBundle):
        representation_bundle(point2, {0: [[ONE]], corpus.GENERATOR: [[ONE, ZERO], [ZERO, ONE]]})


def test_euler_assembly_of_reflection(square_reflection):
    E = trivial_bundle(square_reflection)
    character = euler_assembly(square_reflection, E)
    assert character.to_json() == {"0": "0", "1": "2"}
    assert fixed_point_side(square_reflection, E, corpus.GENERATOR) == 2
    with pytest.raises(InvalidBundle):
        euler_assembly(corpus.square_reflection(), E)


def test_direct_sum_is_additive(point2, sign):
    trivial = trivial_bundle(point2)
    total = euler_assembly(point2, direct_sum(sign, trivial))
    assert total == euler_assembly(point2, sign) + euler_assembly(point2, trivial)
    assert total.values == {0: 2, 1: 0}


def test_fiber_dimension_is_global(point2, sign):
    two_points = corpus.discrete(2, trivial_group())
    mixed = FlatEquivBundle(two_points, 1, {(0, 0): [[ONE]], (0, 1): [[ONE, ZERO], [ZERO, ONE]]})
    report = validate_bundle(mixed)
    assert not report.valid
    assert not report.checks["shape"]
    assert trivial_bundle(two_points).fibers == {0: 1, 1: 1}
    with pytest.raises(InvalidBundle):
        direct_sum(sign, trivial_bundle(point_space(cyclic_group(2))))


def test_induced_bundle_matches_character(s3):
    members = sorted(centralizer(s3, 3).members)
    psi = {0: ONE, 3: ZETA3, 4: ZETA3 * ZETA3}
    E = induced_bundle(s3, members, psi, name="ind")
    assert validate_bundle(E).valid
    expected = induced_character(s3, members, psi)
    assert euler_character(E.base, E) == expected
    assert expected == {0: 2, 1: 0, 2: 0, 3: -1, 4: -1, 5: 0}
    with pytest.raises(InvalidBundle):
        induced_bundle(s3, members, {0: ONE})


def test_deloc_chern_on_point(point2):
    regular = representation_bundle(point2, {corpus.GENERATOR: [[ZERO, ONE], [ONE, ZERO]]})
    chern = deloc_chern(regular)
    assert chern.parts == {0: {0: 2}, 1: {0: 0}}
    assert chern.is_rational()
    assert chern.as_deloc_class().parts == {0: {0: {0: 2}}, 1: {}}

    z3 = cyclic_group(3)
    zeta = representation_bundle(point_space(z3), {corpus.GENERATOR: [[ZETA3]]}, order=3)
    assert not deloc_chern(zeta).is_rational()
    with pytest.raises(ValueError):
        deloc_chern(zeta).as_deloc_class()


def test_chern_is_additive(point2, sign):
    trivial = trivial_bundle(point2)
    assert deloc_chern(direct_sum(sign, trivial)) == deloc_chern(sign) + deloc_chern(trivial)


def test_top_cycle_matches_fixed_point_side(square_reflection):
    E = trivial_bundle(square_reflection)
    assembled = ch_top(square_reflection, E).assemble()
    assert assembled == {corpus.GENERATOR: 2}
    assert fixed_point_side(square_reflection, E, corpus.GENERATOR) == assembled[corpus.GENERATOR]


def test_class_function_requires_constant_values(s3):
    with pytest.raises(ValueError):
        ClassFunction.from_element_values(s3, {g: CyclotomicNumber.rational(g) for g in range(s3.order)})


def test_traces_pair_with_characters(s3):
    members = sorted(centralizer(s3, 3).members)
    psi = {0: ONE, 3: ZETA3, 4: ZETA3 * ZETA3}
    E = induced_bundle(s3, members, psi)
    character = euler_assembly(E.base, E)
    for tau in burghelea_hp(s3).basis:
        assert tau.pair_character(character.values) == fixed_point_side(E.base, E, tau.class_rep)
