"""
有限群、共轭类与 Burghelea 分解
"""
import random

import pytest
from sympy.polys.domains import QQ

from core.exceptions import CapExceeded, ClosureCapExceeded, ElementNotInGroup, NotBijective
from core.grp import (
    GroupAlgebraElement,
    burghelea_hp,
    centralizer,
    class_of,
    conjugacy_classes,
    cyclic_group,
    dihedral_group,
    group_from_permutations,
    hh0_group_oracle,
    normalizer_quotient_order,
    quaternion_group,
    symmetric_group,
    trivial_group,
)


def test_group_orders():
    assert trivial_group().order == 1
    assert cyclic_group(4).order == 4
    assert symmetric_group(3).order == 6
    assert dihedral_group(4).order == 8
    assert quaternion_group().order == 8


def test_identity_and_inverses(s3):
    assert s3.identity == 0
    assert s3.permutation(0) == (0, 1, 2)
    for g in range(s3.order):
        assert s3.mul(g, s3.inverse(g)) == s3.identity
        assert s3.mul(s3.identity, g) == g


def test_burghelea_matches_oracle_and_class_count(small_groups):
    for name, G, expected in small_groups:
        hp = burghelea_hp(G)
        assert len(conjugacy_classes(G)) == expected, name
        assert hp.even_dim == expected, name
        assert hp.odd_dim == 0, name
        assert hh0_group_oracle(G) == expected, name


def test_class_representatives_are_minimal(small_groups):
    for _, G, _ in small_groups:
        classes = conjugacy_classes(G)
        assert classes[0].representative == 0
        for cls in classes:
            assert cls.representative == min(cls.members)
        assert sum(cls.size for cls in classes) == G.order


def test_centralizer_orbit_stabilizer():
    G = quaternion_group()
    for cls in conjugacy_classes(G):
        cent = centralizer(G, cls.representative)
        assert cent.order * cls.size == G.order
        assert cent.normalizer_quotient_order == cent.order // G.element_order(cls.representative)
    assert centralizer(G, 0).order == 8


def test_exponent():
    assert quaternion_group().exponent == 4
    assert symmetric_group(3).exponent == 6
    assert trivial_group().exponent == 1


def test_subgroup_keeps_embedding(s3):
    cent = centralizer(s3, 3)
    H = cent.as_group()
    assert H.order == 3
    assert H.embedding == cent.members
    assert H.identity == 0


def test_non_bijective_generator_rejected():
    with pytest.raises(NotBijective):
        group_from_permutations([[0, 0, 1]])
    with pytest.raises(NotBijective):
        group_from_permutations([[1, 0], [0, 1, 2]])


def test_closure_cap():
    with pytest.raises(ClosureCapExceeded):
        group_from_permutations([[1, 0, 2], [1, 2, 0]], cap=5)
    with pytest.raises(CapExceeded):
        hh0_group_oracle(symmetric_group(3), cap=2)


def test_element_checks(z2):
    with pytest.raises(ElementNotInGroup):
        class_of(z2, 5)
    assert normalizer_quotient_order(z2, 1) == 1


def test_cyclic_trace_is_a_trace(s3):
    rng = random.Random(0)
    traces = burghelea_hp(s3).basis
    for _ in range(20):
        a = GroupAlgebraElement(s3, {g: QQ(rng.randint(-3, 3)) for g in range(s3.order)})
        b = GroupAlgebraElement(s3, {g: QQ(rng.randint(-3, 3)) for g in range(s3.order)})
        for tau in traces:
            assert tau.evaluate(a * b) == tau.evaluate(b * a)


def test_cyclic_trace_pairs_with_character(z2):
    sigma = burghelea_hp(z2).basis[1]
    assert sigma.class_rep == 1
    assert sigma.pair_character({0: 2, 1: 0}) == 0
