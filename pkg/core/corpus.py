"""
内置样例：G-空间、assembly 语料（12 条）与可复合的 umkehr 映射对
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

from core.assembly import CorpusEntry, representation_bundle, trivial_bundle
from core.cyclotomic import CyclotomicNumber, ONE, ZERO
from core.grp import FiniteGroup, cyclic_group, trivial_group
from core.gspace import (
    GComplex,
    SimplicialComplex,
    gcomplex_from_generators,
    octahedron,
    point_space,
    polygon,
    torus7,
    trivial_action,
)
from core.pushpair import SimplicialGMap, constant_map, identity_map

# cyclic_group(n) 中生成元（旋转 1 步）的 id
GENERATOR = 1


# ==================== 空间 ====================

def square_reflection(G: FiniteGroup = None) -> GComplex:
    """正方形圆周，ℤ/2 交换顶点 1、3（固定 0、2）"""
    G = G or cyclic_group(2)
    K, o = polygon(4)
    return gcomplex_from_generators(K, G, [[0, 3, 2, 1]], orientation=o, name="square_reflection")


def square_rotation(G: FiniteGroup = None) -> GComplex:
    """正方形圆周，ℤ/2 作半圈旋转 (02)(13)"""
    G = G or cyclic_group(2)
    K, o = polygon(4)
    return gcomplex_from_generators(K, G, [[2, 3, 0, 1]], orientation=o, name="square_rotation")


def torus_z7() -> GComplex:
    """7 顶点环面，ℤ/7 平移顶点"""
    K, o = torus7()
    return gcomplex_from_generators(K, cyclic_group(7), [[(i + 1) % 7 for i in range(7)]],
                                    orientation=o, name="torus7")


def octahedron_half_turn() -> GComplex:
    """八面体绕 z 轴半圈旋转（0↔1, 2↔3，固定 4、5）"""
    K, o = octahedron()
    return gcomplex_from_generators(K, cyclic_group(2), [[1, 0, 3, 2, 4, 5]],
                                    orientation=o, name="octahedron")


def circle(n: int, G: FiniteGroup = None, name: str = None) -> GComplex:
    """n 边形圆周，群平凡作用"""
    K, o = polygon(n)
    return trivial_action(K, G or trivial_group(), orientation=o, name=name or f"circle{n}")


def discrete(points: int, G: FiniteGroup, name: str = "points") -> GComplex:
    return trivial_action(SimplicialComplex(range(points)), G, name=name)


BUILTIN_SPACES: Dict[str, Callable[[], GComplex]] = {
    "point": lambda: point_space(trivial_group()),
    "square_reflection": square_reflection,
    "square_rotation": square_rotation,
    "torus7": torus_z7,
    "octahedron": octahedron_half_turn,
    "hexagon": lambda: circle(6),
    "triangle": lambda: circle(3),
}


# ==================== assembly 语料 ====================

def assembly_corpus() -> List[CorpusEntry]:
    """(K, E, τ) 三元组及期望的 lhs"""
    z2, z3 = cyclic_group(2), cyclic_group(3)
    point2 = point_space(z2, name="point[Z2]")
    point3 = point_space(z3, name="point[Z3]")
    regular = representation_bundle(point2, {GENERATOR: [[ZERO, ONE], [ONE, ZERO]]}, name="regular")
    sign = representation_bundle(point2, {GENERATOR: [[-ONE]]}, name="sign")
    zeta = CyclotomicNumber.zeta(3)
    character = representation_bundle(point3, {GENERATOR: [[zeta]]}, order=3, name="zeta3")

    point = point_space(trivial_group())
    reflection = square_reflection(z2)
    rotation = square_rotation(z2)
    torus = torus_z7()
    octa = octahedron_half_turn()

    def rational(n: int) -> CyclotomicNumber:
        return CyclotomicNumber.rational(n)

    return [
        CorpusEntry("point/trivial", point, trivial_bundle(point), 0, rational(1)),
        CorpusEntry("point/regular/e", point2, regular, 0, rational(2)),
        CorpusEntry("point/regular/σ", point2, regular, GENERATOR, rational(0)),
        CorpusEntry("point/sign/e", point2, sign, 0, rational(1)),
        CorpusEntry("point/sign/σ", point2, sign, GENERATOR, rational(-1)),
        CorpusEntry("point/zeta3/g", point3, character, GENERATOR, zeta),
        CorpusEntry("circle/reflection/e", reflection, trivial_bundle(reflection), 0, rational(0)),
        CorpusEntry("circle/reflection/σ", reflection, trivial_bundle(reflection), GENERATOR, rational(2)),
        CorpusEntry("circle/rotation/e", rotation, trivial_bundle(rotation), 0, rational(0)),
        CorpusEntry("circle/rotation/σ", rotation, trivial_bundle(rotation), GENERATOR, rational(0)),
        CorpusEntry("torus7/e", torus, trivial_bundle(torus), 0, rational(0)),
        CorpusEntry("octahedron/σ", octa, trivial_bundle(octa), GENERATOR, rational(2)),
    ]


# ==================== umkehr 语料 ====================

@dataclass
class ComposablePair:
    name: str
    first: SimplicialGMap
    second: SimplicialGMap


def double_cover(source: GComplex, target: GComplex) -> SimplicialGMap:
    """2n 边形 -> n 边形，i ↦ i mod n"""
    n = len(target.complex.vertices)
    return SimplicialGMap(source, target, {v: v % n for v in source.complex.vertices}, name="double_cover")


def umkehr_corpus() -> List[ComposablePair]:
    pairs: List[ComposablePair] = []

    c4 = circle(4)
    pairs.append(ComposablePair("id∘id", identity_map(c4), identity_map(c4)))

    hexagon, triangle = circle(6), circle(3)
    cover = double_cover(hexagon, triangle)
    pairs.append(ComposablePair("hexagon→triangle→point", cover, constant_map(triangle)))
    pairs.append(ComposablePair("hexagon→triangle→triangle", cover, identity_map(triangle)))
    pairs.append(ComposablePair("hexagon→hexagon→triangle", identity_map(hexagon), cover))

    z2 = cyclic_group(2)
    reflection = square_reflection(z2)
    fixed_points = discrete(2, z2, name="fixed_points")
    inclusion = SimplicialGMap(fixed_points, reflection, {0: 0, 1: 2}, name="fixed_inclusion")
    pairs.append(ComposablePair("fixed_points→square→point", inclusion, constant_map(reflection)))

    rotation = square_rotation(z2)
    free_orbit = gcomplex_from_generators(SimplicialComplex(range(2)), z2, [[1, 0]], name="free_orbit")
    orbit_inclusion = SimplicialGMap(free_orbit, rotation, {0: 0, 1: 2}, name="orbit_inclusion")
    pairs.append(ComposablePair("free_orbit→square→point", orbit_inclusion, constant_map(rotation)))

    collapse = constant_map(reflection)
    pairs.append(ComposablePair("square→point→point", collapse, identity_map(collapse.target)))
    return pairs
