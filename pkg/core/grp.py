"""
有限群核心

群元素是有限集 {0..n-1} 上的置换（像数组元组），按字典序排序后以下标作为元素 id，
因此单位元 id 恒为 0，"最小 id" 的代表元选择是确定的。

乘法约定: mul(a, b) = a∘b，即 (a∘b)[i] = a[b[i]]。

有理系数下，有限群 N_g 的正次上同调为零（transfer 论证），所以群代数的
周期循环同调 HP^even 退化为类函数空间，HP^odd = 0：这是库级引理，不重算。
"""

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.polys.domains import QQ

from config.config import get_cap_config
from core.exceptions import CapExceeded, ClosureCapExceeded, ElementNotInGroup, NotBijective
from core.linalg import SparseRationalMatrix, rank_q

Perm = Tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    """(a∘b)[i] = a[b[i]]"""
    return tuple(a[i] for i in b)


def invert(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, image in enumerate(a):
        inv[image] = i
    return tuple(inv)


class FiniteGroup:
    """
    置换表示的有限群

    Attributes:
        elements: 按字典序排列的置换
        generators: 生成元 id 列表
        degree: 被作用集合的大小
        embedding: 若为子群，子群 id -> 母群 id
    """

    def __init__(
        self,
        elements: Sequence[Perm],
        generators: Sequence[int],
        degree: int,
        embedding: Optional[Sequence[int]] = None,
    ):
        self.elements: Tuple[Perm, ...] = tuple(elements)
        self.degree = degree
        self.generators: Tuple[int, ...] = tuple(generators)
        self.embedding: Optional[Tuple[int, ...]] = tuple(embedding) if embedding is not None else None
        self._index: Dict[Perm, int] = {perm: i for i, perm in enumerate(self.elements)}
        self._inverse: Tuple[int, ...] = tuple(self._index[invert(p)] for p in self.elements)
        self._mul_cache: Dict[Tuple[int, int], int] = {}
        self._classes: Optional[List["ConjugacyClass"]] = None
        self._exponent: Optional[int] = None

    # ==================== 基本结构 ====================

    @property
    def identity(self) -> int:
        return 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return isinstance(g, int) and 0 <= g < len(self.elements)

    def check(self, g: int) -> int:
        """确认 g 是本群元素 id"""
        if g not in self:
            raise ElementNotInGroup(f"元素 {g!r} 不在阶为 {self.order} 的群中")
        return g

    def permutation(self, g: int) -> Perm:
        return self.elements[g]

    def index_of(self, perm: Sequence[int]) -> int:
        try:
            return self._index[tuple(perm)]
        except KeyError:
            raise ElementNotInGroup(f"置换 {list(perm)} 不在群中") from None

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        result = self._mul_cache.get(key)
        if result is None:
            result = self._index[compose(self.elements[a], self.elements[b])]
            self._mul_cache[key] = result
        return result

    def inverse(self, g: int) -> int:
        return self._inverse[g]

    def conj(self, h: int, g: int) -> int:
        """h g h⁻¹"""
        return self.mul(self.mul(h, g), self._inverse[h])

    def mul_table(self) -> List[List[int]]:
        """完整乘法表（只用于小群的公理检查）"""
        return [[self.mul(a, b) for b in range(self.order)] for a in range(self.order)]

    def element_order(self, g: int) -> int:
        self.check(g)
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    @property
    def exponent(self) -> int:
        """所有元素阶的 lcm"""
        if self._exponent is None:
            self._exponent = lcm(*(self.element_order(g) for g in range(self.order)))
        return self._exponent

    def is_abelian(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for i, a in enumerate(self.generators)
            for b in self.generators[i + 1:]
        )

    def power(self, g: int, k: int) -> int:
        result = self.identity
        base = g if k >= 0 else self.inverse(g)
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def subgroup(self, members: Iterable[int]) -> "FiniteGroup":
        """
        由元素 id 集合构造子群（必须对乘法封闭），保留到母群的 embedding

        子群元素仍按字典序排列，因此 embedding 单调递增，单位元 id 仍为 0。
        """
        ids = sorted(set(members))
        if not ids or ids[0] != self.identity:
            raise ValueError("子群必须包含单位元")
        member_set = set(ids)
        for a in ids:
            for b in ids:
                if self.mul(a, b) not in member_set:
                    raise ValueError(f"元素集合对乘法不封闭: {a}*{b}")
        perms = [self.elements[g] for g in ids]
        local = {g: i for i, g in enumerate(ids)}
        gens = _generating_subset(self, ids)
        return FiniteGroup(perms, [local[g] for g in gens], self.degree, embedding=ids)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, degree={self.degree})"


def _closure_ids(group: FiniteGroup, gens: Sequence[int]) -> set:
    reached = {group.identity}
    frontier = [group.identity]
    while frontier:
        next_frontier = []
        for x in frontier:
            for s in gens:
                y = group.mul(x, s)
                if y not in reached:
                    reached.add(y)
                    next_frontier.append(y)
        frontier = next_frontier
    return reached


def _generating_subset(group: FiniteGroup, ids: Sequence[int]) -> List[int]:
    """贪心挑出一组生成元"""
    gens: List[int] = []
    reached = {group.identity}
    for g in ids:
        if g not in reached:
            gens.append(g)
            reached = _closure_ids(group, gens)
    return gens


# ==================== 构造 ====================

def group_from_permutations(
    gens: Sequence[Sequence[int]],
    points: Optional[int] = None,
    cap: Optional[int] = None,
) -> FiniteGroup:
    """
    生成元置换的闭包

    Args:
        gens: 0-based 像数组形式的置换列表
        points: 被作用集合大小（gens 为空时必须给出，默认 1）
        cap: 元素个数上限，默认 CAP_CONFIG["closure_cap"]

    Returns:
        FiniteGroup

    Raises:
        NotBijective: 生成元不是同一有限集上的双射
        ClosureCapExceeded: 群阶超过上限
    """
    cap = cap if cap is not None else get_cap_config()["closure_cap"]
    perms = [tuple(int(x) for x in g) for g in gens]

    degree = points if points is not None else (len(perms[0]) if perms else 1)
    if degree < 1:
        raise NotBijective(f"被作用集合至少要有 1 个点: {degree}")
    for k, perm in enumerate(perms):
        if len(perm) != degree:
            raise NotBijective(f"生成元 {k} 长度 {len(perm)} 与点数 {degree} 不一致")
        if sorted(perm) != list(range(degree)):
            raise NotBijective(f"生成元 {k} 不是 {{0..{degree - 1}}} 上的双射: {list(perm)}")

    if perms:
        # Schreier-Sims 先求阶，避免超大闭包
        group_order = PermutationGroup([Permutation(list(p)) for p in perms]).order()
        if group_order > cap:
            raise ClosureCapExceeded(f"群阶 {group_order} 超过上限 {cap}（可用 DELOC_CAP 调整）")

    identity = tuple(range(degree))
    elements = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for x in frontier:
            for s in perms:
                y = compose(x, s)
                if y not in elements:
                    elements.add(y)
                    new_frontier.append(y)
                    if len(elements) > cap:
                        raise ClosureCapExceeded(f"闭包元素超过上限 {cap}")
        frontier = new_frontier

    ordered = sorted(elements)
    index = {p: i for i, p in enumerate(ordered)}
    group = FiniteGroup(ordered, [index[p] for p in perms], degree)
    logger.debug(f"[grp] 闭包完成: {len(perms)} 个生成元, 阶 {group.order}")
    return group


def trivial_group() -> FiniteGroup:
    return group_from_permutations([], points=1)


def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return trivial_group()
    return group_from_permutations([[(i + 1) % n for i in range(n)]])


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return trivial_group()
    swap = [1, 0] + list(range(2, n))
    if n == 2:
        return group_from_permutations([swap])
    return group_from_permutations([swap, [(i + 1) % n for i in range(n)]])


def dihedral_group(n: int) -> FiniteGroup:
    """正 n 边形的对称群，阶 2n（n ≥ 3）"""
    if n < 3:
        raise ValueError(f"二面体群要求 n >= 3: {n}")
    rotation = [(i + 1) % n for i in range(n)]
    reflection = [(-i) % n for i in range(n)]
    return group_from_permutations([rotation, reflection])


def quaternion_group() -> FiniteGroup:
    """四元数群 Q8 的左正则表示（点 0..7 依次为 1,-1,i,-i,j,-j,k,-k）"""
    i_gen = [2, 3, 1, 0, 6, 7, 5, 4]
    j_gen = [4, 5, 7, 6, 1, 0, 2, 3]
    return group_from_permutations([i_gen, j_gen])


# ==================== 共轭结构 ====================

@dataclass(frozen=True)
class ConjugacyClass:
    """共轭类（代表元为类中最小 id）"""
    representative: int
    members: FrozenSet[int]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Centralizer:
    """中心化子 Γ_g = {h : hg = gh}"""
    parent: FiniteGroup
    element: int
    members: Tuple[int, ...]
    normalizer_quotient_order: int = 0

    @property
    def order(self) -> int:
        return len(self.members)

    def as_group(self) -> FiniteGroup:
        return self.parent.subgroup(self.members)


def conjugacy_classes(G: FiniteGroup) -> List[ConjugacyClass]:
    """
    共轭类划分，按代表元 id 升序

    共轭轨道用生成元做 BFS：h g h⁻¹ 对所有生成元 h 闭包即为整个共轭类。
    """
    if G._classes is not None:
        return G._classes
    assigned = [False] * G.order
    conjugators = list(G.generators) + [G.inverse(s) for s in G.generators]
    classes: List[ConjugacyClass] = []
    for g in range(G.order):
        if assigned[g]:
            continue
        orbit = {g}
        queue = deque([g])
        while queue:
            x = queue.popleft()
            for h in conjugators:
                y = G.conj(h, x)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        for x in orbit:
            assigned[x] = True
        classes.append(ConjugacyClass(representative=g, members=frozenset(orbit)))
    G._classes = classes
    logger.debug(f"[grp] |G|={G.order}: {len(classes)} 个共轭类")
    return classes


def class_of(G: FiniteGroup, g: int) -> ConjugacyClass:
    """g 所在的共轭类"""
    G.check(g)
    for cls in conjugacy_classes(G):
        if g in cls.members:
            return cls
    raise ElementNotInGroup(f"元素 {g} 不属于任何共轭类")


def centralizer(G: FiniteGroup, g: int) -> Centralizer:
    """
    中心化子（逐元素检验交换性）

    Raises:
        ElementNotInGroup: g 不是本群元素
    """
    G.check(g)
    members = tuple(h for h in range(G.order) if G.mul(h, g) == G.mul(g, h))
    class_size = class_of(G, g).size
    assert class_size * len(members) == G.order, "轨道-稳定子公式不成立"
    return Centralizer(
        parent=G,
        element=g,
        members=members,
        normalizer_quotient_order=len(members) // G.element_order(g),
    )


def normalizer_quotient_order(G: FiniteGroup, g: int) -> int:
    """|N_g| = |Γ_g| / ord(g)"""
    return centralizer(G, g).normalizer_quotient_order


# ==================== 群代数与循环迹 ====================

@dataclass
class GroupAlgebraElement:
    """群代数元素 Σ a_h h（系数可为 QQ 或分圆数）"""
    group: FiniteGroup
    coefficients: Dict[int, object] = field(default_factory=dict)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        G = self.group
        result: Dict[int, object] = {}
        for a, ca in self.coefficients.items():
            for b, cb in other.coefficients.items():
                ab = G.mul(a, b)
                value = result.get(ab, 0) + ca * cb
                if value:
                    result[ab] = value
                else:
                    result.pop(ab, None)
        return GroupAlgebraElement(G, result)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        result = dict(self.coefficients)
        for h, c in other.coefficients.items():
            value = result.get(h, 0) + c
            if value:
                result[h] = value
            else:
                result.pop(h, None)
        return GroupAlgebraElement(self.group, result)


@dataclass(frozen=True)
class CyclicTrace:
    """τ_g(Σ a_h h) = Σ_{h ∈ [g]} a_h"""
    class_rep: int
    members: FrozenSet[int]

    def evaluate(self, a: GroupAlgebraElement):
        total = 0
        for h in sorted(self.members):
            value = a.coefficients.get(h)
            if value is not None:
                total = value + total
        return total

    def pair_character(self, values: Mapping[int, object]):
        """与特征标配对：取代表元处的值（单代表元约定）"""
        return values[self.class_rep]


@dataclass(frozen=True)
class HpGroupAlgebra:
    """HP*(ℚG) 的维数与基（每个共轭类一个循环迹）"""
    even_dim: int
    odd_dim: int
    basis: Tuple[CyclicTrace, ...]


def burghelea_hp(G: FiniteGroup) -> HpGroupAlgebra:
    """
    有限群的 Burghelea 分解

    每个共轭类贡献 H^0(N_g; ℚ) = ℚ，正次部分有理平凡。
    """
    classes = conjugacy_classes(G)
    basis = tuple(CyclicTrace(class_rep=c.representative, members=c.members) for c in classes)
    logger.info(f"[grp] HP even={len(basis)}, odd=0 (|G|={G.order})")
    return HpGroupAlgebra(even_dim=len(basis), odd_dim=0, basis=basis)


def hh0_group_oracle(G: FiniteGroup, cap: Optional[int] = None) -> int:
    """
    dim A/[A,A]（A = ℚG），对换位子 gh - hg 张成的空间精确求秩

    Raises:
        CapExceeded: |G| 超过 CAP_CONFIG["hh0_group_cap"]
    """
    cap = cap if cap is not None else get_cap_config()["hh0_group_cap"]
    if G.order > cap:
        raise CapExceeded(f"|G|={G.order} 超过群代数 oracle 上限 {cap}")
    columns = []
    seen = set()
    for g in range(G.order):
        for h in range(g + 1, G.order):
            gh, hg = G.mul(g, h), G.mul(h, g)
            if gh == hg:
                continue
            key = (min(gh, hg), max(gh, hg))
            if key in seen:
                continue
            seen.add(key)
            columns.append({key[0]: QQ.one, key[1]: -QQ.one})
    matrix = SparseRationalMatrix.from_columns(G.order, columns)
    dim = G.order - rank_q(matrix)
    logger.debug(f"[grp] HH0 oracle: {len(columns)} 个换位子, dim={dim}")
    return dim
