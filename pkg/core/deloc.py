"""
惯性群胚与 delocalized 上同调

    S = {(x, g) : x·g = x}，G 按 (x, g)·h = (x·h, h⁻¹gh) 共轭作用
    H*_{G,deloc}(M) = ⊕_{[g]} H*(M_g ⋊ Γ_g)

群胚代数只建在顶点集 K₀ 上（箭头 (x, g)，源 x·g，靶 x），标量取 Q(ζ_N)，N = exp(G)。
Tu–Xu 迹只实现 0 次（迹）部分。
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union

from loguru import logger
from sympy.polys.domains import QQ

from config.config import get_cap_config
from core.cyclotomic import ZERO, CyclotomicNumber
from core.exceptions import CapExceeded, DegreeOutOfRange
from core.grp import Centralizer, ConjugacyClass, centralizer, conjugacy_classes
from core.gspace import GComplex, SimplicialComplex, fixed_subcomplex, require_regular
from core.linalg import SparseRationalMatrix, SparseVector, rank_q
from core.nervecoh import DoubleCochain, InvariantComplex, total_cohomology

Arrow = Tuple[int, int]


# ==================== 惯性分解 ====================

@dataclass
class InertiaComponent:
    """一个共轭类 [g] 对应的分量 (M_g, Γ_g 作用)"""
    conjugacy_class: ConjugacyClass
    element: int
    centralizer: Centralizer
    fixed: SimplicialComplex
    residual: GComplex

    @property
    def representative(self) -> int:
        return self.conjugacy_class.representative

    @property
    def dim(self) -> int:
        return self.fixed.dim


@dataclass
class InertiaDecomposition:
    space: GComplex
    components: List[InertiaComponent]

    def component(self, representative: int) -> InertiaComponent:
        for comp in self.components:
            if comp.representative == representative:
                return comp
        raise KeyError(f"没有代表元为 {representative} 的分量")


def inertia(K: GComplex, representatives: Optional[Mapping[int, int]] = None) -> InertiaDecomposition:
    """
    按共轭类分解惯性群胚

    Args:
        K: regular G-复形
        representatives: 可选，类的最小代表元 -> 改用的类内元素（用于代表元无关性检查）

    Raises:
        NotRegular: 作用不是 regular 的
    """
    require_regular(K)
    chosen = dict(representatives or {})
    components = []
    for cls in conjugacy_classes(K.group):
        g = chosen.get(cls.representative, cls.representative)
        if g not in cls.members:
            raise ValueError(f"元素 {g} 不在代表元为 {cls.representative} 的共轭类中")
        fixed, residual = fixed_subcomplex(K, g)
        components.append(InertiaComponent(cls, g, centralizer(K.group, g), fixed, residual))
        logger.debug(f"[deloc] {K.name}: [g={g}] M_g f={fixed.f_vector()}, |Γ_g|={residual.group.order}")
    return InertiaDecomposition(K, components)


# ==================== delocalized 上同调 ====================

@dataclass
class ComponentCohomology:
    representative: int
    centralizer_order: int
    fixed_f_vector: List[int]
    dims: List[int]


@dataclass
class DelocCohomology:
    """各分量的 dim H^k(M_g ⋊ Γ_g) 及按奇偶的总和"""
    space: str
    components: List[ComponentCohomology]

    @property
    def even(self) -> int:
        return sum(d for comp in self.components for k, d in enumerate(comp.dims) if k % 2 == 0)

    @property
    def odd(self) -> int:
        return sum(d for comp in self.components for k, d in enumerate(comp.dims) if k % 2 == 1)

    def degree_zero_total(self) -> int:
        return sum(comp.dims[0] for comp in self.components if comp.dims)


def deloc_cohomology(
    K: GComplex,
    method: str = "total",
    representatives: Optional[Mapping[int, int]] = None,
) -> DelocCohomology:
    """
    H*_{G,deloc}(K) 的逐类维数

    Args:
        K: regular G-复形
        method: "total" 用神经双复形；"invariant" 用不变上链子复形
        representatives: 见 inertia

    Raises:
        NotRegular: 作用不是 regular 的
    """
    if method not in ("total", "invariant"):
        raise ValueError(f"未知方法: {method}")
    decomposition = inertia(K, representatives)
    components = []
    for comp in decomposition.components:
        if method == "total":
            dims = [total_cohomology(comp.residual, k, with_basis=False).dim for k in range(comp.dim + 1)]
        else:
            invariant = InvariantComplex(comp.residual)
            dims = [invariant.dim(k) for k in range(comp.dim + 1)]
        components.append(ComponentCohomology(
            representative=comp.representative,
            centralizer_order=comp.centralizer.order,
            fixed_f_vector=comp.fixed.f_vector(),
            dims=dims,
        ))
    result = DelocCohomology(space=K.name, components=components)
    logger.info(f"[deloc] {K.name}: even={result.even}, odd={result.odd}")
    return result


@dataclass
class DelocClass:
    """
    H*_{G,deloc} 中的元素

    parts[代表元][k] 是 M_g 上的 Γ_g-不变 k-上闭链（M_g 的 k-单形坐标）。
    """
    space: GComplex
    parts: Dict[int, Dict[int, SparseVector]] = field(default_factory=dict)

    def __post_init__(self):
        decomposition = {c.representative: c for c in inertia(self.space).components}
        for rep, graded in self.parts.items():
            if rep not in decomposition:
                raise KeyError(f"{rep} 不是共轭类代表元")
            top = decomposition[rep].dim
            for k, cochain in graded.items():
                if cochain and not 0 <= k <= top:
                    raise DegreeOutOfRange(f"[g={rep}] 次数 {k} 超出 0..{top}")

    @property
    def parity(self) -> Optional[str]:
        """全部为偶次时 "even"，全部为奇次时 "odd"，零元或混合时 None"""
        degrees = {k % 2 for graded in self.parts.values() for k, c in graded.items() if c}
        if degrees == {0}:
            return "even"
        if degrees == {1}:
            return "odd"
        return None

    def component(self, rep: int, k: int) -> SparseVector:
        return self.parts.get(rep, {}).get(k, {})


def deloc_basis(K: GComplex) -> Dict[int, Dict[int, List[SparseVector]]]:
    """每个分量每个次数的代表上闭链（不变上链模型）"""
    basis: Dict[int, Dict[int, List[SparseVector]]] = {}
    for comp in inertia(K).components:
        invariant = InvariantComplex(comp.residual)
        basis[comp.representative] = {k: invariant.cocycle_basis(k) for k in range(comp.dim + 1)}
    return basis


# ==================== 群胚代数与 Tu–Xu 迹 ====================

@dataclass
class GroupoidAlgebraElement:
    """
    K₀ ⋊ G 卷积代数中的元素，coefficients: (x, g) -> 分圆数
    """
    space: GComplex
    coefficients: Dict[Arrow, CyclotomicNumber] = field(default_factory=dict)

    def __post_init__(self):
        vertices = set(self.space.complex.vertices)
        order = self.space.group.exponent
        cleaned = {}
        for (x, g), value in self.coefficients.items():
            if x not in vertices:
                raise ValueError(f"箭头 ({x}, {g}) 的顶点不在复形中")
            self.space.group.check(g)
            value = CyclotomicNumber.coerce(value, order)
            if value:
                cleaned[(x, g)] = value
        self.coefficients = cleaned

    @classmethod
    def from_cochain(cls, c: DoubleCochain) -> "GroupoidAlgebraElement":
        """(p, q) = (1, 0) 上链即箭头上的函数"""
        order = c.space.group.exponent
        return cls(c.space, {
            (simplex[0], gs[0]): CyclotomicNumber.rational(value, order)
            for (simplex, gs), value in c.part(1, 0).items()
        })

    def __mul__(self, other: "GroupoidAlgebraElement") -> "GroupoidAlgebraElement":
        return arrow_product(self, other)

    def __add__(self, other: "GroupoidAlgebraElement") -> "GroupoidAlgebraElement":
        result = dict(self.coefficients)
        for arrow, value in other.coefficients.items():
            result[arrow] = result.get(arrow, ZERO) + value
        return GroupoidAlgebraElement(self.space, result)


def arrow_product(a: GroupoidAlgebraElement, b: GroupoidAlgebraElement) -> GroupoidAlgebraElement:
    """
    卷积 (a*b)(m, k) = Σ_g a(m, g)·b(m·g, g⁻¹k)

    即箭头乘法 (x, g)(x·g, h) = (x, gh)，不可复合的箭头乘积为零。
    """
    K, G = a.space, a.space.group
    by_target: Dict[int, List[Tuple[int, CyclotomicNumber]]] = {}
    for (y, h), value in sorted(b.coefficients.items()):
        by_target.setdefault(y, []).append((h, value))
    result: Dict[Arrow, CyclotomicNumber] = {}
    for (x, g), ca in sorted(a.coefficients.items()):
        for h, cb in by_target.get(K.right_act(x, g), ()):
            arrow = (x, G.mul(g, h))
            result[arrow] = result.get(arrow, ZERO) + ca * cb
    return GroupoidAlgebraElement(K, result)


def inertia_points(K: GComplex) -> List[Arrow]:
    """S = {(x, g) : x·g = x}（只含顶点）"""
    return [(x, g) for x in K.complex.vertices for g in range(K.group.order) if K.right_act(x, g) == x]


def tuxu_trace(a: Union[GroupoidAlgebraElement, DoubleCochain]) -> Dict[Arrow, CyclotomicNumber]:
    """
    Tr(a)(x, γ) = Σ_h a(x·h, h⁻¹γh)，(x, γ) ∈ S

    Returns:
        惯性点上的函数（只保留非零值）
    """
    if isinstance(a, DoubleCochain):
        a = GroupoidAlgebraElement.from_cochain(a)
    K, G = a.space, a.space.group
    result: Dict[Arrow, CyclotomicNumber] = {}
    for x, gamma in inertia_points(K):
        total = ZERO
        for h in range(G.order):
            value = a.coefficients.get((K.right_act(x, h), G.conj(G.inverse(h), gamma)))
            if value is not None:
                total = total + value
        if total:
            result[(x, gamma)] = total
    return result


def tr_g(a: Union[GroupoidAlgebraElement, DoubleCochain], g: int) -> Dict[int, CyclotomicNumber]:
    """
    Tr 沿 j_g: M_g -> S 的拉回，M_g 顶点上的 Γ_g-不变函数

    Raises:
        ElementNotInGroup: g 不是群元素
    """
    space = a.space
    space.group.check(g)
    trace = tuxu_trace(a)
    return {x: trace[(x, g)] for x in space.complex.vertices if (x, g) in trace}


def hh0_groupoid_oracle(K0: GComplex, cap: Optional[int] = None) -> int:
    """
    dim A/[A,A]，A 为有限 G-集 K₀ 的群胚卷积代数（基为箭头）

    Raises:
        CapExceeded: 箭头数超过 CAP_CONFIG["groupoid_arrow_cap"]
    """
    if K0.complex.dim > 0:
        raise ValueError(f"{K0.name} 不是 0 维复形")
    cap = cap if cap is not None else get_cap_config()["groupoid_arrow_cap"]
    G = K0.group
    vertices = K0.complex.vertices
    arrows = [(x, g) for x in vertices for g in range(G.order)]
    if len(arrows) > cap:
        raise CapExceeded(f"{len(arrows)} 个箭头超过群胚 oracle 上限 {cap}")
    index = {arrow: i for i, arrow in enumerate(arrows)}

    def product(alpha: Arrow, beta: Arrow) -> Optional[Arrow]:
        (x, g), (y, h) = alpha, beta
        return (x, G.mul(g, h)) if K0.right_act(x, g) == y else None

    columns, seen = [], set()
    for alpha in arrows:
        x, g = alpha
        # 只有 αβ 或 βα 非零的 β 才产生非零换位子
        partners = {(K0.right_act(x, g), h) for h in range(G.order)}
        partners |= {(K0.act(h, x), h) for h in range(G.order)}
        for beta in sorted(partners):
            column: SparseVector = {}
            ab, ba = product(alpha, beta), product(beta, alpha)
            if ab is not None:
                column[index[ab]] = column.get(index[ab], QQ.zero) + QQ.one
            if ba is not None:
                column[index[ba]] = column.get(index[ba], QQ.zero) - QQ.one
            column = {i: v for i, v in column.items() if v}
            key = tuple(sorted(column.items()))
            if column and key not in seen:
                seen.add(key)
                columns.append(column)
    dim = len(arrows) - rank_q(SparseRationalMatrix.from_columns(len(arrows), columns))
    logger.debug(f"[deloc] {K0.name}: HH0 群胚 oracle, {len(arrows)} 个箭头, dim={dim}")
    return dim
