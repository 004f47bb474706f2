"""
平坦等变丛、delocalized Chern 特征与 Chern-assembly 指标配对

丛是乘积丛 K × V（沿边平行移动为恒等），G 通过 rho(g, v): E_v -> E_(g·v) 作用，
因此 rho(g, ·) 沿每条边必须相同。标量取 Q(ζ_N)，N 默认为群的 exponent。

    ch^g(E)(x) = tr rho(g, x)，x ∈ M_g（局部常值，高次部分有理为零）
    μ(K, E)(g) = Σ_k (-1)^k tr(g | C^k(K; E))          assembly 侧
    Σ_{C ⊂ M_g} χ(C)·ch^g(E)|_C                        不动点侧（Todd 类平凡）
"""

from collections import deque
from dataclasses import dataclass, field, replace
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger
from sympy.polys.domains import QQ

from core.cyclotomic import (
    ONE,
    ZERO,
    CycMatrix,
    CyclotomicNumber,
    mat_block_sum,
    mat_equal,
    mat_identity,
    mat_mul,
    mat_trace,
)
from core.deloc import DelocClass, inertia
from core.exceptions import DelocError, InvalidBundle
from core.grp import CyclicTrace, FiniteGroup, burghelea_hp, class_of, conjugacy_classes
from core.gspace import GComplex, coset_space, connected_components, require_regular
from core.pushpair import TopCycle
from core.schemas import AssemblyCheckReport, AssemblyFailure, IndexReport, ValidationReport


# ==================== 平坦等变丛 ====================

@dataclass
class FlatEquivBundle:
    """
    Attributes:
        base: 底空间
        fiber_dim: 纤维维数（处处相同）
        rho: (g, v) -> fiber_dim 阶方阵
        order: 分圆域阶 N
    """
    base: GComplex
    fiber_dim: int
    rho: Dict[Tuple[int, int], CycMatrix]
    order: int = 1
    name: str = "bundle"

    @property
    def fibers(self) -> Dict[int, int]:
        return {v: self.fiber_dim for v in self.base.complex.vertices}

    def matrix(self, g: int, v: int) -> CycMatrix:
        try:
            return self.rho[(g, v)]
        except KeyError:
            raise InvalidBundle(f"{self.name}: 缺少 rho({g}, {v})") from None

    def with_matrix(self, g: int, v: int, value: CycMatrix) -> "FlatEquivBundle":
        """替换单个矩阵（构造反例用）"""
        rho = dict(self.rho)
        rho[(g, v)] = value
        return replace(self, rho=rho)


def extend_rho(
    K: GComplex,
    given: Mapping[int, Mapping[int, CycMatrix]],
    fiber_dim: int,
) -> Dict[Tuple[int, int], CycMatrix]:
    """
    由生成元处的 rho 沿 Cayley 图扩张: rho(xs, v) = rho(x, s·v)·rho(s, v)

    已给出的元素保持原值（由 validate_bundle 检查相容性）。

    Raises:
        InvalidBundle: 缺少某个生成元或顶点的矩阵
    """
    G = K.group
    vertices = K.complex.vertices
    rho: Dict[Tuple[int, int], CycMatrix] = {}
    for g, per_vertex in given.items():
        G.check(g)
        for v, m in per_vertex.items():
            rho[(g, v)] = m
    for s in G.generators:
        if any((s, v) not in rho for v in vertices):
            raise InvalidBundle(f"缺少生成元 {s} 在某些顶点上的矩阵")
    for v in vertices:
        rho.setdefault((G.identity, v), mat_identity(fiber_dim))

    known = {g for g in range(G.order) if all((g, v) in rho for v in vertices)}
    queue = deque(sorted(known))
    while queue:
        x = queue.popleft()
        for s in G.generators:
            y = G.mul(x, s)
            if y in known:
                continue
            for v in vertices:
                rho[(y, v)] = mat_mul(rho[(x, K.act(s, v))], rho[(s, v)])
            known.add(y)
            queue.append(y)
    return rho


def bundle_from_generators(
    K: GComplex,
    fiber_dim: int,
    given: Mapping[int, Mapping[int, CycMatrix]],
    order: Optional[int] = None,
    name: str = "bundle",
) -> FlatEquivBundle:
    rho = extend_rho(K, given, fiber_dim)
    return FlatEquivBundle(K, fiber_dim, rho, order or K.group.exponent, name=name)


def validate_bundle(E: FlatEquivBundle) -> ValidationReport:
    """
    穷举检查形状、单位元、余圈恒等式与平坦性，列出全部违例（不抛异常）
    """
    K, G = E.base, E.base.group
    vertices = K.complex.vertices
    violations: List[str] = []

    complete = all((g, v) in E.rho for g in range(G.order) for v in vertices)
    if not complete:
        violations.append("rho 没有覆盖全部 (g, v)")
    n = E.fiber_dim
    shape = complete and all(len(m) == n and all(len(row) == n for row in m) for m in E.rho.values())
    if complete and not shape:
        violations.append(f"存在不是 {n}x{n} 的矩阵")

    identity = cocycle = flat = shape
    if shape:
        ident = mat_identity(n)
        for v in vertices:
            if not mat_equal(E.rho[(G.identity, v)], ident):
                violations.append(f"rho(e, {v}) 不是单位矩阵")
                identity = False
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                for v in vertices:
                    expected = mat_mul(E.rho[(g, K.act(h, v))], E.rho[(h, v)])
                    if not mat_equal(E.rho[(gh, v)], expected):
                        violations.append(f"余圈违例: g={g}, h={h}, v={v}")
                        cocycle = False
        for a, b in K.complex.simplices(1):
            for g in range(G.order):
                if not mat_equal(E.rho[(g, a)], E.rho[(g, b)]):
                    violations.append(f"平坦性违例: rho({g}, ·) 在边 ({a}, {b}) 上不同")
                    flat = False

    valid = complete and shape and identity and cocycle and flat
    logger.debug(f"[assembly] validate {E.name}: valid={valid}, {len(violations)} 个违例")
    return ValidationReport(
        valid=valid,
        checks={"complete": complete, "shape": shape, "identity": identity, "cocycle": cocycle, "flat": flat},
        violations=violations,
    )


def require_valid(E: FlatEquivBundle) -> None:
    report = validate_bundle(E)
    if not report.valid:
        raise InvalidBundle(f"{E.name}: {report.violations[0]}")


# ==================== 丛的构造 ====================

def trivial_bundle(K: GComplex, name: str = "trivial") -> FlatEquivBundle:
    rho = {(g, v): [[ONE]] for g in range(K.group.order) for v in K.complex.vertices}
    return FlatEquivBundle(K, 1, rho, 1, name=name)


def representation_bundle(
    K: GComplex,
    generator_matrices: Mapping[int, CycMatrix],
    order: Optional[int] = None,
    name: str = "rep",
) -> FlatEquivBundle:
    """常值丛 K × V，G 经表示 R 作用: rho(g, v) = R(g)"""
    sizes = {len(m) for m in generator_matrices.values()}
    if len(sizes) > 1:
        raise InvalidBundle(f"{name}: 生成元矩阵阶数不一致 {sorted(sizes)}")
    fiber_dim = sizes.pop() if sizes else 1
    given = {g: {v: m for v in K.complex.vertices} for g, m in generator_matrices.items()}
    return bundle_from_generators(K, fiber_dim, given, order, name)


def direct_sum(E: FlatEquivBundle, F: FlatEquivBundle) -> FlatEquivBundle:
    if E.base is not F.base:
        raise InvalidBundle(f"{E.name} 与 {F.name} 的底空间不同")
    rho = {key: mat_block_sum(m, F.rho[key]) for key, m in E.rho.items()}
    order = lcm(E.order, F.order)
    return FlatEquivBundle(E.base, E.fiber_dim + F.fiber_dim, rho, order, name=f"{E.name}+{F.name}")


def _cosets(G: FiniteGroup, members: Iterable[int]) -> List[List[int]]:
    """左陪集，按最小元素排序（与 coset_space 的编号一致）"""
    H = set(members)
    seen, cosets = set(), []
    for x in range(G.order):
        if x in seen:
            continue
        coset = sorted(G.mul(x, h) for h in H)
        seen.update(coset)
        cosets.append(coset)
    return sorted(cosets, key=min)


def induced_bundle(
    G: FiniteGroup,
    members: Sequence[int],
    psi: Mapping[int, CyclotomicNumber],
    order: Optional[int] = None,
    name: str = "induced",
) -> FlatEquivBundle:
    """
    子群 H 的一维特征 ψ 诱导出的 G/H 上的线丛

    陪集代表元 r_i 取陪集最小元；g·r_i = r_j·h 时 rho(g, i) = ψ(h)。
    """
    base = coset_space(G, members, name=f"G/H[{name}]")
    cosets = _cosets(G, members)
    reps = [c[0] for c in cosets]
    label = {x: i for i, c in enumerate(cosets) for x in c}
    rho = {}
    for g in range(G.order):
        for i, r in enumerate(reps):
            j = label[G.mul(g, r)]
            h = G.mul(G.inverse(reps[j]), G.mul(g, r))
            if h not in psi:
                raise InvalidBundle(f"{name}: ψ 在 {h} 处没有定义")
            rho[(g, i)] = [[psi[h]]]
    return FlatEquivBundle(base, 1, rho, order or G.exponent, name=name)


def character_of(G: FiniteGroup, matrices: Mapping[int, CycMatrix]) -> Dict[int, CyclotomicNumber]:
    return {g: mat_trace(m) for g, m in sorted(matrices.items()) if g in G}


def induced_character(G: FiniteGroup, members: Sequence[int], psi: Mapping[int, CyclotomicNumber]) -> Dict[int, CyclotomicNumber]:
    """诱导特征标 oracle: (1/|H|)·Σ_x ψ°(x⁻¹gx)"""
    H = set(members)
    weight = CyclotomicNumber.rational(QQ(1, len(H)))
    values = {}
    for g in range(G.order):
        total = ZERO
        for x in range(G.order):
            y = G.conj(G.inverse(x), g)
            if y in H:
                total = total + psi[y]
        values[g] = total * weight
    return values


# ==================== 类函数与 Chern 特征 ====================

@dataclass
class ClassFunction:
    """共轭类 -> 分圆数（键为类代表元）"""
    group: FiniteGroup
    values: Dict[int, CyclotomicNumber] = field(default_factory=dict)

    @classmethod
    def from_element_values(cls, G: FiniteGroup, values: Mapping[int, CyclotomicNumber]) -> "ClassFunction":
        """
        Raises:
            ValueError: 值在某个共轭类上不是常数
        """
        out = {}
        for c in conjugacy_classes(G):
            rep_value = values[c.representative]
            for g in c.members:
                if values[g] != rep_value:
                    raise ValueError(f"值在共轭类 [{c.representative}] 上不是常数")
            out[c.representative] = rep_value
        return cls(G, out)

    def __call__(self, g: int) -> CyclotomicNumber:
        return self.values[class_of(self.group, g).representative]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.group, {k: v + other.values[k] for k, v in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.values.keys() == other.values.keys() and all(v == other.values[k] for k, v in self.values.items())

    def to_json(self) -> Dict[str, str]:
        return {str(k): str(v) for k, v in sorted(self.values.items())}


@dataclass
class DelocChern:
    """
    ch_M^G(E) 的 0 次部分: 代表元 -> {M_g 的顶点: tr rho(g, x)}
    """
    space: GComplex
    parts: Dict[int, Dict[int, CyclotomicNumber]] = field(default_factory=dict)

    def __add__(self, other: "DelocChern") -> "DelocChern":
        parts = {}
        for rep in sorted(set(self.parts) | set(other.parts)):
            mine, theirs = self.parts.get(rep, {}), other.parts.get(rep, {})
            parts[rep] = {x: mine.get(x, ZERO) + theirs.get(x, ZERO) for x in sorted(set(mine) | set(theirs))}
        return DelocChern(self.space, parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DelocChern):
            return NotImplemented
        reps = set(self.parts) | set(other.parts)
        for rep in reps:
            mine, theirs = self.parts.get(rep, {}), other.parts.get(rep, {})
            for x in set(mine) | set(theirs):
                if mine.get(x, ZERO) != theirs.get(x, ZERO):
                    return False
        return True

    def is_rational(self) -> bool:
        return all(v.is_rational() for graded in self.parts.values() for v in graded.values())

    def as_deloc_class(self) -> DelocClass:
        """
        有理时转成 DelocClass（M_g 的 0-上链）

        Raises:
            ValueError: 含非有理值
        """
        if not self.is_rational():
            raise ValueError("Chern 特征含非有理值，不能放进有理 DelocClass")
        decomposition = inertia(self.space)
        parts = {}
        for rep, values in self.parts.items():
            X = decomposition.component(rep).fixed
            vector = {X.index((x,)): v.as_rational() for x, v in values.items() if v}
            parts[rep] = {0: vector} if vector else {}
        return DelocClass(self.space, parts)


def deloc_chern(E: FlatEquivBundle) -> DelocChern:
    """
    ch^g(E) = tr rho(g, ·) 在 M_g 上，每个共轭类一个分量

    Raises:
        InvalidBundle: 丛不合法
        NotRegular: 底空间不是 regular 的
    """
    require_valid(E)
    parts = {}
    for comp in inertia(E.base).components:
        g = comp.representative
        parts[g] = {x: mat_trace(E.rho[(g, x)]) for x in comp.fixed.vertices}
    return DelocChern(E.base, parts)


def euler_character(K: GComplex, E: FlatEquivBundle) -> Dict[int, CyclotomicNumber]:
    """每个元素处的 Σ_k (-1)^k tr(g | C^k(K; E))，只有 g 固定的单形有贡献"""
    values = {}
    for g in range(K.group.order):
        total = ZERO
        for k in range(K.complex.dim + 1):
            for simplex in K.complex.simplices(k):
                if K.act_simplex(g, simplex) != simplex:
                    continue
                sign = (-1) ** k * K.transport_sign(g, simplex)
                total = total + mat_trace(E.rho[(g, simplex[0])]) * sign
        values[g] = total
    return values


def euler_assembly(K: GComplex, E: FlatEquivBundle) -> ClassFunction:
    """
    等变 Euler 特征的特征标（assembly 的像）

    Raises:
        InvalidBundle: 丛不合法或不在 K 上
        NotRegular: K 不是 regular 的
    """
    require_regular(K)
    if E.base is not K:
        raise InvalidBundle(f"{E.name} 不在 {K.name} 上")
    require_valid(E)
    result = ClassFunction.from_element_values(K.group, euler_character(K, E))
    logger.debug(f"[assembly] {K.name}/{E.name}: μ = {result.to_json()}")
    return result


def fixed_point_side(K: GComplex, E: FlatEquivBundle, g: int) -> CyclotomicNumber:
    """Σ_{C ⊂ M_g} χ(C)·ch^g(E)|_C"""
    comp = inertia(K).component(class_of(K.group, g).representative)
    total = ZERO
    for piece in connected_components(comp.fixed):
        value = mat_trace(E.rho[(comp.representative, piece.vertices[0])])
        total = total + value * piece.euler_characteristic()
    return total


def index_pairing(K: GComplex, E: FlatEquivBundle, tau: CyclicTrace, name: str = "") -> IndexReport:
    """
    ⟨μ(K, E), τ_g⟩ 与不动点公式两侧的精确比较

    Raises:
        InvalidBundle / NotRegular: 同 euler_assembly
    """
    character = euler_assembly(K, E)
    lhs = tau.pair_character(character.values)
    rhs = fixed_point_side(K, E, tau.class_rep)
    report = IndexReport(
        name=name or f"{K.name}/{E.name}/τ_{tau.class_rep}",
        class_rep=tau.class_rep,
        lhs=str(lhs),
        rhs=str(rhs),
        equal=lhs == rhs,
    )
    logger.debug(f"[assembly] {report.name}: lhs={report.lhs}, rhs={report.rhs}")
    return report


def ch_top(K: GComplex, E: FlatEquivBundle) -> TopCycle:
    """ch^top([K, E]) = [K, ch(E)]（Todd 类平凡）"""
    return TopCycle(K, deloc_chern(E).as_deloc_class())


# ==================== 语料检查 ====================

@dataclass
class CorpusEntry:
    name: str
    space: GComplex
    bundle: FlatEquivBundle
    class_rep: int
    expected: Optional[CyclotomicNumber] = None


def chern_assembly_check(corpus: Sequence[CorpusEntry]) -> AssemblyCheckReport:
    """
    逐条运行 index_pairing，汇总失败项及其见证（不抛异常）
    """
    failures, entries = [], []
    for entry in corpus:
        try:
            report = validate_bundle(entry.bundle)
            if not report.valid:
                failures.append(AssemblyFailure(name=entry.name, witness=report.violations[0]))
                continue
            tau = next(t for t in burghelea_hp(entry.space.group).basis if t.class_rep == entry.class_rep)
            result = index_pairing(entry.space, entry.bundle, tau, name=entry.name)
        except (DelocError, StopIteration) as exc:
            failures.append(AssemblyFailure(name=entry.name, witness=f"{type(exc).__name__}: {exc}"))
            continue
        entries.append(result)
        if not result.equal:
            failures.append(AssemblyFailure(name=entry.name, witness=f"lhs={result.lhs} ≠ rhs={result.rhs}"))
        elif entry.expected is not None and result.lhs != str(entry.expected):
            failures.append(AssemblyFailure(name=entry.name, witness=f"lhs={result.lhs}，期望 {entry.expected}"))
    passed = len(corpus) - len(failures)
    logger.info(f"[assembly] chern_assembly_check: {passed}/{len(corpus)} 通过")
    return AssemblyCheckReport(total=len(corpus), passed=passed, failures=failures, entries=entries)
