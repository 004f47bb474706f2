"""
杯积 / 卡积、Poincaré 配对与 umkehr 映射

约定（全部以全局顶点升序为准）:
    (a ∪ b)(v0..v_(p+q)) = a(v0..vp)·b(vp..v_(p+q))
    σ ∩ a = a(v0..vk)·(vk..vn)
    ⟨ω, γ⟩_g = (1/|Γ_g|)·⟨ω ∪ γ, [M_g]⟩

f_! 在每个共轭类上定义为 PD_target⁻¹ ∘ f_* ∘ PD_source，PD = 与基本类做卡积；
次数移动为 dim M_g(target) - dim M_g(source)。在这种右模约定下
    f_!(b ∪ f*a) = f_!(b) ∪ a,    f_!(f*a ∪ b) = (-1)^(|a|·shift) a ∪ f_!(b)
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger
from sympy.polys.domains import QQ

from core.deloc import DelocClass
from core.exceptions import ComplexMismatch, DegreeMismatch, NotEquivariant, NotOriented, NotPure, OrientationMissing
from core.grp import conjugacy_classes
from core.gspace import (
    GComplex,
    Orientation,
    Simplex,
    SimplicialComplex,
    check_orientation,
    faces,
    fixed_subcomplex,
    orientation_preserved,
    permutation_sign,
    point_space,
)
from core.linalg import SparseRationalMatrix, SparseVector, add_to, combine, format_qq, rank_q, solve
from core.nervecoh import InvariantComplex
from core.schemas import FunctorialityReport, GramBlock


# ==================== 链与上链 ====================

@dataclass
class Cochain:
    """单纯 k-上链，values: 升序单形 -> QQ"""
    complex: SimplicialComplex
    degree: int
    values: Dict[Simplex, object] = field(default_factory=dict)

    @classmethod
    def from_vector(cls, X: SimplicialComplex, degree: int, vector: SparseVector) -> "Cochain":
        level = X.simplices(degree)
        return cls(X, degree, {level[i]: v for i, v in vector.items() if v})

    def vector(self) -> SparseVector:
        return {self.complex.index(s): v for s, v in self.values.items() if v}

    def is_zero(self) -> bool:
        return not any(self.values.values())


@dataclass
class Chain:
    """单纯 k-链"""
    complex: SimplicialComplex
    degree: int
    values: Dict[Simplex, object] = field(default_factory=dict)

    @classmethod
    def from_vector(cls, X: SimplicialComplex, degree: int, vector: SparseVector) -> "Chain":
        level = X.simplices(degree)
        return cls(X, degree, {level[i]: v for i, v in vector.items() if v})

    def vector(self) -> SparseVector:
        return {self.complex.index(s): v for s, v in self.values.items() if v}

    def boundary(self) -> "Chain":
        out: Dict[Simplex, object] = {}
        for simplex, value in self.values.items():
            for i, face in enumerate(faces(simplex)):
                add_to(out, face, (-1) ** i * value)
        return Chain(self.complex, self.degree - 1, out)


def _same_complex(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    return a is b or a == b


def cup(a: Cochain, b: Cochain) -> Cochain:
    """
    前面/后面杯积

    Raises:
        ComplexMismatch: 两个上链不在同一复形上
    """
    if not _same_complex(a.complex, b.complex):
        raise ComplexMismatch("杯积的两个上链不在同一复形上")
    X = a.complex
    out: Dict[Simplex, object] = {}
    by_first: Dict[int, List[Tuple[Simplex, object]]] = {}
    for t, value in b.values.items():
        if value:
            by_first.setdefault(t[0], []).append((t, value))
    for s, va in a.values.items():
        if not va:
            continue
        for t, vb in by_first.get(s[-1], ()):
            joined = s + t[1:]
            if joined in X:
                add_to(out, joined, va * vb)
    return Cochain(X, a.degree + b.degree, out)


def cap(sigma: Chain, a: Cochain) -> Chain:
    """
    σ ∩ a = Σ c_σ·a(v0..vk)·(vk..vn)

    Raises:
        ComplexMismatch: 链与上链不在同一复形上
        DegreeMismatch: 上链次数超过链的次数
    """
    if not _same_complex(sigma.complex, a.complex):
        raise ComplexMismatch("卡积的链与上链不在同一复形上")
    k = a.degree
    if k > sigma.degree:
        raise DegreeMismatch(f"上链次数 {k} 超过链次数 {sigma.degree}")
    out: Dict[Simplex, object] = {}
    for simplex, value in sigma.values.items():
        coeff = a.values.get(simplex[:k + 1])
        if coeff:
            add_to(out, simplex[k:], value * coeff)
    return Chain(sigma.complex, sigma.degree - k, out)


def evaluate(a: Cochain, sigma: Chain):
    """⟨a, σ⟩"""
    if a.degree != sigma.degree:
        raise DegreeMismatch(f"上链次数 {a.degree} 与链次数 {sigma.degree} 不一致")
    total = QQ.zero
    for simplex, value in sigma.values.items():
        coeff = a.values.get(simplex)
        if coeff:
            total += value * coeff
    return total


# ==================== 基本类与 Poincaré 对偶 ====================

@dataclass
class FundamentalClass:
    complex: SimplicialComplex
    chain: Chain


def fundamental_class(X: SimplicialComplex, orientation: Optional[Orientation]) -> FundamentalClass:
    """
    Raises:
        OrientationMissing: 没有定向数据
        NotOriented: 定向不合法（含不纯复形）
    """
    if orientation is None:
        raise OrientationMissing(f"{X!r} 没有定向数据")
    try:
        valid = check_orientation(X, orientation)
    except NotPure as exc:
        raise NotOriented(str(exc)) from exc
    if not valid:
        raise NotOriented(f"{X!r} 的定向边界不为零")
    signs = orientation.normalized().top_signs
    chain = Chain(X, X.dim, {s: QQ(signs[s]) for s in X.simplices(X.dim)})
    return FundamentalClass(X, chain)


class DualityData:
    """
    一个分量 M_g ⋊ Γ_g 上的对偶数据：基本类、不变上链复形、PD 与 PD⁻¹

    Raises:
        OrientationMissing / NotOriented: 定向缺失、不合法或不被 Γ_g 保持
    """

    def __init__(self, residual: GComplex):
        self.space = residual
        self.complex = residual.complex
        self.dim = residual.complex.dim
        self.fundamental = fundamental_class(self.complex, residual.orientation)
        if not orientation_preserved(residual, residual.orientation):
            raise NotOriented(f"{residual.name}: 定向不被中心化子保持")
        self.invariant = InvariantComplex(residual)

    def pd(self, z: Cochain) -> Chain:
        return cap(self.fundamental.chain, z)

    def cocycles(self, k: int) -> List[Cochain]:
        return [Cochain.from_vector(self.complex, k, v) for v in self.invariant.cocycle_basis(k)]

    def pd_inverse(self, c: Chain) -> Cochain:
        """
        把 (d-k)-循环的同调类还原成不变 k-上闭链（上同调基的组合）

        Raises:
            ValueError: c 不同调于任何不变类的对偶
        """
        k = self.dim - c.degree
        if not 0 <= k <= self.dim or not any(c.values.values()):
            return Cochain(self.complex, k, {})
        reps = self.invariant.cocycle_basis(k)
        columns = [self.pd(Cochain.from_vector(self.complex, k, z)).vector() for z in reps]
        columns += [Chain(self.complex, c.degree + 1, {t: QQ.one}).boundary().vector()
                    for t in self.complex.simplices(c.degree + 1)]
        matrix = SparseRationalMatrix.from_columns(self.complex.count(c.degree), columns)
        solution = solve(matrix, c.vector())
        if solution is None:
            raise ValueError(f"{self.space.name}: {c.degree}-链不是不变类的 Poincaré 对偶")
        vector = combine((solution.get(i, QQ.zero), z) for i, z in enumerate(reps))
        return Cochain.from_vector(self.complex, k, vector)

    def same_class(self, a: Cochain, b: Cochain) -> bool:
        """a - b 在 H^k(M_g ⋊ Γ_g) 中为零"""
        k = a.degree
        if not 0 <= k <= self.dim:
            return True
        diff = combine([(QQ.one, a.vector()), (-QQ.one, b.vector())])
        return self.invariant.is_coboundary(k, self.invariant.average(diff, k))

    def coordinates(self, z: Cochain) -> List:
        k = z.degree
        if not 0 <= k <= self.dim:
            return []
        return self.invariant.coordinates(k, self.invariant.average(z.vector(), k))


def _residual(K: GComplex, g: int) -> GComplex:
    _, residual = fixed_subcomplex(K, g)
    return residual


def pd(K: GComplex, g: int, z: Cochain) -> Chain:
    """PD(z) = [M_g] ∩ z"""
    return DualityData(_residual(K, g)).pd(z)


def pd_inverse(K: GComplex, g: int, c: Chain) -> Cochain:
    return DualityData(_residual(K, g)).pd_inverse(c)


def pd_pairing(K: GComplex, g: int, omega: Cochain, gamma: Cochain):
    """
    (1/|Γ_g|)·⟨ω ∪ γ, [M_g]⟩

    Raises:
        NotOriented / OrientationMissing: M_g 没有合法的不变定向
        DegreeMismatch: deg ω + deg γ ≠ dim M_g
        ComplexMismatch: ω 或 γ 不在 M_g 上
    """
    residual = _residual(K, g)
    X = residual.complex
    if omega.degree + gamma.degree != X.dim:
        raise DegreeMismatch(f"次数 {omega.degree} + {gamma.degree} ≠ dim M_g = {X.dim}")
    if not (_same_complex(omega.complex, X) and _same_complex(gamma.complex, X)):
        raise ComplexMismatch(f"上链不在 M_g (g={g}) 上")
    fundamental = fundamental_class(X, residual.orientation)
    if not orientation_preserved(residual, residual.orientation):
        raise NotOriented(f"{residual.name}: 定向不被中心化子保持")
    value = evaluate(cup(omega, gamma), fundamental.chain)
    return value * QQ(1, residual.group.order)


@dataclass
class GramMatrix:
    representative: int
    degree: int
    rows: List[List[object]]
    rank: int

    @property
    def perfect(self) -> bool:
        n = len(self.rows)
        return all(len(row) == n for row in self.rows) and self.rank == n

    def to_block(self) -> GramBlock:
        return GramBlock(
            representative=self.representative,
            degree=self.degree,
            dimension=len(self.rows),
            gram=[[format_qq(v) for v in row] for row in self.rows],
            rank=self.rank,
            perfect=self.perfect,
        )


def gram_matrix(K: GComplex, g: int, k: int) -> GramMatrix:
    """H^k × H^(d-k) 上配对的 Gram 矩阵（不变上闭链基）"""
    dual = DualityData(_residual(K, g))
    left, right = dual.cocycles(k), dual.cocycles(dual.dim - k)
    rows = [[pd_pairing(K, g, a, b) for b in right] for a in left]
    matrix = SparseRationalMatrix(len(left), len(right))
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            matrix.add(i, j, value)
    rank = rank_q(matrix)
    logger.debug(f"[pushpair] {K.name}: Gram g={g}, k={k}, {len(left)}x{len(right)}, rank={rank}")
    return GramMatrix(representative=g, degree=k, rows=rows, rank=rank)


# ==================== 单纯 G-映射 ====================

@dataclass
class SimplicialGMap:
    """
    等变单纯映射 source -> target（两端是同一个群）

    Raises:
        NotEquivariant: 群不同，或 f(g·v) ≠ g·f(v)
        ComplexMismatch: 某个单形的像不是 target 中的单形
    """
    source: GComplex
    target: GComplex
    vertex_map: Dict[int, int]
    name: str = "f"

    def __post_init__(self):
        G, H = self.source.group, self.target.group
        if G is not H and G.elements != H.elements:
            raise NotEquivariant(f"{self.name}: 源与靶的作用群不同")
        missing = set(self.source.complex.vertices) - set(self.vertex_map)
        if missing:
            raise ComplexMismatch(f"{self.name}: 顶点 {sorted(missing)} 没有像")
        for simplex in self.source.complex.all_simplices():
            image = tuple(sorted({self.vertex_map[v] for v in simplex}))
            if image not in self.target.complex:
                raise ComplexMismatch(f"{self.name}: 单形 {list(simplex)} 的像 {list(image)} 不在靶复形中")
        for g in range(G.order):
            for v in self.source.complex.vertices:
                if self.vertex_map[self.source.act(g, v)] != self.target.act(g, self.vertex_map[v]):
                    raise NotEquivariant(f"{self.name}: f({g}·{v}) ≠ {g}·f({v})")

    def image(self, simplex: Simplex) -> Tuple[int, Optional[Simplex]]:
        """有序像的 (符号, 升序单形)；退化时返回 (0, None)"""
        images = [self.vertex_map[v] for v in simplex]
        if len(set(images)) < len(images):
            return 0, None
        return permutation_sign(images), tuple(sorted(images))


def identity_map(K: GComplex) -> SimplicialGMap:
    return SimplicialGMap(K, K, {v: v for v in K.complex.vertices}, name="id")


def compose_maps(f: SimplicialGMap, g: SimplicialGMap) -> SimplicialGMap:
    """g∘f"""
    if f.target is not g.source:
        raise ComplexMismatch(f"{f.name} 的靶不是 {g.name} 的源")
    return SimplicialGMap(f.source, g.target, {v: g.vertex_map[w] for v, w in f.vertex_map.items()},
                          name=f"{g.name}∘{f.name}")


def constant_map(K: GComplex, name: str = "const") -> SimplicialGMap:
    """到平凡作用单点的映射"""
    return SimplicialGMap(K, point_space(K.group), {v: 0 for v in K.complex.vertices}, name=name)


def pushforward_chain(f: SimplicialGMap, chain: Chain, target: Optional[SimplicialComplex] = None) -> Chain:
    """f_#: 有序像换成升序并带符号，退化单形丢弃"""
    X = target if target is not None else f.target.complex
    out: Dict[Simplex, object] = {}
    for simplex, value in chain.values.items():
        sign, image = f.image(simplex)
        if sign:
            add_to(out, image, sign * value)
    return Chain(X, chain.degree, out)


def pullback(f: SimplicialGMap, c: Cochain, source: Optional[SimplicialComplex] = None) -> Cochain:
    """(f*c)(σ) = sign·c(f(σ))"""
    X = source if source is not None else f.source.complex
    out: Dict[Simplex, object] = {}
    for simplex in X.simplices(c.degree):
        sign, image = f.image(simplex)
        if sign:
            value = c.values.get(image)
            if value:
                out[simplex] = sign * value
    return Cochain(X, c.degree, out)


# ==================== umkehr ====================

@dataclass
class ClassUmkehr:
    """一个共轭类上的 umkehr 数据"""
    representative: int
    source: Optional[DualityData] = None
    target: Optional[DualityData] = None
    error: Optional[NotOriented] = None

    @property
    def active(self) -> bool:
        return self.source is not None and self.target is not None

    @property
    def shift(self) -> int:
        return self.target.dim - self.source.dim


class UmkehrMap:
    """
    f_! 的逐类实现

    M_g(source) 为空的类上 f_! 为零映射；定向缺失或不被 Γ_g 保持的类记入 skipped。
    """

    def __init__(self, f: SimplicialGMap):
        self.map = f
        self.classes: Dict[int, ClassUmkehr] = {}
        for cls in conjugacy_classes(f.source.group):
            g = cls.representative
            entry = ClassUmkehr(g)
            fixed, src_res = fixed_subcomplex(f.source, g)
            if not fixed.is_empty():
                _, tgt_res = fixed_subcomplex(f.target, g)
                try:
                    entry.source = DualityData(src_res)
                    entry.target = DualityData(tgt_res)
                except NotOriented as exc:
                    entry.source = entry.target = None
                    entry.error = exc
                    logger.warning(f"[pushpair] {f.name}: 跳过 [g={g}]: {exc}")
            self.classes[g] = entry

    @property
    def degree_shifts(self) -> Dict[int, int]:
        return {g: e.shift for g, e in self.classes.items() if e.active}

    @property
    def skipped(self) -> Dict[int, str]:
        return {g: str(e.error) for g, e in self.classes.items() if e.error is not None}

    @property
    def parity_mismatch(self) -> bool:
        return len({s % 2 for s in self.degree_shifts.values()}) > 1

    def apply_class(self, g: int, z: Cochain) -> Cochain:
        """单个类上的 PD_target⁻¹ ∘ f_* ∘ PD_source"""
        entry = self.classes[g]
        if entry.error is not None:
            raise entry.error
        if not entry.active:
            return Cochain(SimplicialComplex(), z.degree, {})
        if z.is_zero() or not 0 <= z.degree <= entry.source.dim:
            return Cochain(entry.target.complex, z.degree + entry.shift, {})
        chain = entry.source.pd(z)
        pushed = pushforward_chain(self.map, chain, entry.target.complex)
        return entry.target.pd_inverse(pushed)

    def apply(self, x: DelocClass, strict: bool = True) -> DelocClass:
        """
        Raises:
            ComplexMismatch: x 不在 f 的源上
            OrientationMissing / NotOriented: strict 时 x 在未定向的类上非零
        """
        if x.space is not self.map.source:
            raise ComplexMismatch(f"{self.map.name}: 输入类不在源空间上")
        parts: Dict[int, Dict[int, SparseVector]] = {}
        for g, graded in sorted(x.parts.items()):
            entry = self.classes[g]
            for k, vector in sorted(graded.items()):
                if not vector:
                    continue
                if entry.error is not None:
                    if strict:
                        raise entry.error
                    continue
                if not entry.active:
                    continue
                image = self.apply_class(g, Cochain.from_vector(entry.source.complex, k, vector))
                if image.is_zero():
                    continue
                target = parts.setdefault(g, {}).setdefault(image.degree, {})
                for i, value in image.vector().items():
                    add_to(target, i, value)
        return DelocClass(self.map.target, parts)


def umkehr(f: SimplicialGMap, x: DelocClass, strict: bool = True) -> DelocClass:
    """f_!(x)"""
    return UmkehrMap(f).apply(x, strict=strict)


def check_functoriality(f: SimplicialGMap, g: SimplicialGMap) -> FunctorialityReport:
    """
    在源的上同调基上逐类比较 (g∘f)_! 与 g_!∘f_!
    """
    gf = compose_maps(f, g)
    uf, ug, ugf = UmkehrMap(f), UmkehrMap(g), UmkehrMap(gf)
    checked, discrepancies, skipped = 0, [], {}
    for rep, entry in sorted(ugf.classes.items()):
        reasons = [u.classes[rep].error for u in (uf, ug, ugf) if u.classes[rep].error is not None]
        if reasons:
            skipped[str(rep)] = str(reasons[0])
            continue
        if not entry.active:
            continue
        for k in range(entry.source.dim + 1):
            for i, z in enumerate(entry.source.cocycles(k)):
                lhs = ugf.apply_class(rep, z)
                rhs = ug.apply_class(rep, uf.apply_class(rep, z))
                checked += 1
                if lhs.degree != rhs.degree:
                    discrepancies.append(f"[g={rep}] H^{k} 基类 {i}: 次数 {lhs.degree} ≠ {rhs.degree}")
                elif not entry.target.same_class(lhs, rhs):
                    discrepancies.append(f"[g={rep}] H^{k} 基类 {i}: 像不同")
    report = FunctorialityReport(
        name=gf.name, equal=not discrepancies, checked=checked,
        discrepancies=discrepancies, skipped=skipped,
    )
    logger.info(f"[pushpair] 函子性 {gf.name}: equal={report.equal}, checked={checked}, skipped={len(skipped)}")
    return report


def check_projection_formula(f: SimplicialGMap) -> bool:
    """
    f_!(f*a ∪ b) == (-1)^(|a|·shift)·a ∪ f_!(b)，在每个已定向类的上同调基上逐一检查
    """
    uf = UmkehrMap(f)
    for rep, entry in sorted(uf.classes.items()):
        if not entry.active:
            continue
        src, tgt = entry.source, entry.target
        for i in range(tgt.dim + 1):
            for a in tgt.cocycles(i):
                pulled = pullback(f, a, src.complex)
                for k in range(src.dim + 1):
                    degree = i + k + entry.shift
                    if i + k > src.dim or not 0 <= degree <= tgt.dim:
                        continue
                    sign = -1 if (i * entry.shift) % 2 else 1
                    for b in src.cocycles(k):
                        lhs = uf.apply_class(rep, cup(pulled, b))
                        product = cup(a, uf.apply_class(rep, b))
                        rhs = Cochain(tgt.complex, degree, {s: sign * v for s, v in product.values.items()})
                        if not tgt.same_class(lhs, rhs):
                            logger.warning(f"[pushpair] {f.name}: 投影公式在 [g={rep}] (i={i}, k={k}) 失败")
                            return False
    return True


# ==================== 上同调 assembly 与 H*_top 的圈 ====================

def cohomological_assembly(K: GComplex, x: DelocClass) -> Dict[int, object]:
    """
    μ(K, x): 每个已定向类 [g] 上 x_g 沿 M_g -> pt 的 umkehr（H^0(pt) = Q 中的值）
    """
    u = UmkehrMap(constant_map(K))
    result = {}
    for rep, entry in sorted(u.classes.items()):
        if not entry.active:
            continue
        value = QQ.zero
        for k, vector in x.parts.get(rep, {}).items():
            if not vector:
                continue
            image = u.apply_class(rep, Cochain.from_vector(entry.source.complex, k, vector))
            if image.degree == 0:
                value += image.values.get((0,), QQ.zero)
        result[rep] = value
    return result


@dataclass
class TopCycle:
    """H*_top 的生成元 (M, ω)"""
    space: GComplex
    cls: DelocClass

    def assemble(self) -> Dict[int, object]:
        return cohomological_assembly(self.space, self.cls)


def check_cycle_equivalence(f: SimplicialGMap, x: DelocClass) -> bool:
    """μ([M, ω]) == μ([N, f_!ω])，只比较两端都定向的类"""
    before = TopCycle(f.source, x).assemble()
    after = TopCycle(f.target, umkehr(f, x, strict=False)).assemble()
    skipped = UmkehrMap(f).skipped
    common = [g for g in before if g in after and g not in skipped]
    equal = all(before[g] == after[g] for g in common)
    logger.debug(f"[pushpair] {f.name}: 圈等价 {equal} (比较 {len(common)} 个类)")
    return equal
