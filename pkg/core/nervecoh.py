"""
作用群胚 M ⋊ G 的上同调：神经双复形（单纯上链模型）

(p, q)-上链在 (q-单形 σ; g1..gp) 上取有理值。右作用 σ·g := g⁻¹·σ，面映射为
    ∂0(σ; g1..gp) = (σ·g1; g2..gp)
    ∂i(σ; g1..gp) = (σ; .., g_i g_(i+1), ..)        0 < i < p
    ∂p(σ; g1..gp) = (σ; g1..g_(p-1))
∂0 沿单纯自同构拉回时带上顶点重排的符号。
    ∂ = Σ (-1)^i ∂i*，d = 单纯上边缘，δ = ∂ + (-1)^p d

H^n 只涉及 p ≤ n+1 的列，截断是精确的。两个独立 oracle:
    - 不变上链子复形的上同调（有限群、有理系数下与 H^n(M ⋊ G) 同构）
    - 商 Δ-复形的单纯上同调
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Tuple

from loguru import logger
from sympy.polys.domains import QQ

from core.exceptions import DegreeOutOfRange
from core.gspace import GComplex, Simplex, SimplicialComplex, faces, permutation_sign, quotient_complex, require_regular
from core.linalg import (
    SparseRationalMatrix,
    SparseVector,
    add_to,
    combine,
    independent_columns,
    nullspace,
    rank_q,
    solve,
)

NerveKey = Tuple[Simplex, Tuple[int, ...]]


# ==================== 神经层与双上链 ====================

@dataclass(frozen=True)
class NerveLevel:
    """第 p 层: (单形; g1..gp) 的可复合串"""
    space: GComplex
    p: int

    def strings(self) -> Iterator[Tuple[int, ...]]:
        return product(range(self.space.group.order), repeat=self.p)

    def size(self, q: int) -> int:
        return self.space.complex.count(q) * self.space.group.order ** self.p

    def face(self, i: int, simplex: Simplex, gs: Tuple[int, ...]) -> Tuple[int, Simplex, Tuple[int, ...]]:
        """
        第 i 个面映射

        Returns:
            (符号, 像单形, 像串)；符号只在 i = 0 时可能为 -1
        """
        K, G = self.space, self.space.group
        p = self.p
        if not 0 <= i <= p or p == 0:
            raise ValueError(f"面映射下标 {i} 超出 0..{p}")
        if i == 0:
            inverse = G.inverse(gs[0])
            images = [K.action[inverse][v] for v in simplex]
            return permutation_sign(images), tuple(sorted(images)), gs[1:]
        if i == p:
            return 1, simplex, gs[:-1]
        return 1, simplex, gs[:i - 1] + (G.mul(gs[i - 1], gs[i]),) + gs[i + 1:]


@dataclass
class DoubleCochain:
    """
    双复形中的上链

    entries[(p, q)] 是 {(q-单形, (g1..gp)): QQ}，只存非零值
    """
    space: GComplex
    entries: Dict[Tuple[int, int], Dict[NerveKey, object]] = field(default_factory=dict)

    @classmethod
    def single(cls, space: GComplex, p: int, q: int, values: Dict[NerveKey, object]) -> "DoubleCochain":
        cleaned = {k: QQ(v) if isinstance(v, int) else v for k, v in values.items() if v}
        return cls(space, {(p, q): cleaned} if cleaned else {})

    def part(self, p: int, q: int) -> Dict[NerveKey, object]:
        return self.entries.get((p, q), {})

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def __add__(self, other: "DoubleCochain") -> "DoubleCochain":
        result = {key: dict(block) for key, block in self.entries.items()}
        for key, block in other.entries.items():
            target = result.setdefault(key, {})
            for k, v in block.items():
                add_to(target, k, v)
        return DoubleCochain(self.space, {k: v for k, v in result.items() if v})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DoubleCochain):
            return NotImplemented
        mine = {k: v for k, v in self.entries.items() if v}
        theirs = {k: v for k, v in other.entries.items() if v}
        return mine == theirs


def _add_block(result: Dict[Tuple[int, int], Dict[NerveKey, object]], key, block) -> None:
    if not block:
        return
    target = result.setdefault(key, {})
    for k, v in block.items():
        add_to(target, k, v)
    if not target:
        del result[key]


def _horizontal_block(K: GComplex, p_prev: int, q: int, block: Dict[NerveKey, object]) -> Dict[NerveKey, object]:
    """(p-1, q) 块 -> (p, q) 块"""
    p = p_prev + 1
    level = NerveLevel(K, p)
    out: Dict[NerveKey, object] = {}
    if not block:
        return out
    for simplex in K.complex.simplices(q):
        for gs in level.strings():
            total = QQ.zero
            for i in range(p + 1):
                sign, image, rest = level.face(i, simplex, gs)
                value = block.get((image, rest))
                if value:
                    total += (-1) ** i * sign * value
            if total:
                out[(simplex, gs)] = total
    return out


def _coface_table(X: SimplicialComplex, q: int) -> Dict[Simplex, List[Tuple[Simplex, int]]]:
    """q-单形 -> [((q+1)-余面, (-1)^j)]，σ 是余面的第 j 个面"""
    table: Dict[Simplex, List[Tuple[Simplex, int]]] = {}
    for tau in X.simplices(q + 1):
        for j, face in enumerate(faces(tau)):
            table.setdefault(face, []).append((tau, (-1) ** j))
    return table


def _vertical_block(K: GComplex, q: int, block: Dict[NerveKey, object]) -> Dict[NerveKey, object]:
    """(p, q) 块 -> (p, q+1) 块（单纯上边缘，全局顶点升序）"""
    cofaces = _coface_table(K.complex, q) if block else {}
    out: Dict[NerveKey, object] = {}
    for (simplex, gs), value in block.items():
        for tau, sign in cofaces.get(simplex, ()):
            add_to(out, (tau, gs), sign * value)
    return out


def horizontal_differential(c: DoubleCochain) -> DoubleCochain:
    """∂ = Σ (-1)^i ∂i*，把 (p-1, q) 分量送到 (p, q)"""
    result: Dict[Tuple[int, int], Dict[NerveKey, object]] = {}
    for (p, q), block in sorted(c.entries.items()):
        _add_block(result, (p + 1, q), _horizontal_block(c.space, p, q, block))
    return DoubleCochain(c.space, result)


def vertical_differential(c: DoubleCochain) -> DoubleCochain:
    """d: (p, q) -> (p, q+1)，不带 (-1)^p 因子"""
    result: Dict[Tuple[int, int], Dict[NerveKey, object]] = {}
    for (p, q), block in sorted(c.entries.items()):
        _add_block(result, (p, q + 1), _vertical_block(c.space, q, block))
    return DoubleCochain(c.space, result)


def total_differential(c: DoubleCochain) -> DoubleCochain:
    """δ = ∂ + (-1)^p d"""
    result: Dict[Tuple[int, int], Dict[NerveKey, object]] = {}
    for (p, q), block in sorted(c.entries.items()):
        _add_block(result, (p + 1, q), _horizontal_block(c.space, p, q, block))
        vertical = _vertical_block(c.space, q, block)
        if p % 2:
            vertical = {k: -v for k, v in vertical.items()}
        _add_block(result, (p, q + 1), vertical)
    return DoubleCochain(c.space, result)


# ==================== 总复形的矩阵 ====================

class TotalComplex:
    """
    总复形 C^n = ⊕_{p+q=n} C^{p,q} 的坐标化

    C^{p,q} 内的坐标: 单形下标 * |G|^p + 串的 |G| 进制编码
    """

    def __init__(self, K: GComplex):
        self.space = K
        self.order = K.group.order
        self.dim = K.complex.dim

    def blocks(self, n: int) -> List[Tuple[int, int, int]]:
        """总次数 n 的 (p, q, 偏移)，按 q 升序"""
        out, offset = [], 0
        for q in range(0, min(n, self.dim) + 1):
            p = n - q
            out.append((p, q, offset))
            offset += NerveLevel(self.space, p).size(q)
        return out

    def size(self, n: int) -> int:
        if n < 0:
            return 0
        return sum(NerveLevel(self.space, n - q).size(q) for q in range(0, min(n, self.dim) + 1))

    def encode(self, p: int, q: int, simplex: Simplex, gs: Tuple[int, ...], offset: int) -> int:
        code = 0
        for g in gs:
            code = code * self.order + g
        return offset + self.space.complex.index(simplex) * self.order ** p + code

    def decode(self, n: int, index: int) -> Tuple[int, int, NerveKey]:
        for p, q, offset in reversed(self.blocks(n)):
            if index >= offset:
                local = index - offset
                width = self.order ** p
                simplex = self.space.complex.simplices(q)[local // width]
                code, gs = local % width, []
                for _ in range(p):
                    code, g = divmod(code, self.order)
                    gs.append(g)
                return p, q, (simplex, tuple(reversed(gs)))
        raise IndexError(f"坐标 {index} 超出 C^{n}")

    def to_vector(self, c: DoubleCochain, n: int) -> SparseVector:
        vector: SparseVector = {}
        for p, q, offset in self.blocks(n):
            for (simplex, gs), value in c.part(p, q).items():
                vector[self.encode(p, q, simplex, gs, offset)] = value
        return vector

    def from_vector(self, vector: SparseVector, n: int) -> DoubleCochain:
        entries: Dict[Tuple[int, int], Dict[NerveKey, object]] = {}
        for index, value in vector.items():
            p, q, key = self.decode(n, index)
            entries.setdefault((p, q), {})[key] = value
        return DoubleCochain(self.space, entries)

    def differential(self, n: int) -> SparseRationalMatrix:
        """δ_n: C^n -> C^{n+1}，行按 C^{n+1} 坐标、列按 C^n 坐标"""
        K = self.space
        matrix = SparseRationalMatrix(self.size(n + 1), self.size(n))
        if n < 0:
            return matrix
        source = {(p, q): offset for p, q, offset in self.blocks(n)}
        for p, q, offset in self.blocks(n + 1):
            level = NerveLevel(K, p)
            horizontal = source.get((p - 1, q)) if p >= 1 else None
            vertical = source.get((p, q - 1)) if q >= 1 else None
            vsign = -1 if p % 2 else 1
            for simplex in K.complex.simplices(q):
                for gs in level.strings():
                    row = self.encode(p, q, simplex, gs, offset)
                    if horizontal is not None:
                        for i in range(p + 1):
                            sign, image, rest = level.face(i, simplex, gs)
                            col = self.encode(p - 1, q, image, rest, horizontal)
                            matrix.add(row, col, QQ((-1) ** i * sign))
                    if vertical is not None:
                        for j, face in enumerate(faces(simplex)):
                            col = self.encode(p, q - 1, face, gs, vertical)
                            matrix.add(row, col, QQ(vsign * (-1) ** j))
        logger.debug(f"[nervecoh] δ_{n}: {matrix.shape}, nnz={matrix.nnz}")
        return matrix


@dataclass
class TotalCohomology:
    """H^n(M ⋊ G) 的维数与代表上闭链"""
    degree: int
    dim: int
    basis: List[DoubleCochain] = field(default_factory=list)


def total_cohomology(K: GComplex, n: int, with_basis: bool = True) -> TotalCohomology:
    """
    总复形第 n 次上同调（列截断 p ≤ n+1）

    Args:
        K: regular G-复形
        n: 次数，0 ≤ n ≤ dim K + 1
        with_basis: 是否给出代表上闭链

    Raises:
        DegreeOutOfRange: 次数越界
        NotRegular: 作用不是 regular 的
    """
    require_regular(K)
    if n < 0 or n > K.complex.dim + 1:
        raise DegreeOutOfRange(f"次数 {n} 超出 0..{K.complex.dim + 1}")
    total = TotalComplex(K)
    d_n = total.differential(n)
    d_prev = total.differential(n - 1)
    size = total.size(n)
    if not with_basis:
        dim = size - rank_q(d_n) - rank_q(d_prev)
        logger.info(f"[nervecoh] {K.name}: dim H^{n} = {dim}")
        return TotalCohomology(degree=n, dim=dim)

    kernel = nullspace(d_n)
    images = [d_prev.column(j) for j in range(d_prev.cols)]
    picked = independent_columns(size, images + kernel)
    reps = [kernel[j - len(images)] for j in picked if j >= len(images)]
    basis = [total.from_vector(v, n) for v in reps]
    logger.info(f"[nervecoh] {K.name}: dim H^{n} = {len(basis)}")
    return TotalCohomology(degree=n, dim=len(basis), basis=basis)


# ==================== 单纯上链与不变子复形 ====================

def coboundary_matrix(X: SimplicialComplex, q: int) -> SparseRationalMatrix:
    """d_q: C^q -> C^{q+1}"""
    matrix = SparseRationalMatrix(X.count(q + 1), X.count(q))
    for row, tau in enumerate(X.simplices(q + 1)):
        for j, face in enumerate(faces(tau)):
            matrix.add(row, X.index(face), QQ((-1) ** j))
    return matrix


def simplicial_cohomology(X: SimplicialComplex, n: int) -> int:
    """普通单纯上同调的维数（Betti 数）"""
    if n < 0 or n > X.dim:
        return 0
    rank_in = rank_q(coboundary_matrix(X, n - 1)) if n > 0 else 0
    return X.count(n) - rank_q(coboundary_matrix(X, n)) - rank_in


def betti_numbers(X: SimplicialComplex) -> List[int]:
    return [simplicial_cohomology(X, n) for n in range(X.dim + 1)]


def quotient_cohomology(K: GComplex, n: int) -> int:
    """商 Δ-复形的上同调维数（第二个 oracle）"""
    quotient = quotient_complex(K)
    if n < 0 or n > quotient.dim:
        return 0
    rank_out = rank_q(quotient.coboundary(n))
    rank_in = rank_q(quotient.coboundary(n - 1)) if n > 0 else 0
    return quotient.count(n) - rank_out - rank_in


class InvariantComplex:
    """
    G-不变单纯上链子复形

    不变条件 c(h·σ) = sign(h, σ)·c(σ)。基是带符号的轨道和（轨道中每个单形系数 ±1，
    regular 作用下符号与 h 的选取无关），不同轨道支撑不交，所以基自动线性无关。
    """

    def __init__(self, K: GComplex):
        self.space = K
        self.complex = K.complex
        self.basis: List[List[SparseVector]] = []
        for q in range(self.complex.dim + 1):
            seen = set()
            level: List[SparseVector] = []
            for simplex in self.complex.simplices(q):
                if simplex in seen:
                    continue
                vector: SparseVector = {}
                for h in range(K.group.order):
                    image = K.act_simplex(h, simplex)
                    if image in seen:
                        continue
                    seen.add(image)
                    vector[self.complex.index(image)] = QQ(K.transport_sign(h, simplex))
                level.append(vector)
            self.basis.append(level)
        self._d = [coboundary_matrix(self.complex, q) for q in range(self.complex.dim + 1)]
        self._cocycles: Dict[int, List[SparseVector]] = {}

    def size(self, q: int) -> int:
        return len(self.basis[q]) if 0 <= q <= self.complex.dim else 0

    def coboundary(self, c: SparseVector, q: int) -> SparseVector:
        """普通单纯上边缘 d_q c"""
        if not 0 <= q <= self.complex.dim:
            return {}
        return self._d[q].matvec(c)

    def _image_columns(self, q: int) -> List[SparseVector]:
        """d(不变 (q-1)-上链基) 在 C^q 中的像"""
        if q <= 0:
            return []
        return [v for v in (self._d[q - 1].matvec(b) for b in self.basis[q - 1]) if v]

    def dim(self, n: int) -> int:
        """不变上链的第 n 次上同调维数"""
        if n < 0 or n > self.complex.dim:
            return 0
        out = SparseRationalMatrix.from_columns(self.complex.count(n + 1), [self._d[n].matvec(b) for b in self.basis[n]])
        incoming = SparseRationalMatrix.from_columns(self.complex.count(n), self._image_columns(n))
        return self.size(n) - rank_q(out) - rank_q(incoming)

    def cocycle_basis(self, n: int) -> List[SparseVector]:
        """H^n 的代表上闭链（C^n 中的不变向量）"""
        if n in self._cocycles:
            return self._cocycles[n]
        if n < 0 or n > self.complex.dim:
            return []
        rows = self.complex.count(n + 1)
        restricted = SparseRationalMatrix.from_columns(rows, [self._d[n].matvec(b) for b in self.basis[n]])
        kernel = [combine((c, self.basis[n][j]) for j, c in z.items()) for z in nullspace(restricted)]
        images = self._image_columns(n)
        picked = independent_columns(self.complex.count(n), images + kernel)
        reps = [kernel[j - len(images)] for j in picked if j >= len(images)]
        self._cocycles[n] = reps
        return reps

    def coordinates(self, n: int, cocycle: SparseVector) -> List:
        """
        不变上闭链在 cocycle_basis(n) 下的坐标（模上边缘）

        Raises:
            ValueError: 输入不是不变上闭链
        """
        reps = self.cocycle_basis(n)
        if not cocycle:
            return [QQ.zero] * len(reps)
        columns = reps + self._image_columns(n)
        solution = solve(SparseRationalMatrix.from_columns(self.complex.count(n), columns), cocycle)
        if solution is None:
            raise ValueError(f"不是 H^{n} 中的不变上闭链类")
        return [solution.get(j, QQ.zero) for j in range(len(reps))]

    def is_coboundary(self, n: int, cocycle: SparseVector) -> bool:
        if not cocycle:
            return True
        images = self._image_columns(n)
        if not images:
            return False
        return solve(SparseRationalMatrix.from_columns(self.complex.count(n), images), cocycle) is not None

    def average(self, c: SparseVector, q: int) -> SparseVector:
        """投影到不变上链: (1/|G|) Σ_h sign(h, σ)·c(h·σ)"""
        K = self.space
        result: SparseVector = {}
        weight = QQ(1, K.group.order)
        for simplex in self.complex.simplices(q):
            total = QQ.zero
            for h in range(K.group.order):
                value = c.get(self.complex.index(K.act_simplex(h, simplex)))
                if value:
                    total += K.transport_sign(h, simplex) * value
            if total:
                result[self.complex.index(simplex)] = total * weight
        return result


def invariant_oracle(K: GComplex, n: int) -> int:
    """
    不变上链子复形的第 n 次上同调维数

    Raises:
        NotRegular: 作用不是 regular 的
    """
    require_regular(K)
    dim = InvariantComplex(K).dim(n)
    logger.debug(f"[nervecoh] {K.name}: 不变上链 oracle H^{n} = {dim}")
    return dim
