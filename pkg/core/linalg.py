"""
精确稀疏线性代数内核

所有秩 / 零空间 / 求解都在有理数域上精确完成，底层使用 sympy 的稀疏域矩阵
SDM（dict-of-dicts，零元不存储）。

- rank_q: 先按行清分母转到 ZZ，再按非零元个数升序重排行列（Markowitz 式），
  最后做无除法的 Gauss-Jordan 消元（rref_den）
- 互不相交的行列块独立求秩，可按 RUNTIME_CONFIG["threads"] 并行

稀疏向量统一用 {index: QQ} 字典表示。
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices.sdm import SDM

from config.config import get_runtime_config

SparseVector = Dict[int, object]


def to_qq(value):
    """
    把 int / "a/b" 字符串 / Fraction / sympy Rational / QQ 元素转成 QQ 元素

    Args:
        value: 任意精确有理数表示

    Returns:
        QQ 元素
    """
    if isinstance(value, str):
        frac = Fraction(value.strip())
        return QQ(frac.numerator, frac.denominator)
    if isinstance(value, float):
        raise TypeError(f"拒绝浮点数作为精确标量: {value!r}")
    return QQ(int(value.numerator), int(value.denominator))


def format_qq(value) -> str:
    """QQ 元素的确定性字符串形式（整数不带分母）"""
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def add_to(vector: SparseVector, index: int, value) -> None:
    """vector[index] += value，结果为零时删除该键"""
    total = vector.get(index, QQ.zero) + value
    if total:
        vector[index] = total
    else:
        vector.pop(index, None)


def combine(pairs: Iterable[Tuple[object, SparseVector]]) -> SparseVector:
    """线性组合 Σ c_i v_i"""
    result: SparseVector = {}
    for coeff, vector in pairs:
        if not coeff:
            continue
        for index, value in vector.items():
            add_to(result, index, coeff * value)
    return result


def dot(u: SparseVector, v: SparseVector):
    """稀疏向量内积"""
    if len(u) > len(v):
        u, v = v, u
    total = QQ.zero
    for index, value in u.items():
        other = v.get(index)
        if other is not None:
            total += value * other
    return total


class SparseRationalMatrix:
    """
    稀疏有理矩阵

    entries 只存非零元；所有下标都在 [0, rows) x [0, cols) 内。
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Dict[int, Dict[int, object]]] = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"非法矩阵形状: ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        self.entries: Dict[int, Dict[int, object]] = {}
        for i, row in (entries or {}).items():
            for j, value in row.items():
                self.add(i, j, to_qq(value))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[SparseVector]) -> "SparseRationalMatrix":
        """由稀疏列向量组装矩阵"""
        matrix = cls(rows, len(columns))
        for j, column in enumerate(columns):
            for i, value in column.items():
                matrix.add(i, j, value)
        return matrix

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {i: {i: QQ.one} for i in range(n)})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.entries.values())

    def add(self, i: int, j: int, value) -> None:
        """entries[i][j] += value（保持无零元）"""
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"下标 ({i}, {j}) 超出形状 {self.shape}")
        if not value:
            return
        row = self.entries.setdefault(i, {})
        add_to(row, j, value)
        if not row:
            del self.entries[i]

    def get(self, i: int, j: int):
        return self.entries.get(i, {}).get(j, QQ.zero)

    def transpose(self) -> "SparseRationalMatrix":
        result = SparseRationalMatrix(self.cols, self.rows)
        for i, row in self.entries.items():
            for j, value in row.items():
                result.entries.setdefault(j, {})[i] = value
        return result

    def matvec(self, vector: SparseVector) -> SparseVector:
        """M · v"""
        result: SparseVector = {}
        for i, row in self.entries.items():
            value = dot(row, vector)
            if value:
                result[i] = value
        return result

    def matmul(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"形状不匹配: {self.shape} x {other.shape}")
        product = _to_sdm(self, QQ).matmul(_to_sdm(other, QQ))
        return SparseRationalMatrix(self.rows, other.cols, product.to_dod())

    def column(self, j: int) -> SparseVector:
        return {i: row[j] for i, row in self.entries.items() if j in row}

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def _to_sdm(matrix: SparseRationalMatrix, domain) -> SDM:
    return SDM({i: dict(row) for i, row in matrix.entries.items()}, matrix.shape, domain)


def _integer_rows(rows: Sequence[Dict[int, object]], col_pos: Dict[int, int]) -> Dict[int, Dict[int, object]]:
    """逐行乘以分母的 lcm，转成 ZZ 上的行（行缩放不改变秩与主元位置）"""
    dod = {}
    for new_i, row in enumerate(rows):
        scale = lcm(*(int(v.denominator) for v in row.values()))
        dod[new_i] = {
            col_pos[j]: ZZ(int(v.numerator) * (scale // int(v.denominator)))
            for j, v in row.items()
        }
    return dod


def _blocks(matrix: SparseRationalMatrix) -> List[List[int]]:
    """按共享列把行分成互不相交的块（并查集）"""
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # 列用负数编号，与行分开
    for i, row in matrix.entries.items():
        for j in row:
            ri, rj = find(i), find(-j - 1)
            if ri != rj:
                parent[ri] = rj

    groups: Dict[int, List[int]] = {}
    for i in sorted(matrix.entries):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda rows: rows[0])


def _block_rank(matrix: SparseRationalMatrix, row_ids: List[int]) -> int:
    rows = sorted(row_ids, key=lambda i: (len(matrix.entries[i]), i))
    col_count = Counter(j for i in rows for j in matrix.entries[i])
    col_order = sorted(col_count, key=lambda j: (col_count[j], j))
    col_pos = {j: k for k, j in enumerate(col_order)}
    dod = _integer_rows([matrix.entries[i] for i in rows], col_pos)
    _, _, pivots = SDM(dod, (len(rows), len(col_order)), ZZ).rref_den()
    return len(pivots)


def rank_q(matrix: SparseRationalMatrix, threads: Optional[int] = None) -> int:
    """
    有理数域上的精确秩

    Args:
        matrix: 稀疏有理矩阵
        threads: 并行线程数，默认取 RUNTIME_CONFIG["threads"]

    Returns:
        秩
    """
    if matrix.is_zero():
        return 0
    blocks = _blocks(matrix)
    workers = threads if threads is not None else get_runtime_config()["threads"]
    logger.debug(f"[linalg] rank_q {matrix.shape}, nnz={matrix.nnz}, blocks={len(blocks)}")
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(lambda rows: _block_rank(matrix, rows), blocks))
    return sum(_block_rank(matrix, rows) for rows in blocks)


def nullspace(matrix: SparseRationalMatrix) -> List[SparseVector]:
    """
    右零空间 {x : M x = 0} 的一组基

    Returns:
        稀疏向量列表（长度为 cols 的坐标）
    """
    n = matrix.cols
    if n == 0:
        return []
    if matrix.is_zero():
        return [{j: QQ.one} for j in range(n)]
    rref, pivots = _to_sdm(matrix, QQ).rref()
    null, _ = rref.nullspace_from_rref(pivots)
    return [dict(null[k]) for k in sorted(null)]


def independent_columns(rows: int, columns: Sequence[SparseVector]) -> List[int]:
    """
    从左到右贪心选出线性无关的列

    Args:
        rows: 向量维数
        columns: 候选列向量

    Returns:
        被选中列的下标（升序）
    """
    matrix = SparseRationalMatrix.from_columns(rows, columns)
    if matrix.is_zero():
        return []
    row_ids = sorted(matrix.entries)
    dod = _integer_rows([matrix.entries[i] for i in row_ids], {j: j for j in range(matrix.cols)})
    _, _, pivots = SDM(dod, (len(row_ids), matrix.cols), ZZ).rref_den()
    return sorted(pivots)


def solve(matrix: SparseRationalMatrix, rhs: SparseVector) -> Optional[SparseVector]:
    """
    求 M x = b 的一个特解

    Returns:
        解向量；无解时返回 None
    """
    n = matrix.cols
    augmented = SparseRationalMatrix(matrix.rows, n + 1)
    augmented.entries = {i: dict(row) for i, row in matrix.entries.items()}
    for i, value in rhs.items():
        augmented.add(i, n, value)
    if augmented.is_zero():
        return {}
    rref, pivots = _to_sdm(augmented, QQ).rref()
    if pivots and pivots[-1] == n:
        return None
    solution: SparseVector = {}
    for r, p in enumerate(pivots):
        value = rref[r].get(n)
        if value:
            solution[p] = value / rref[r][p]
    return solution
