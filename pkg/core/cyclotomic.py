"""
分圆域 Q(ζ_N) 上的精确标量

元素表示为系数在 QQ 上、对 N 次分圆多项式 Φ_N 取模后的多项式（ζ_N 为变元）。
不同阶的元素做运算时先提升到 lcm 阶：ζ_N = ζ_L^(L/N)。

JSON 标量格式:
    3            整数
    "-2/3"       有理数字符串
    [c0, c1, …]  Σ c_k ζ_N^k（c_k 为整数或有理数字符串）

输出格式沿用 GAP 的 E(N) 记号，例如 "-1-E(3)"、"1/2*E(8)^3"。
"""

from functools import lru_cache
from math import gcd
from typing import List, Sequence, Tuple

from sympy.polys.densearith import dup_add, dup_mul, dup_neg, dup_rem, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import QQ
from sympy.polys.specialpolys import cyclotomic_poly

from core.linalg import format_qq, to_qq


@lru_cache(maxsize=None)
def _phi(order: int) -> Tuple:
    """Φ_N 的稠密系数（高次在前，QQ）"""
    coeffs = cyclotomic_poly(order, polys=True).all_coeffs()
    return tuple(QQ(int(c)) for c in coeffs)


def _reduce(dup: List, order: int) -> List:
    return dup_rem(dup_strip(dup), list(_phi(order)), QQ)


class CyclotomicNumber:
    """Q(ζ_N) 中的元素（不可变）"""

    __slots__ = ("order", "_dup")

    def __init__(self, dup: Sequence, order: int = 1):
        if order < 1:
            raise ValueError(f"分圆阶必须为正整数: {order}")
        self.order = order
        self._dup = _reduce(list(dup), order)

    # ==================== 构造 ====================

    @classmethod
    def rational(cls, value, order: int = 1) -> "CyclotomicNumber":
        return cls([to_qq(value)], order)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CyclotomicNumber":
        """ζ_N^power"""
        power %= order
        return cls([QQ.one] + [QQ.zero] * power, order)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, order: int) -> "CyclotomicNumber":
        """由低次在前的系数 [c0, c1, …] 构造 Σ c_k ζ^k"""
        return cls([to_qq(c) for c in reversed(list(coeffs))], order)

    @classmethod
    def from_json(cls, value, order: int) -> "CyclotomicNumber":
        """解析 JSON 标量（整数 / "a/b" / 系数列表）"""
        if isinstance(value, bool):
            raise TypeError(f"非法标量: {value!r}")
        if isinstance(value, list):
            return cls.from_coefficients(value, order)
        return cls.rational(value, order)

    @classmethod
    def coerce(cls, value, order: int = 1) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value
        return cls.rational(value, order)

    # ==================== 查询 ====================

    def coefficients(self) -> List:
        """低次在前的 QQ 系数"""
        return list(reversed(self._dup))

    def is_zero(self) -> bool:
        return not self._dup

    def is_rational(self) -> bool:
        return len(self._dup) <= 1

    def as_rational(self):
        """有理元素返回 QQ 值，否则抛 ValueError"""
        if not self.is_rational():
            raise ValueError(f"{self} 不是有理数")
        return self._dup[0] if self._dup else QQ.zero

    def lift(self, order: int) -> "CyclotomicNumber":
        """提升到 Q(ζ_order)，要求 self.order 整除 order"""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"阶 {self.order} 不整除 {order}")
        step = order // self.order
        coeffs = self.coefficients()
        lifted = [QQ.zero] * (step * (len(coeffs) - 1) + 1) if coeffs else []
        for k, c in enumerate(coeffs):
            lifted[k * step] = c
        return CyclotomicNumber(list(reversed(lifted)), order)

    # ==================== 运算 ====================

    def _common(self, other) -> Tuple[List, List, int]:
        other = CyclotomicNumber.coerce(other, self.order)
        order = self.order * other.order // gcd(self.order, other.order)
        return self.lift(order)._dup, other.lift(order)._dup, order

    def __add__(self, other):
        a, b, order = self._common(other)
        return CyclotomicNumber(dup_add(a, b, QQ), order)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, order = self._common(other)
        return CyclotomicNumber(dup_sub(a, b, QQ), order)

    def __rsub__(self, other):
        return CyclotomicNumber.coerce(other, self.order) - self

    def __mul__(self, other):
        a, b, order = self._common(other)
        return CyclotomicNumber(dup_mul(a, b, QQ), order)

    __rmul__ = __mul__

    def __neg__(self):
        return CyclotomicNumber(dup_neg(self._dup, QQ), self.order)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CyclotomicNumber, int)) and not hasattr(other, "denominator"):
            return NotImplemented
        a, b, _ = self._common(other)
        return a == b

    __hash__ = None

    # ==================== 输出 ====================

    def __str__(self) -> str:
        if self.is_rational():
            return format_qq(self.as_rational())
        terms = []
        for k, c in enumerate(self.coefficients()):
            if not c:
                continue
            if k == 0:
                terms.append(format_qq(c))
                continue
            base = f"E({self.order})" if k == 1 else f"E({self.order})^{k}"
            if c == QQ.one:
                terms.append(base)
            elif c == -QQ.one:
                terms.append(f"-{base}")
            else:
                terms.append(f"{format_qq(c)}*{base}")
        return "+".join(terms).replace("+-", "-")

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self})"


ZERO = CyclotomicNumber([], 1)
ONE = CyclotomicNumber([QQ.one], 1)


# ==================== 矩阵（列表的列表） ====================

CycMatrix = List[List[CyclotomicNumber]]


def mat_identity(n: int) -> CycMatrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"矩阵形状不匹配: {len(a)}x{len(a[0])} · {len(b)}x{len(b[0])}")
    inner = len(b)
    cols = len(b[0]) if b else 0
    result = []
    for row in a:
        out = []
        for j in range(cols):
            total = ZERO
            for k in range(inner):
                if row[k] and b[k][j]:
                    total = total + row[k] * b[k][j]
            out.append(total)
        result.append(out)
    return result


def mat_trace(a: CycMatrix) -> CyclotomicNumber:
    total = ZERO
    for i, row in enumerate(a):
        total = total + row[i]
    return total


def mat_equal(a: CycMatrix, b: CycMatrix) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_block_sum(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    """直和 diag(a, b)"""
    n, m = len(a), len(b)
    top = [list(row) + [ZERO] * m for row in a]
    bottom = [[ZERO] * n + list(row) for row in b]
    return top + bottom


def mat_from_json(rows, order: int) -> CycMatrix:
    return [[CyclotomicNumber.from_json(v, order) for v in row] for row in rows]


def mat_to_json(a: CycMatrix) -> List[List[str]]:
    return [[str(v) for v in row] for row in a]
