"""
法锥形变（DNC）的局部坐标与函子

对子流形对 (ℝⁿ, ℝᵖ)，n = p + q，DNC 的坐标点为 (x, ξ, t):
    psi(x, ξ, t) = (x, tξ, t)      t ≠ 0
    psi(x, ξ, 0) = (x, ξ, 0)       t = 0 时是法丛的点
保持子流形对的光滑映射 F 诱导
    D(F)(x, ξ, t) = psi⁻¹(F(psi(x, ξ, t)), t)       t ≠ 0
    D(F)(x, ξ, 0) = (F(x, 0)_x, d_N F_x(ξ), 0)       d_N F 为 Jacobian 的法向块

这是数值模块（binary64），Jacobian 缺省用步长 h 的中心差分。
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from loguru import logger

from config.config import get_dnc_config
from core.exceptions import PairNotPreserved
from core.schemas import DncReport


@dataclass(frozen=True)
class DncPoint:
    """(x, ξ, t)，x ∈ ℝᵖ, ξ ∈ ℝ^q"""
    x: np.ndarray
    xi: np.ndarray
    t: float

    @classmethod
    def of(cls, x: Sequence[float], xi: Sequence[float], t: float) -> "DncPoint":
        return cls(np.asarray(x, dtype=float), np.asarray(xi, dtype=float), float(t))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi, [self.t]])

    def distance(self, other: "DncPoint") -> float:
        return float(np.max(np.abs(self.vector() - other.vector())))


def psi(point: DncPoint) -> DncPoint:
    """DNC 坐标 -> 环境坐标 (x, tξ, t)；t = 0 时不变"""
    if point.t == 0:
        return point
    return DncPoint(point.x, point.t * point.xi, point.t)


def psi_inv(point: DncPoint) -> DncPoint:
    """环境坐标 (x, y, t) -> DNC 坐标 (x, y/t, t)"""
    if point.t == 0:
        return point
    return DncPoint(point.x, point.xi / point.t, point.t)


@dataclass
class SmoothPairMap:
    """
    保持子流形对的光滑映射 F: (ℝ^(p+q), ℝᵖ) -> (ℝ^(p'+q'), ℝ^p')

    Attributes:
        f: ℝⁿ -> ℝ^n' 的向量函数
        p, q: 源的子流形维数与法向维数
        p_out, q_out: 靶的对应维数
        jacobian: 解析 Jacobian（可选），缺省用中心差分

    Raises:
        PairNotPreserved: 抽样发现 F(ℝᵖ × 0) 不落在 ℝ^p' × 0 中
    """
    f: Callable[[np.ndarray], np.ndarray]
    p: int
    q: int
    p_out: int
    q_out: int
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "F"
    check_samples: Optional[int] = None

    def __post_init__(self):
        config = get_dnc_config()
        samples = self.check_samples if self.check_samples is not None else config["pair_samples"]
        rng = np.random.default_rng(0)
        for _ in range(samples):
            x = rng.uniform(-1.0, 1.0, self.p)
            image = self(np.concatenate([x, np.zeros(self.q)]))
            normal = image[self.p_out:]
            if normal.size and np.max(np.abs(normal)) > config["pair_tolerance"]:
                raise PairNotPreserved(f"{self.name}: F({x.tolist()}, 0) 的法向分量 {normal.tolist()} 不为零")

    @property
    def analytic(self) -> bool:
        return self.jacobian is not None

    def __call__(self, m: np.ndarray) -> np.ndarray:
        value = np.asarray(self.f(np.asarray(m, dtype=float)), dtype=float)
        if value.shape != (self.p_out + self.q_out,):
            raise ValueError(f"{self.name}: 输出维数 {value.shape} 与 {self.p_out + self.q_out} 不符")
        return value

    def jacobian_at(self, m: np.ndarray, step: Optional[float] = None) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        if self.jacobian is not None:
            return np.asarray(self.jacobian(m), dtype=float)
        return finite_difference_jacobian(self, m, step)


def finite_difference_jacobian(F: Callable[[np.ndarray], np.ndarray], m: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """中心差分 (F(m + h e_j) - F(m - h e_j)) / 2h"""
    h = step if step is not None else get_dnc_config()["fd_step"]
    columns = []
    for j in range(m.size):
        e = np.zeros(m.size)
        e[j] = h
        columns.append((F(m + e) - F(m - e)) / (2 * h))
    return np.column_stack(columns)


def dnc_map(F: SmoothPairMap, point: DncPoint) -> DncPoint:
    """
    D(F) 在一个 DNC 点上的值

    Raises:
        ValueError: 点的维数与 F 不符
    """
    if point.x.size != F.p or point.xi.size != F.q:
        raise ValueError(f"{F.name}: 点的维数 ({point.x.size}, {point.xi.size}) 与 ({F.p}, {F.q}) 不符")
    if point.t != 0:
        ambient = psi(point)
        image = F(np.concatenate([ambient.x, ambient.xi]))
        return psi_inv(DncPoint(image[:F.p_out], image[F.p_out:], point.t))
    base = np.concatenate([point.x, np.zeros(F.q)])
    image = F(base)
    normal_block = F.jacobian_at(base)[F.p_out:, F.p:]
    return DncPoint(image[:F.p_out], normal_block @ point.xi, 0.0)


def compose(F: SmoothPairMap, G: SmoothPairMap) -> SmoothPairMap:
    """G∘F（两者都有解析 Jacobian 时用链式法则）"""
    if (F.p_out, F.q_out) != (G.p, G.q):
        raise ValueError(f"{F.name} 的靶 ({F.p_out}, {F.q_out}) 与 {G.name} 的源 ({G.p}, {G.q}) 不符")
    jacobian = None
    if F.analytic and G.analytic:
        def jacobian(m: np.ndarray) -> np.ndarray:
            return G.jacobian_at(F(m)) @ F.jacobian_at(m)
    return SmoothPairMap(
        f=lambda m: G(F(m)),
        p=F.p, q=F.q, p_out=G.p_out, q_out=G.q_out,
        jacobian=jacobian,
        name=f"{G.name}∘{F.name}",
    )


def linear_pair_map(A: Sequence[Sequence[float]], p: int, p_out: int, name: str = "A") -> SmoothPairMap:
    """
    线性映射 m ↦ A m，要求 A 的 (法向, 切向) 块为零

    Raises:
        PairNotPreserved: A[p_out:, :p] ≠ 0
    """
    A = np.asarray(A, dtype=float)
    n_out, n = A.shape
    if np.any(A[p_out:, :p] != 0):
        raise PairNotPreserved(f"{name}: 矩阵的法向-切向块不为零")
    return SmoothPairMap(
        f=lambda m: A @ m,
        p=p, q=n - p, p_out=p_out, q_out=n_out - p_out,
        jacobian=lambda m: A,
        name=name,
    )


def identity_pair_map(p: int, q: int) -> SmoothPairMap:
    return linear_pair_map(np.eye(p + q), p, p, name="id")


# ==================== 检查 ====================

def sample_points(p: int, q: int, samples: int, rng: np.random.Generator, zero_fraction: float = 0.25) -> list:
    """x, ξ ~ U(-1, 1)；约 zero_fraction 的点取 t = 0，其余 t ~ U(1e-3, 1)"""
    points = []
    for _ in range(samples):
        x = rng.uniform(-1.0, 1.0, p)
        xi = rng.uniform(-1.0, 1.0, q)
        t = 0.0 if rng.random() < zero_fraction else float(rng.uniform(1e-3, 1.0))
        points.append(DncPoint(x, xi, t))
    return points


def check_psi_roundtrip(p: int, q: int, samples: int, seed: int) -> float:
    """max |psi_inv(psi(P)) - P| 与 max |psi(psi_inv(P)) - P|"""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for point in sample_points(p, q, samples, rng):
        worst = max(worst, psi_inv(psi(point)).distance(point), psi(psi_inv(point)).distance(point))
    return worst


@dataclass
class DncCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def check_dnc_functoriality(
    F: SmoothPairMap,
    G: SmoothPairMap,
    samples: Optional[int] = None,
    seed: int = 0,
) -> DncCheck:
    """
    max |D(G∘F)(P) - D(G)(D(F)(P))|，容差按是否有解析 Jacobian 取 1e-12 或 1e-8（不抛异常）
    """
    config = get_dnc_config()
    samples = samples if samples is not None else config["samples"]
    GF = compose(F, G)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for point in sample_points(F.p, F.q, samples, rng):
        direct = dnc_map(GF, point)
        stepwise = dnc_map(G, dnc_map(F, point))
        worst = max(worst, direct.distance(stepwise))
    tolerance = config["analytic_tolerance"] if GF.analytic else config["fd_tolerance"]
    check = DncCheck(name=f"functoriality[{GF.name}]", residual=worst, tolerance=tolerance)
    logger.debug(f"[dnc] {check.name}: residual={worst:.3e}, tol={tolerance:.0e}")
    return check


def check_dnc_continuity(
    F: SmoothPairMap,
    points: Optional[Sequence[DncPoint]] = None,
    ts: Optional[Sequence[float]] = None,
    samples: int = 100,
    seed: int = 0,
) -> DncCheck:
    """
    t -> 0 连续性: 用最小的两个 t 做线性外推到 0，与 t = 0 分支比较
    """
    config = get_dnc_config()
    ts = sorted(ts if ts is not None else config["continuity_ts"], reverse=True)
    if len(ts) < 2:
        raise ValueError("至少需要两个 t 值")
    if points is None:
        rng = np.random.default_rng(seed)
        points = [DncPoint(rng.uniform(-1.0, 1.0, F.p), rng.uniform(-1.0, 1.0, F.q), 0.0) for _ in range(samples)]
    t1, t2 = ts[-2], ts[-1]
    worst = 0.0
    for point in points:
        limit = dnc_map(F, DncPoint(point.x, point.xi, 0.0)).vector()[:-1]
        v1 = dnc_map(F, DncPoint(point.x, point.xi, t1)).vector()[:-1]
        v2 = dnc_map(F, DncPoint(point.x, point.xi, t2)).vector()[:-1]
        extrapolated = v2 - t2 * (v1 - v2) / (t1 - t2)
        worst = max(worst, float(np.max(np.abs(extrapolated - limit))))
    check = DncCheck(name=f"continuity[{F.name}]", residual=worst, tolerance=config["continuity_tolerance"])
    logger.debug(f"[dnc] {check.name}: residual={worst:.3e}")
    return check


# ==================== 内置样例 ====================

def cubic_fiber_map() -> SmoothPairMap:
    """F(x, y) = (x, y + y³)"""
    return SmoothPairMap(lambda m: np.array([m[0], m[1] + m[1] ** 3]), p=1, q=1, p_out=1, q_out=1, name="F")


def polynomial_pair_map() -> SmoothPairMap:
    """G(x, y) = (x³ + x + y², y(1 + x))"""
    return SmoothPairMap(
        lambda m: np.array([m[0] ** 3 + m[0] + m[1] ** 2, m[1] * (1 + m[0])]),
        p=1, q=1, p_out=1, q_out=1, name="G",
    )


def run_dnc_suite(samples: Optional[int] = None, seed: Optional[int] = None) -> DncReport:
    """dnc-check 命令使用的整套数值检查"""
    config = get_dnc_config()
    samples = samples if samples is not None else config["samples"]
    seed = seed if seed is not None else 0

    A = linear_pair_map([[2.0, 1.0, 0.5], [0.0, 3.0, -1.0], [0.0, 0.5, 1.5]], p=1, p_out=1, name="A")
    B = linear_pair_map([[1.0, -2.0, 0.0], [0.0, 1.0, 2.0], [0.0, 0.0, 0.5]], p=1, p_out=1, name="B")
    checks = [
        check_dnc_functoriality(A, B, samples, seed),
        check_dnc_functoriality(cubic_fiber_map(), polynomial_pair_map(), samples, seed),
        check_dnc_continuity(cubic_fiber_map(), seed=seed),
        check_dnc_continuity(polynomial_pair_map(), seed=seed),
    ]
    residuals: Dict[str, float] = {
        "roundtrip": check_psi_roundtrip(2, 2, config["roundtrip_samples"], seed),
    }
    tolerances: Dict[str, float] = {"roundtrip": 1e-12}
    for check in checks:
        residuals[check.name] = check.residual
        tolerances[check.name] = check.tolerance
    passed = all(residuals[k] <= tolerances[k] for k in residuals)
    logger.info(f"[dnc] 数值检查 passed={passed}")
    return DncReport(samples=samples, seed=seed, residuals=residuals, tolerances=tolerances, passed=passed)
