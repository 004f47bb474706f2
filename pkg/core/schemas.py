"""
输入格式与机器可读报告的 Schema 定义 - Pydantic 模型

报告统一包在 RunReport 里，按排序键 + 固定缩进序列化；所有精确标量都以字符串给出，
保证同样的输入得到逐字节相同的报告。
"""

import json
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from config.config import REPORT_SCHEMA_VERSION

# 标量: 整数 / "a/b" / 分圆系数列表 [c0, c1, …]
Scalar = Union[int, str, List[Union[int, str]]]


# ==================== 输入格式 ====================

class GroupSpec(BaseModel):
    """群输入: {"points": N, "generators": [[images...], ...]}"""
    points: int = Field(ge=1, description="被作用集合的点数")
    generators: List[List[int]] = Field(default_factory=list, description="0-based 像数组形式的生成元")
    name: Optional[str] = Field(default=None, description="群名称")


class OrientationSpec(BaseModel):
    """定向: 键为逗号分隔的顶点（如 "0,1,2"），值为 ±1"""
    top_signs: Dict[str, int] = Field(description="顶维单形 -> 符号")
    vertex_order: Optional[List[int]] = Field(default=None, description="符号所依据的顶点全序，缺省为升序")


class SpaceSpec(BaseModel):
    """复形输入: {"vertices": N, "simplices": [...], "action": {"gen0": [...]}, "orientation": {...}}"""
    vertices: int = Field(ge=0, description="顶点数（顶点为 0..N-1）")
    simplices: List[List[int]] = Field(default_factory=list, description="单形列表，自动补全面")
    action: Dict[str, List[int]] = Field(default_factory=dict, description="gen<k> -> 第 k 个生成元的顶点像")
    orientation: Optional[OrientationSpec] = Field(default=None, description="底复形定向")
    fixed_orientations: Dict[str, OrientationSpec] = Field(
        default_factory=dict, description="元素 id -> 不动点子复形的定向"
    )
    group: Optional[GroupSpec] = Field(default=None, description="内嵌的群（未给 --group 时使用）")
    name: Optional[str] = Field(default=None, description="空间名称")


class BundleSpec(BaseModel):
    """平坦等变丛输入: {"fiber_dim": n, "rho": {"g_id": {"v_id": [[...]]}}}"""
    fiber_dim: int = Field(ge=1, description="纤维维数")
    rho: Dict[str, Dict[str, List[List[Scalar]]]] = Field(
        default_factory=dict, description="元素 id -> 顶点 id -> 矩阵（至少给出全部生成元）"
    )
    order: Optional[int] = Field(default=None, ge=1, description="分圆域阶 N，缺省为群的 exponent")
    name: Optional[str] = Field(default=None, description="丛名称")


# ==================== 报告 ====================

class ValidationReport(BaseModel):
    """G-复形 / 丛的校验报告"""
    valid: bool = Field(description="是否全部通过")
    checks: Dict[str, bool] = Field(default_factory=dict, description="各项检查结果")
    violations: List[str] = Field(default_factory=list, description="违例列表（带见证）")


class ClassInfo(BaseModel):
    """共轭类摘要"""
    representative: int = Field(description="代表元（最小 id）")
    size: int = Field(description="类的大小")
    centralizer_order: int = Field(description="|Γ_g|")
    element_order: int = Field(description="ord(g)")


class GroupReport(BaseModel):
    """hp-group 报告"""
    order: int
    exponent: int
    classes: List[ClassInfo]
    hp_even: int
    hp_odd: int
    hh0_oracle: Optional[int] = Field(default=None, description="群代数 HH0 oracle（超上限时为空）")
    agreement: bool


class CohomologyReport(BaseModel):
    """cohomology 报告：双复形与两个 oracle 的逐次比较"""
    space: str
    total: Dict[str, int] = Field(description="次数 -> dim H^n(M ⋊ G)")
    invariant_oracle: Dict[str, int]
    quotient_oracle: Dict[str, int]
    agreement: bool


class DelocComponent(BaseModel):
    """一个共轭类对应的分量"""
    representative: int
    centralizer_order: int
    fixed_f_vector: List[int]
    dims: List[int] = Field(description="dim H^k(M_g ⋊ Γ_g), k = 0..dim M_g")


class DelocReport(BaseModel):
    """deloc 报告"""
    space: str
    components: List[DelocComponent]
    even: int
    odd: int
    hh0_groupoid_oracle: Optional[int] = Field(default=None, description="0 维空间时的群胚代数 oracle")
    agreement: bool = True


class GramBlock(BaseModel):
    """某个共轭类、某个次数上的配对 Gram 矩阵"""
    representative: int
    degree: int
    dimension: int
    gram: List[List[str]]
    rank: int
    perfect: bool


class PairingReport(BaseModel):
    """pairing 报告"""
    space: str
    blocks: List[GramBlock]
    skipped: Dict[str, str] = Field(default_factory=dict, description="代表元 -> 跳过原因")
    perfect: bool


class IndexReport(BaseModel):
    """指标配对的两侧"""
    name: str
    class_rep: int
    lhs: str = Field(description="assembly 侧: 特征标在类代表元处的值")
    rhs: str = Field(description="delocalized 不动点侧")
    equal: bool


class AssemblyFailure(BaseModel):
    name: str
    witness: str


class AssemblyCheckReport(BaseModel):
    """chern_assembly_check 汇总"""
    total: int
    passed: int
    failures: List[AssemblyFailure] = Field(default_factory=list)
    entries: List[IndexReport] = Field(default_factory=list)


class FunctorialityReport(BaseModel):
    """(g∘f)_! == g_!∘f_! 检查"""
    name: str
    equal: bool
    checked: int = Field(description="检查过的基类个数")
    discrepancies: List[str] = Field(default_factory=list)
    skipped: Dict[str, str] = Field(default_factory=dict)


class UmkehrReport(BaseModel):
    """umkehr 报告"""
    name: str
    degree_shifts: Dict[str, int] = Field(description="代表元 -> 分量维数差")
    parity_mismatch: bool = Field(description="各分量维数差的奇偶是否不一致")
    skipped: Dict[str, str] = Field(default_factory=dict)
    functoriality: List[FunctorialityReport] = Field(default_factory=list)
    projection_formula: bool = True
    cycle_equivalence: bool = True


class UmkehrBatchReport(BaseModel):
    """umkehr 命令: 每个可复合映射对一份报告"""
    pairs: List[UmkehrReport]


class DncReport(BaseModel):
    """dnc-check 报告"""
    samples: int
    seed: int
    residuals: Dict[str, float] = Field(description="检查名 -> 最大残差")
    tolerances: Dict[str, float]
    passed: bool


class RunReport(BaseModel):
    """一次 CLI 运行的机器可读报告"""
    schema_version: str = Field(default=REPORT_SCHEMA_VERSION)
    command: str
    ok: bool
    payload: Dict[str, Any] = Field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
