"""
配置管理模块
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

# 项目根目录
ROOT_DIR = Path(__file__).parent.parent

# 目录配置
DATA_DIR = ROOT_DIR / "data"
OUTPUT_DIR = ROOT_DIR / "output"
LOG_DIR = ROOT_DIR / "logs"

# 日志配置
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# 机器可读报告的 schema 版本（报告逐字节比对，改格式必须升版本）
REPORT_SCHEMA_VERSION = "1.0"


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return int(value)


# 枚举上限配置
CAP_CONFIG = {
    "closure_cap": _int_env("DELOC_CAP", 10**6),             # 置换群闭包元素上限
    "hh0_group_cap": _int_env("DELOC_HH0_CAP", 500),         # 群代数 HH0 oracle 的 |G| 上限
    "groupoid_arrow_cap": _int_env("DELOC_GROUPOID_CAP", 2000),  # 群胚代数 oracle 的箭头数上限
}

# 法锥形变（DNC）数值配置
DNC_CONFIG = {
    "fd_step": 1e-6,               # 中心差分步长
    "pair_tolerance": 1e-9,        # 子流形保持性抽样容差
    "pair_samples": 16,            # 子流形保持性抽样点数
    "analytic_tolerance": 1e-12,   # 解析 Jacobian 下的函子性容差
    "fd_tolerance": 1e-8,          # 有限差分 Jacobian 下的函子性容差
    "continuity_tolerance": 1e-6,  # t -> 0 外推容差
    "continuity_ts": (1e-2, 1e-4, 1e-6),
    "samples": 1000,
    "roundtrip_samples": 10000,
}

# 运行时配置
RUNTIME_CONFIG = {
    "threads": _int_env("DELOC_THREADS", 1),
    "seed": _int_env("DELOC_SEED", 0),
}


def get_cap_config() -> dict:
    """获取枚举上限配置"""
    return CAP_CONFIG.copy()


def get_dnc_config() -> dict:
    """获取 DNC 数值配置"""
    return DNC_CONFIG.copy()


def get_runtime_config() -> dict:
    """获取运行时配置"""
    return RUNTIME_CONFIG.copy()
