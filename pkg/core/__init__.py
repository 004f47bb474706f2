"""
核心计算模块

    grp        有限置换群、共轭类、HP*(ℚG) 的 Burghelea 分解
    gspace     单纯 G-复形、不动点子复形、商复形
    nervecoh   作用群胚神经的双复形与等变上同调
    deloc      inertia 分解、delocalized 上同调、Tu–Xu 迹
    pushpair   cup/cap、Poincaré 配对、umkehr 映射
    assembly   平坦等变丛、delocalized Chern 特征与指标配对
    dnc        法锥形变的坐标卡与函子（浮点）
"""
from .exceptions import DelocError
from .grp import FiniteGroup, burghelea_hp, group_from_permutations
from .gspace import GComplex, SimplicialComplex, fixed_subcomplex
from .nervecoh import total_cohomology
from .deloc import DelocClass, deloc_cohomology, tuxu_trace
from .pushpair import SimplicialGMap, pd_pairing, umkehr, check_functoriality
from .assembly import FlatEquivBundle, deloc_chern, euler_assembly, index_pairing, chern_assembly_check
from .dnc import DncPoint, SmoothPairMap, dnc_map, psi, psi_inv, check_dnc_functoriality

__all__ = [
    "DelocError",
    "FiniteGroup",
    "burghelea_hp",
    "group_from_permutations",
    "GComplex",
    "SimplicialComplex",
    "fixed_subcomplex",
    "total_cohomology",
    "DelocClass",
    "deloc_cohomology",
    "tuxu_trace",
    "SimplicialGMap",
    "pd_pairing",
    "umkehr",
    "check_functoriality",
    "FlatEquivBundle",
    "deloc_chern",
    "euler_assembly",
    "index_pairing",
    "chern_assembly_check",
    "DncPoint",
    "SmoothPairMap",
    "dnc_map",
    "psi",
    "psi_inv",
    "check_dnc_functoriality",
]
