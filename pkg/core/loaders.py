"""
输入文件加载：JSON -> pydantic Schema -> 库对象

格式错误一律转成 InputError；合法格式下的数学错误（非双射生成元等）保留各自的 DelocError 子类。
"""

import json
from pathlib import Path
from typing import Optional, Type, TypeVar, Union

from loguru import logger
from pydantic import BaseModel, ValidationError

from core.assembly import FlatEquivBundle, bundle_from_generators
from core.cyclotomic import mat_from_json
from core.exceptions import InputError
from core.grp import FiniteGroup, group_from_permutations, trivial_group
from core.gspace import (
    GComplex,
    Orientation,
    SimplicialComplex,
    gcomplex_from_generators,
    permutation_sign,
    validate_gcomplex,
)
from core.schemas import BundleSpec, GroupSpec, OrientationSpec, SpaceSpec

SpecT = TypeVar("SpecT", bound=BaseModel)
PathLike = Union[str, Path]


def read_spec(path: PathLike, model: Type[SpecT]) -> SpecT:
    """
    读取并校验一个 JSON 输入文件

    Raises:
        InputError: 文件不存在、不是合法 JSON 或不符合 Schema
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"文件不存在: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: JSON 解析失败: {exc}") from None
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise InputError(f"{path}: 不符合 {model.__name__} 格式: {exc}") from None


# ==================== 群 ====================

def build_group(spec: GroupSpec) -> FiniteGroup:
    if not spec.generators:
        return trivial_group() if spec.points == 1 else group_from_permutations([], points=spec.points)
    return group_from_permutations(spec.generators, points=spec.points)


def load_group(path: PathLike) -> FiniteGroup:
    group = build_group(read_spec(path, GroupSpec))
    logger.info(f"[loaders] 群 {Path(path).name}: 阶 {group.order}")
    return group


# ==================== 空间 ====================

def _parse_key(key: str) -> tuple:
    try:
        return tuple(int(v) for v in key.split(","))
    except ValueError:
        raise InputError(f"非法单形键: {key!r}（应为逗号分隔的顶点）") from None


def build_orientation(spec: OrientationSpec) -> Orientation:
    """键按书写顺序理解为有序单形，换算成升序单形上的符号"""
    signs = {}
    for key, sign in spec.top_signs.items():
        if sign not in (1, -1):
            raise InputError(f"定向符号必须为 ±1: {key} -> {sign}")
        ordered = _parse_key(key)
        signs[tuple(sorted(ordered))] = sign * permutation_sign(ordered)
    vertex_order = tuple(spec.vertex_order) if spec.vertex_order is not None else None
    return Orientation(signs, vertex_order)


def _int_key(key: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise InputError(f"键应为整数 id: {key!r}") from None


def _generator_index(name: str) -> int:
    if not name.startswith("gen") or not name[3:].isdigit():
        raise InputError(f"作用的键应为 gen<k>: {name!r}")
    return int(name[3:])


def build_space(spec: SpaceSpec, group: Optional[FiniteGroup] = None, name: str = "space") -> GComplex:
    """
    Raises:
        InputError: 顶点越界、缺少群、作用不是单纯同态
    """
    if group is None:
        group = build_group(spec.group) if spec.group is not None else trivial_group()
    for simplex in spec.simplices:
        if any(not 0 <= v < spec.vertices for v in simplex):
            raise InputError(f"单形 {simplex} 的顶点超出 0..{spec.vertices - 1}")
    K = SimplicialComplex(range(spec.vertices), spec.simplices)

    images = [None] * len(group.generators)
    for key, image in spec.action.items():
        k = _generator_index(key)
        if k >= len(images):
            raise InputError(f"{key}: 群只有 {len(images)} 个生成元")
        images[k] = image
    if any(image is None for image in images):
        if spec.action:
            raise InputError("作用必须给出每个生成元的顶点像")
        images = [list(range(spec.vertices)) for _ in images]

    orientation = build_orientation(spec.orientation) if spec.orientation is not None else None
    try:
        space = gcomplex_from_generators(K, group, images, orientation, name=spec.name or name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for key, o in spec.fixed_orientations.items():
        space.fixed_orientations[group.check(_int_key(key))] = build_orientation(o)

    report = validate_gcomplex(space)
    if not (report.checks["homomorphism"] and report.checks["simplicial"]):
        raise InputError(f"{space.name}: 作用非法: {report.violations[0]}")
    return space


def load_space(path: PathLike, group: Optional[FiniteGroup] = None) -> GComplex:
    space = build_space(read_spec(path, SpaceSpec), group, name=Path(path).stem)
    logger.info(f"[loaders] 空间 {space.name}: f={space.complex.f_vector()}, |G|={space.group.order}")
    return space


# ==================== 丛 ====================

def build_bundle(spec: BundleSpec, space: GComplex, name: str = "bundle") -> FlatEquivBundle:
    """
    Raises:
        InputError: 元素或顶点 id 非法，矩阵阶数与 fiber_dim 不符
    """
    G = space.group
    order = spec.order or G.exponent
    given = {}
    for g_key, per_vertex in spec.rho.items():
        g = G.check(_int_key(g_key))
        given[g] = {}
        for v_key, rows in per_vertex.items():
            v = _int_key(v_key)
            if v not in space.complex.vertices:
                raise InputError(f"rho[{g_key}]: 顶点 {v} 不在底空间中")
            if len(rows) != spec.fiber_dim or any(len(row) != spec.fiber_dim for row in rows):
                raise InputError(f"rho[{g_key}][{v_key}] 不是 {spec.fiber_dim} 阶方阵")
            try:
                given[g][v] = mat_from_json(rows, order)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise InputError(f"rho[{g_key}][{v_key}]: 非法标量: {exc}") from None
    return bundle_from_generators(space, spec.fiber_dim, given, order, name=spec.name or name)


def load_bundle(path: PathLike, space: GComplex) -> FlatEquivBundle:
    bundle = build_bundle(read_spec(path, BundleSpec), space, name=Path(path).stem)
    logger.info(f"[loaders] 丛 {bundle.name}: 秩 {bundle.fiber_dim}, N={bundle.order}")
    return bundle
