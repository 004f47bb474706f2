"""
共享 fixture
"""
import sys
from pathlib import Path

import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from core import corpus
from core.grp import cyclic_group, dihedral_group, quaternion_group, symmetric_group, trivial_group
from core.gspace import SimplicialComplex, gcomplex_from_generators, point_space, polygon, simplex_boundary

DATA_DIR = project_root / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def small_groups():
    """(名称, 群, 共轭类个数)"""
    return [
        ("trivial", trivial_group(), 1),
        ("Z2", cyclic_group(2), 2),
        ("Z4", cyclic_group(4), 4),
        ("S3", symmetric_group(3), 3),
        ("Q8", quaternion_group(), 5),
    ]


@pytest.fixture
def square_reflection(z2):
    return corpus.square_reflection(z2)


@pytest.fixture
def square_rotation(z2):
    return corpus.square_rotation(z2)


@pytest.fixture
def circle():
    return corpus.circle(4)


@pytest.fixture
def point():
    return point_space(trivial_group())


@pytest.fixture
def nonregular_examples():
    """细分测试用的作用，除三角形边界上的 Z3 旋转外都不是 regular 的"""
    s3_gens = [[1, 0, 2], [1, 2, 0]]
    triangle, _ = simplex_boundary(1)
    square, _ = polygon(4)
    return [
        gcomplex_from_generators(SimplicialComplex([], [(0, 1)]), cyclic_group(2), [[1, 0]], name="edge_flip"),
        gcomplex_from_generators(triangle, cyclic_group(3), [[1, 2, 0]], name="triangle_Z3"),
        gcomplex_from_generators(triangle, symmetric_group(3), s3_gens, name="triangle_S3"),
        gcomplex_from_generators(SimplicialComplex([], [(0, 1, 2)]), symmetric_group(3), s3_gens, name="disk_S3"),
        gcomplex_from_generators(square, dihedral_group(4), [[1, 2, 3, 0], [0, 3, 2, 1]], name="square_D4"),
    ]
