"""
精确稀疏线性代数
"""
import pytest
from sympy.polys.domains import QQ

from core.linalg import (
    SparseRationalMatrix,
    combine,
    format_qq,
    independent_columns,
    nullspace,
    rank_q,
    solve,
    to_qq,
)


def test_to_qq_accepts_exact_inputs():
    assert to_qq(3) == QQ(3)
    assert to_qq("3/6") == QQ(1, 2)
    assert to_qq(QQ(-2, 7)) == QQ(-2, 7)
    with pytest.raises(TypeError):
        to_qq(0.5)


def test_format_qq():
    assert format_qq(QQ(4, 2)) == "2"
    assert format_qq(QQ(-1, 3)) == "-1/3"


def test_rank_small_matrices():
    assert rank_q(SparseRationalMatrix(2, 2, {0: {0: 1, 1: 2}, 1: {0: 2, 1: 4}})) == 1
    assert rank_q(SparseRationalMatrix.identity(3)) == 3
    assert rank_q(SparseRationalMatrix(4, 5)) == 0


def test_rank_with_fractions():
    matrix = SparseRationalMatrix(2, 2, {0: {0: "1/2", 1: "1/3"}, 1: {0: 3, 1: 2}})
    assert rank_q(matrix) == 1


def test_rank_independent_of_thread_count():
    entries = {0: {0: 1, 1: 1}, 1: {0: 1, 1: 1}, 2: {2: 1}, 3: {3: 2, 4: 1}, 4: {3: 4, 4: 2}}
    matrix = SparseRationalMatrix(5, 5, entries)
    assert rank_q(matrix, threads=1) == rank_q(matrix, threads=3) == 3


def test_nullspace_vectors_are_annihilated():
    matrix = SparseRationalMatrix(2, 3, {0: {0: 1, 1: 1}, 1: {1: 1, 2: -1}})
    basis = nullspace(matrix)
    assert len(basis) == 1
    assert matrix.matvec(basis[0]) == {}


def test_nullspace_of_zero_matrix_is_standard_basis():
    assert nullspace(SparseRationalMatrix(2, 3)) == [{0: QQ.one}, {1: QQ.one}, {2: QQ.one}]


def test_independent_columns_greedy():
    columns = [{0: QQ(1)}, {0: QQ(2)}, {1: QQ(1)}, {0: QQ(1), 1: QQ(1)}]
    assert independent_columns(2, columns) == [0, 2]


def test_solve_consistent_and_inconsistent():
    matrix = SparseRationalMatrix(2, 2, {0: {0: 1}, 1: {1: 2}})
    assert solve(matrix, {0: QQ(1), 1: QQ(4)}) == {0: QQ(1), 1: QQ(2)}

    column = SparseRationalMatrix(2, 1, {0: {0: 1}, 1: {0: 1}})
    assert solve(column, {0: QQ(1), 1: QQ(2)}) is None


def test_transpose_and_matmul():
    a = SparseRationalMatrix(2, 3, {0: {0: 1, 2: 2}, 1: {1: 3}})
    product = a.matmul(a.transpose())
    assert product == SparseRationalMatrix(2, 2, {0: {0: 5}, 1: {1: 9}})


def test_combine_drops_cancelled_entries():
    assert combine([(1, {0: QQ(1), 1: QQ(2)}), (-1, {0: QQ(1)})]) == {1: QQ(2)}
