from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hilbext import qmat

small_ints = st.integers(min_value=-3, max_value=3)


def test_rank_basic():
    assert qmat.rank([[1, 2], [2, 4]]) == 1
    assert qmat.rank([[0, 0], [0, 0]]) == 0
    assert qmat.rank([[Fraction(1, 2), 1], [1, 3]]) == 2
    assert qmat.rank([]) == 0


def test_rank_rejects_floats():
    with pytest.raises(TypeError):
        qmat.rank([[0.5, 1.0]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_rref(rows):
    _, pivots = qmat.rref(rows)
    assert qmat.rank(rows) == len(pivots)
    assert qmat.rank(rows) == qmat.rank([list(c) for c in zip(*rows)])


def test_solve_and_column_basis():
    basis = qmat.column_basis([[1, 2, 3], [0, 1, 1], [1, 3, 4]])
    assert len(basis) == 2
    coords = qmat.solve(basis, [[3, 1, 4]])
    assert coords == [[Fraction(1), Fraction(1)]]
    with pytest.raises(ValueError):
        qmat.solve(basis, [[1, 0, 0]])


def test_matmul_exact_paths():
    a = np.array([[2**20, 1], [0, 1]], dtype=np.int64)
    assert np.array_equal(qmat.matmul(a, a), np.array([[2**40, 2**20 + 1], [0, 1]]))
    big = np.array([[2**40]], dtype=np.int64)
    # product overflows int64, so the object path must take over
    assert qmat.matmul(big, big)[0, 0] == 2**80
    assert qmat.is_zero(qmat.matmul([[1, -1]], [[1], [1]]))
