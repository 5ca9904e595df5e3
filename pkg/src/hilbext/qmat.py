"""Exact matrix helpers over the rationals.

Matrices are lists of rows (or 2-d numpy arrays holding Python ints or
``Fraction`` objects).  Nothing here ever touches floating point.
"""

from fractions import Fraction
from math import lcm

import numpy as np

FLOAT_EXACT = 2**53
INT64_SAFE = 2**62


def to_rows(m):
    if isinstance(m, np.ndarray):
        return [[_exact(x) for x in row] for row in m.tolist()]
    return [[_exact(x) for x in row] for row in m]


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"inexact entry {x!r}")


def _integer_rows(rows):
    out = []
    for row in rows:
        den = lcm(*[x.denominator for x in row if isinstance(x, Fraction)] or [1])
        out.append([int(x * den) for x in row])
    return out


def rank(m):
    """Rank over Q by fraction-free (Bareiss) elimination."""
    rows = _integer_rows(to_rows(m))
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            f = rows[i][c]
            row_i, row_r = rows[i], rows[r]
            rows[i] = [(p * row_i[k] - f * row_r[k]) // prev for k in range(n_cols)]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def rref(m):
    """Reduced row echelon form and pivot columns, with Fraction entries."""
    rows = [[Fraction(x) for x in row] for row in to_rows(m)]
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def column_basis(m):
    """Columns of ``m`` forming a basis of its column space (as a list of column lists)."""
    rows = to_rows(m)
    if not rows:
        return []
    _, pivots = rref(rows)
    return [[rows[i][c] for i in range(len(rows))] for c in pivots]


def solve(basis_cols, target_cols):
    """Coordinates X with B X = Y for a full-column-rank B; raises if inconsistent."""
    k = len(basis_cols)
    if k == 0:
        for col in target_cols:
            if any(x != 0 for x in col):
                raise ValueError("vector not in the span of an empty basis")
        return [[] for _ in target_cols]
    dim = len(basis_cols[0])
    aug = [[basis_cols[j][i] for j in range(k)] + [col[i] for col in target_cols]
           for i in range(dim)]
    red, pivots = rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("basis is not linearly independent")
    for row in red[k:]:
        if any(x != 0 for x in row[k:]):
            raise ValueError("vector not in the span of the basis")
    # X[j][t] = red[j][k+t]
    return [[red[j][k + t] for j in range(k)] for t in range(len(target_cols))]


def matmul(a, b):
    """Exact product; int64 numpy when safe, Python objects otherwise."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype != object and b.dtype != object:
        bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * max(a.shape[-1], 1)
        if bound < FLOAT_EXACT:
            # every partial sum is an integer below 2^53, so BLAS in float64 is exact
            return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        if bound < INT64_SAFE:
            return a @ b
        a = a.astype(object)
        b = b.astype(object)
    return np.dot(a.astype(object), b.astype(object))


def identity(n):
    return np.eye(n, dtype=np.int64)


def is_zero(m):
    return all(x == 0 for row in to_rows(m) for x in row)
