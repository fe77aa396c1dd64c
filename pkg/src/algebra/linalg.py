"""
Exact linear algebra over GF(p) (numpy, coordinate level) and over GF(q) (field ops)
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np


def rref_mod_p(matrix, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(p) and the pivot columns"""
    A = np.array(matrix, dtype=np.int64) % p
    if A.ndim != 2:
        A = A.reshape((len(matrix), -1))
    rows, cols = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(A[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        if pivot_row != r:
            A[[r, pivot_row]] = A[[pivot_row, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace_mod_p(matrix, p: int) -> List[List[int]]:
    """Basis of {v : matrix @ v = 0} over GF(p), one vector per free column"""
    A, pivots = rref_mod_p(matrix, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = int(-A[row, f]) % p
        basis.append(v)
    return basis


def solve_mod_p(matrix, rhs: Sequence[int], p: int) -> Optional[List[int]]:
    """One solution of matrix @ x = rhs over GF(p), free variables set to zero"""
    A = np.array(matrix, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64).reshape((-1, 1)) % p
    R, pivots = rref_mod_p(np.hstack([A, b]), p)
    cols = A.shape[1]
    if cols in pivots:
        return None
    x = [0] * cols
    for row, c in enumerate(pivots):
        x[c] = int(R[row, cols])
    return x


def invert_matrix(ops, matrix: Sequence[Sequence[int]]) -> Optional[List[List[int]]]:
    """Gauss-Jordan inverse over GF(q); None when singular"""
    n = len(matrix)
    A = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if A[r][c] != 0), None)
        if pivot is None:
            return None
        A[c], A[pivot] = A[pivot], A[c]
        scale = ops.inv(A[c][c])
        A[c] = [ops.mul(scale, v) for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                factor = A[r][c]
                A[r] = [ops.sub(v, ops.mul(factor, w)) for v, w in zip(A[r], A[c])]
    return [row[n:] for row in A]
