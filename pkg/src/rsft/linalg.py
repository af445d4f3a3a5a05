"""Exact linear algebra over Q with deterministic pivoting.

Matrices are dense lists of Fraction rows (desk-scale sizes).  Pivoting is
"first nonzero in column order", so solutions and kernels are reproducible
functions of the basis ordering, which callers fix canonically.
"""

from fractions import Fraction


def _rref(mat, ncols):
    """Reduced row echelon form in place; returns list of pivot columns."""
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        if pv != 1:
            mat[row] = [x / pv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    return pivots


def rank(mat):
    if not mat or not mat[0]:
        return 0
    work = [list(row) for row in mat]
    return len(_rref(work, len(mat[0])))


def solve(mat, rhs):
    """One exact solution of mat @ x = rhs, or None.

    Free variables are set to zero; with the fixed pivot rule the result is
    deterministic in the given column order.
    """
    m = len(mat)
    n = len(mat[0]) if mat else 0
    work = [list(mat[i]) + [rhs[i]] for i in range(m)]
    pivots = _rref(work, n)
    # inconsistent if a zero row has nonzero augment
    for row in work:
        if all(x == 0 for x in row[:n]) and row[n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = work[r][n]
    return x


def kernel_basis(mat, ncols):
    """Basis of the null space, one vector per free column, deterministic."""
    work = [list(row) for row in mat] if mat else []
    pivots = _rref(work, ncols) if work else []
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -work[r][fc]
        basis.append(v)
    return basis
