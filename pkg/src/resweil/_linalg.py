"""Exact Gaussian elimination over a field of FieldElement entries.

Matrices are lists of row lists.  Pivoting always takes the first
nonzero entry, so every routine is deterministic.
"""


def rref(matrix, field):
    """Row-reduce a copy of the matrix; returns (rows, pivot column list)."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(matrix, field):
    if not matrix:
        return 0
    _, pivots = rref(matrix, field)
    return len(pivots)


def kernel_basis(matrix, field):
    """Basis of the right kernel, one vector per free column."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def solve(matrix, rhs, field):
    """One solution of M x = rhs, or None when inconsistent."""
    nrows = len(matrix)
    if nrows == 0:
        return [] if all(b.is_zero() for b in rhs) else None
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, field)
    for row in rows:
        if all(x.is_zero() for x in row[:ncols]) and not row[ncols].is_zero():
            return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = rows[r][ncols]
    return x


def invert(matrix, field):
    """Inverse of a square matrix, or None when singular."""
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in rows[:n]]


def mat_mul(a, b, field):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x.is_zero():
                continue
            brow = b[t]
            orow = out[i]
            for j in range(m):
                orow[j] = orow[j] + x * brow[j]
    return out


def mat_vec(a, v, field):
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return out


def identity(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
