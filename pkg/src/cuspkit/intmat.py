"""Exact integer matrix utilities: Smith normal form with transforms.

Everything runs over Python ints, so torsion orders and determinants can be
arbitrarily large without overflow.  Matrices are lists of lists of ints.
"""


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                row = out[i]
                for j in range(m):
                    row[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def vec_mat(v, a):
    m = len(a[0]) if a else 0
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(m)]


def det(matrix):
    """Determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(matrix, rows=None, cols=None):
    """Diagonalize an integer matrix: returns (d, U, V) with U*A*V = D,
    U and V unimodular, D diagonal with d[i] | d[i+1] and d[i] >= 0.

    `d` is the list of diagonal entries (length min(rows, cols)).
    """
    a = [row[:] for row in matrix]
    n = rows if rows is not None else len(a)
    m = cols if cols is not None else (len(a[0]) if a else 0)
    for row in a:
        if len(row) != m:
            raise ValueError("ragged matrix")
    u = identity_matrix(n)
    v = identity_matrix(m)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        for j in range(m):
            a[dst][j] += c * a[src][j]
        for j in range(n):
            u[dst][j] += c * u[src][j]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(n, m)
    while t < limit:
        # find a pivot: nonzero entry of smallest absolute value in the
        # remaining block
        pivot = None
        best = None
        for i in range(t, n):
            for j in range(t, m):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        # clear row and column t by repeated reduction
        while True:
            dirty = False
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] < 0:
            negate_row(t)
        # enforce divisibility: if some later entry is not divisible by the
        # pivot, mix its row in and redo this position
        redo = False
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % a[t][t] != 0:
                    add_row(i, t, 1)
                    redo = True
                    break
            if redo:
                break
        if not redo:
            t += 1

    d = [a[i][i] for i in range(limit)]
    return d, u, v


def invariant_factors(matrix, cols):
    """Nontrivial invariant factors (> 1) and the free rank of Z^cols modulo
    the row span of `matrix` (rows are relator exponent vectors)."""
    if not matrix:
        return [], cols
    d, _, _ = smith_normal_form(matrix, rows=len(matrix), cols=cols)
    nonzero = [x for x in d if x != 0]
    torsion = [x for x in nonzero if x > 1]
    rank = cols - len(nonzero)
    return torsion, rank


def solve_in_row_span(matrix, vector):
    """Is `vector` an integer combination of the rows of `matrix`?"""
    if not matrix:
        return all(x == 0 for x in vector)
    cols = len(vector)
    d, _, v = smith_normal_form(matrix, rows=len(matrix), cols=cols)
    w = vec_mat(list(vector), v)
    for i, x in enumerate(w):
        if i < len(d) and d[i] != 0:
            if x % d[i] != 0:
                return False
        elif x != 0:
            return False
    return True


def mat_inverse_unimodular(matrix):
    """Inverse of a unimodular integer matrix (det +-1), exact."""
    n = len(matrix)
    d, u, v = smith_normal_form(matrix)
    if any(x != 1 for x in d) or len(d) != n:
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^-1 = V U
    return mat_mul(v, u)
