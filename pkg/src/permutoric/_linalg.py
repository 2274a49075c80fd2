"""Exact linear algebra over the rationals and over integer lattices.

All matrices here are small (desk-scale instances stay well below a few
hundred rows), so dense fraction arithmetic and fraction-free integer
elimination are plenty fast.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def rref(rows):
    """Reduced row echelon form over Q.

    `rows` is a list of equal-length lists; entries are coerced to Fraction.
    Returns (reduced_rows, pivot_columns).  Input is not modified.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def solve(rows, rhs):
    """One solution of A x = b over Q, or None if inconsistent.

    Free variables are set to 0.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    return x


def nullspace(rows, ncols):
    """Basis of the right null space {x : A x = 0} over Q."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def bareiss_det(mat):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(rows, ncols):
    """Z-basis of {x in Z^ncols : A x = 0} for an integer matrix A.

    Column reduction with unimodular column operations; the kernel of an
    integer matrix is saturated, so the returned basis spans the full
    lattice of integer solutions.
    """
    a = [list(map(int, row)) for row in rows]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def colop(j1, j2, p, q, r, s):
        # (col j1, col j2) <- (p*col j1 + q*col j2, r*col j1 + s*col j2)
        for m in (a, u):
            for row in m:
                c1, c2 = row[j1], row[j2]
                row[j1] = p * c1 + q * c2
                row[j2] = r * c1 + s * c2

    pivot_col = 0
    for i in range(len(a)):
        if pivot_col >= ncols:
            break
        nz = [j for j in range(pivot_col, ncols) if a[i][j] != 0]
        if not nz:
            continue
        for j in nz[1:]:
            j0 = nz[0]
            g, x, y = _xgcd(a[i][j0], a[i][j])
            p, q = a[i][j0] // g, a[i][j] // g
            colop(j0, j, x, y, -q, p)
        if nz[0] != pivot_col:
            colop(pivot_col, nz[0], 0, 1, 1, 0)
        pivot_col += 1
    kernel = []
    for j in range(ncols):
        if all(row[j] == 0 for row in a):
            kernel.append(tuple(u[i][j] for i in range(ncols)))
    return kernel


def saturated_lattice_basis(vectors, dim):
    """Z-basis of span_Q(vectors) ∩ Z^dim."""
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return []
    ortho = nullspace(vecs, dim)
    if not ortho:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    scaled = []
    for w in ortho:
        mult = lcm(*(f.denominator for f in w)) if w else 1
        row = [int(f * mult) for f in w]
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        scaled.append(row)
    return integer_kernel(scaled, dim)


def lattice_coordinates(basis, vector):
    """Integer coordinates of `vector` in `basis`; None if not in the span."""
    if not basis:
        return [] if all(x == 0 for x in vector) else None
    cols = [[Fraction(b[i]) for b in basis] for i in range(len(vector))]
    x = solve(cols, [Fraction(v) for v in vector])
    if x is None:
        return None
    residual = [
        sum(b[i] * x[k] for k, b in enumerate(basis)) - vector[i]
        for i in range(len(vector))
    ]
    if any(r != 0 for r in residual):
        return None
    if any(f.denominator != 1 for f in x):
        return None
    return [int(f) for f in x]
