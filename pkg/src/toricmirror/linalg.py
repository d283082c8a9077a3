"""Exact linear algebra over the rationals.

Matrices are lists of rows; entries are ``int`` or ``Fraction``.  Shapes are
passed explicitly wherever a matrix may have no rows.
"""
from fractions import Fraction


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(rows, ncols):
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def matmul(a, b, ncols_b):
    if not a:
        return []
    return [[sum((row[k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(ncols_b)] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(rows, ncols):
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``."""
    R = frac_matrix(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(R):
            break
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return sparse_rank([{j: x for j, x in enumerate(row) if x} for row in rows])


def sparse_rank(rows):
    """Rank of a matrix given as a list of ``{col: value}`` dicts."""
    pivots = {}  # pivot column -> reduced row
    r = 0
    for row in rows:
        row = {j: Fraction(x) for j, x in row.items() if x}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = 1 / row[c]
                pivots[c] = {j: x * inv for j, x in row.items()}
                r += 1
                break
            f = row[c]
            for j, x in prow.items():
                y = row.get(j, 0) - f * x
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
    return r


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` as a list of vectors."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(rows, ncols, b):
    """One solution of ``A x = b`` or ``None``."""
    aug = [list(row) + [bi] for row, bi in zip(rows, b)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][ncols]
    return x


def inverse(rows):
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def row_basis(vectors, ncols):
    """A basis (reduced rows) of the span of ``vectors``."""
    R, _ = rref(vectors, ncols)
    return R


def complement_basis(vectors, ncols):
    """Standard basis vectors completing span(vectors) to the whole space."""
    _, pivots = rref(vectors, ncols)
    comp = []
    for c in range(ncols):
        if c not in pivots:
            v = [Fraction(0)] * ncols
            v[c] = Fraction(1)
            comp.append(v)
    return comp


def coordinates(basis_rows, ncols, v):
    """Coefficients of ``v`` in terms of independent ``basis_rows``."""
    k = len(basis_rows)
    a = transpose(basis_rows, ncols) if k else [[] for _ in range(ncols)]
    x = solve(a, k, v)
    if x is None:
        raise ValueError("vector not in span")
    return x
