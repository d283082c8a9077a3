"""Exact rational linear feasibility by phase-one simplex with Bland's rule."""
from fractions import Fraction


def feasible_point(A_eq=(), b_eq=(), A_ub=(), b_ub=(), lower=None, nvars=None):
    """Return a rational point satisfying the system, or ``None``.

    Constraints are ``A_eq x = b_eq`` and ``A_ub x <= b_ub``.  ``lower[j]`` is
    a lower bound for variable ``j`` or ``None`` for a free variable; by
    default every variable is free.
    """
    if nvars is None:
        nvars = len((list(A_eq) + list(A_ub) + [[]])[0])
    if lower is None:
        lower = [None] * nvars
    # x_j = lower_j + y_j (y_j >= 0) or x_j = y+_j - y-_j
    cols = []   # (var index, sign)
    for j in range(nvars):
        cols.append((j, 1))
        if lower[j] is None:
            cols.append((j, -1))
    shift = [Fraction(l) if l is not None else Fraction(0) for l in lower]

    def expand(row, rhs):
        rhs = Fraction(rhs) - sum(Fraction(a) * s for a, s in zip(row, shift))
        return [Fraction(row[j]) * sg for j, sg in cols], rhs

    rows, rhs = [], []
    for row, b in zip(A_eq, b_eq):
        r, v = expand(row, b)
        rows.append(r)
        rhs.append(v)
    n_ub = len(A_ub)
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        r, v = expand(row, b)
        slack = [Fraction(0)] * n_ub
        slack[k] = Fraction(1)
        rows.append(r + slack)
        rhs.append(v)
    ncore = len(cols)
    nslack = n_ub
    for i in range(len(A_eq)):
        rows[i] = rows[i] + [Fraction(0)] * nslack
    y = _phase_one(rows, rhs, ncore + nslack)
    if y is None:
        return None
    x = list(shift)
    for (j, sg), val in zip(cols, y):
        x[j] += sg * val
    return x


def is_feasible(**kwargs):
    return feasible_point(**kwargs) is not None


def _phase_one(rows, rhs, n):
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * n
    T = []
    for i in range(m):
        r, b = list(rows[i]), rhs[i]
        if b < 0:
            r, b = [-x for x in r], -b
        art = [Fraction(int(k == i)) for k in range(m)]
        T.append(r + art + [b])
    width = n + m
    basis = [n + i for i in range(m)]
    # objective: minimise sum of artificials, expressed in reduced costs
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] -= T[i][j]
    for i in range(m):
        obj[n + i] += 1
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:   # unbounded direction; cannot happen for phase one
            break
        _pivot(T, obj, best[1], enter)
        basis[best[1]] = enter
    if obj[-1] != 0:
        return None
    y = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            y[b] = T[i][-1]
    return y


def _pivot(T, obj, r, c):
    inv = 1 / T[r][c]
    T[r] = [x * inv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [x - f * y for x, y in zip(T[i], T[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [x - f * y for x, y in zip(obj, T[r])]


def in_cone(vector, generators):
    """Exact test ``vector in cone(generators)``."""
    if not generators:
        return all(x == 0 for x in vector)
    k = len(generators)
    A = [[g[i] for g in generators] for i in range(len(vector))]
    return is_feasible(A_eq=A, b_eq=list(vector), lower=[0] * k, nvars=k)
