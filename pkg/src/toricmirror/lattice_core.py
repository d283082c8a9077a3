"""Exact integer lattice algorithms.

Integer matrices are lists of rows of Python ints.  Because a matrix may have
no rows or no columns, functions that need the shape take it explicitly or
derive it from a companion argument.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, floor
import itertools

from . import linalg


class RankDeficient(ValueError):
    pass


def shape(A, ncols=None):
    m = len(A)
    if ncols is None:
        ncols = len(A[0]) if m else 0
    return m, ncols


def int_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_matmul(A, B, ncols_b):
    return [[sum(row[k] * B[k][j] for k in range(len(B))) for j in range(ncols_b)]
            for row in A]


def int_transpose(A, ncols):
    return [[A[i][j] for i in range(len(A))] for j in range(ncols)]


def columns(A, ncols):
    return [tuple(A[i][j] for i in range(len(A))) for j in range(ncols)]


def from_columns(cols, nrows):
    return [[c[i] for c in cols] for i in range(nrows)]


@dataclass(frozen=True)
class SmithDecomposition:
    """``A = U * S * V`` with ``U``, ``V`` unimodular and ``S`` in Smith form."""
    U: list
    S: list
    V: list
    U_inv: list
    V_inv: list

    @property
    def diagonal(self):
        k = min(len(self.S), len(self.S[0]) if self.S else 0)
        return [self.S[i][i] for i in range(k)]

    @property
    def rank(self):
        return sum(1 for x in self.diagonal if x)


def smith_normal_form(A, ncols=None):
    m, n = shape(A, ncols)
    D = [list(map(int, row)) for row in A]
    P, Pinv = int_identity(m), int_identity(m)   # P A Q = D
    Q, Qinv = int_identity(n), int_identity(n)

    def add_row(i, j, c):  # row_i += c * row_j
        if c == 0:
            return
        D[i] = [x + c * y for x, y in zip(D[i], D[j])]
        P[i] = [x + c * y for x, y in zip(P[i], P[j])]
        for row in Pinv:
            row[j] -= c * row[i]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]
        for row in Pinv:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        P[i] = [-x for x in P[i]]
        for row in Pinv:
            row[i] = -row[i]

    def add_col(i, j, c):  # col_i += c * col_j
        if c == 0:
            return
        for row in D:
            row[i] += c * row[j]
        for row in Q:
            row[i] += c * row[j]
        Qinv[j] = [x - c * y for x, y in zip(Qinv[j], Qinv[i])]

    def swap_cols(i, j):
        for M in (D, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                add_row(i, t, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                add_col(j, t, -q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            # divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and D[t][t] < 0:
            negate_row(t)
    return SmithDecomposition(U=Pinv, S=D, V=Qinv, U_inv=P, V_inv=Q)


def determinantal_divisors(A, ncols=None):
    """Invariant factors by the minor-gcd formula; independent of the SNF code."""
    m, n = shape(A, ncols)
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, _det([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _det(M):
    k = len(M)
    if k == 0:
        return 1
    F = linalg.frac_matrix(M)
    det = Fraction(1)
    for c in range(k):
        p = next((i for i in range(c, k) if F[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            F[c], F[p] = F[p], F[c]
            det = -det
        det *= F[c][c]
        for i in range(c + 1, k):
            f = F[i][c] / F[c][c]
            F[i] = [x - f * y for x, y in zip(F[i], F[c])]
    return int(det)


def int_rank(A, ncols=None):
    m, n = shape(A, ncols)
    return linalg.rank(A, n) if m and n else 0


def hermite_rows(vectors, dim):
    """Canonical row-style Hermite normal form of the lattice spanned by ``vectors``."""
    H = [list(map(int, v)) for v in vectors if any(v)]
    out = []
    col = 0
    while H and col < dim:
        nz = [r for r in H if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                r[:] = [x - q * y for x, y in zip(r, p)]
            nz = [r for r in nz if r[col]]
        p = nz[0]
        if p[col] < 0:
            p[:] = [-x for x in p]
        H = [r for r in H if r is not p and any(r)]
        out.append(p)
        col += 1
    # reduce entries above pivots into [0, pivot)
    for k, r in enumerate(out):
        c = next(j for j, x in enumerate(r) if x)
        for s in out[:k]:
            q = s[c] // r[c]
            s[:] = [x - q * y for x, y in zip(s, r)]
    return [tuple(r) for r in out]


def lattice_equal(basis_a, basis_b, dim):
    """Equality of lattices given by lists of generating vectors."""
    return hermite_rows(basis_a, dim) == hermite_rows(basis_b, dim)


def kernel_basis(A, ncols=None):
    """Basis (list of column vectors) of the saturated kernel ``{x in Z^n : A x = 0}``."""
    m, n = shape(A, ncols)
    if m == 0:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    snf = smith_normal_form(A, n)
    r = snf.rank
    Q = snf.V_inv
    return [tuple(Q[i][j] for i in range(n)) for j in range(r, n)]


@dataclass(frozen=True)
class FinAbPresentation:
    rank: int
    invariant_factors: tuple = ()

    def __str__(self):
        parts = ["Z"] * min(self.rank, 1)
        if self.rank > 1:
            parts = [f"Z^{self.rank}"]
        parts += [f"Z/{k}" for k in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class QuotientMap:
    """Canonical coordinates on ``Z^m / image(A)`` from an SNF of ``A``."""
    m: int
    diagonal: tuple
    U: tuple
    U_inv: tuple

    def canonical(self, x):
        y = [sum(self.U_inv[i][j] * x[j] for j in range(self.m)) for i in range(self.m)]
        torsion = tuple(y[i] % s for i, s in enumerate(self.diagonal) if s > 1)
        free = tuple(y[len(self.diagonal):])
        return free, torsion

    def lift(self, cls):
        free, torsion = cls
        y = []
        it = iter(torsion)
        for s in self.diagonal:
            y.append(next(it) if s > 1 else 0)
        y += list(free)
        return tuple(sum(self.U[i][j] * y[j] for j in range(self.m)) for i in range(self.m))


def _quotient(A, m, n):
    if n == 0 or m == 0:
        return FinAbPresentation(m), QuotientMap(m, (), tuple(map(tuple, int_identity(m))),
                                                 tuple(map(tuple, int_identity(m))))
    snf = smith_normal_form(A, n)
    diag = tuple(x for x in snf.diagonal if x)
    pres = FinAbPresentation(m - len(diag), tuple(x for x in diag if x > 1))
    qmap = QuotientMap(m, diag, tuple(map(tuple, snf.U)), tuple(map(tuple, snf.U_inv)))
    return pres, qmap


def cokernel(A, ncols=None):
    """Presentation of ``Z^rows / image(A)``."""
    m, n = shape(A, ncols)
    return _quotient(A, m, n)[0]


@dataclass(frozen=True)
class CharacterSequence:
    """``0 -> M -> Z^n -> Cl -> 0`` with ``M = Hom(N, Z)`` embedded by pairing with rays."""
    n: int
    d: int
    M_inclusion: list          # n x d
    quotient: FinAbPresentation
    qmap: QuotientMap = field(repr=False)

    def canonical(self, x):
        return self.qmap.canonical(x)

    def lift(self, cls):
        return self.qmap.lift(cls)


def character_sequence(f, n=None):
    """Character sequence of a d x n ray matrix ``f``."""
    d, n = shape(f, n)
    if int_rank(f, n) != d:
        raise RankDeficient(f"ray matrix has rank {int_rank(f, n)} < {d}")
    Mi = int_transpose(f, n)
    pres, qmap = _quotient(Mi, n, d)
    return CharacterSequence(n, d, Mi, pres, qmap)


@dataclass(frozen=True)
class CosetFamily:
    """Solutions of ``G m = t (mod Z^r)`` on the torus ``R^k / Z^k``.

    The solution set is a union of translates of the subtorus spanned by
    ``direction``; ``cosets`` holds one canonical base point per translate.
    """
    dim: int
    direction: tuple            # saturated basis vectors of ker G
    cosets: tuple               # points in [0,1)^dim, exact rationals
    G: tuple = ()
    target: tuple = ()

    @property
    def empty(self):
        return not self.cosets

    def contains(self, p):
        for row, t in zip(self.G, self.target):
            if (sum(Fraction(a) * x for a, x in zip(row, p)) - t).denominator != 1:
                return False
        return True


def _mod1(x):
    x = Fraction(x)
    return x - floor(x)


def solve_congruences(G, target, dim=None, modulus=None):
    """All ``m`` in ``R^dim / Z^dim`` with ``G m = target`` modulo the lattice ``modulus``.

    ``modulus`` is a square integer basis matrix (columns) of the congruence
    lattice; ``None`` means ``Z^rows``.
    """
    r, k = shape(G, dim)
    target = [Fraction(t) for t in target]
    G = [list(map(int, row)) for row in G]
    if modulus is not None:
        Linv = linalg.inverse(linalg.frac_matrix(modulus))
        G2 = linalg.matmul(Linv, linalg.frac_matrix(G), k)
        if any(x.denominator != 1 for row in G2 for x in row):
            raise ValueError("congruences are not well defined on the torus")
        G = [[int(x) for x in row] for row in G2]
        target = linalg.matvec(Linv, target)
    if r == 0:
        basis = tuple(tuple(int(i == j) for i in range(k)) for j in range(k))
        return CosetFamily(k, basis, (tuple(Fraction(0) for _ in range(k)),), (), ())
    snf = smith_normal_form(G, k)
    # S (V m) = U^-1 t
    c = [sum(snf.U_inv[i][j] * target[j] for j in range(r)) for i in range(r)]
    rk = snf.rank
    if any(_mod1(c[i]) != 0 for i in range(rk, r)):
        return CosetFamily(k, (), (), tuple(map(tuple, G)), tuple(target))
    Q = snf.V_inv   # m = Q y
    direction = tuple(tuple(Q[i][j] for i in range(k)) for j in range(rk, k))
    choices = []
    for i in range(rk):
        s = snf.S[i][i]
        choices.append([_mod1((c[i] + l) / s) for l in range(s)])
    cosets = []
    for ys in itertools.product(*choices):
        y = list(ys) + [Fraction(0)] * (k - rk)
        m = tuple(_mod1(sum(Q[i][j] * y[j] for j in range(k))) for i in range(k))
        cosets.append(m)
    return CosetFamily(k, direction, tuple(sorted(cosets)), tuple(map(tuple, G)), tuple(target))


def matrix_to_json(A):
    return [[str(x) for x in row] for row in A]


def matrix_from_json(rows):
    return [[int(x) for x in row] for row in rows]
