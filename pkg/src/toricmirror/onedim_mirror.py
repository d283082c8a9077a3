"""Finite-dimensional modules over k[t] (and k[t1, t2]) and their circle sheaves.

The circle complex has one vertex ``v`` at 0 and one arc.  The arrow with
shift 0 enters the arc on the positive side of ``v``; the arrow with shift
-1 enters it on the negative side.  ``mirror_1d`` makes the negative-side
arrow the identity and puts ``t`` on the positive side, so the sheaf
propagates through 0 in the positive direction and its only singular
covectors at 0 are negative.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import random

from . import linalg
from .cellsheaf.complex import UnsupportedDimension, circle_complex, torus_complex
from .cellsheaf.microsupport import fiber_dims
from .cellsheaf.sheaf import CellSheaf, mat_mul


class NotInvertible(ValueError):
    pass


class NonCommuting(ValueError):
    pass


@dataclass(frozen=True)
class TorsionModule:
    t: tuple     # square matrix rows

    def __init__(self, t):
        rows = tuple(tuple(Fraction(x) for x in row) for row in t)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("t must be square")
        object.__setattr__(self, "t", rows)

    @property
    def dim(self):
        return len(self.t)

    def matrix(self):
        return [list(r) for r in self.t]

    def scaled(self, chi):
        return type(self)([[Fraction(chi) * x for x in r] for r in self.t])


class LaurentModule(TorsionModule):
    def __init__(self, t):
        super().__init__(t)
        if linalg.rank(self.matrix(), self.dim) != self.dim:
            raise NotInvertible("t is not invertible")


def jordan_block(eig, size):
    return [[Fraction(eig) if i == j else Fraction(int(j == i + 1)) for j in range(size)]
            for i in range(size)]


def _ad(tN, tM, m, n):
    """Matrix of ``phi -> tN phi - phi tM`` on ``Hom(k^m, k^n)`` (row-major phi)."""
    rows = []
    for i in range(n):
        for j in range(m):
            row = {}
            for k in range(n):
                if tN[i][k]:
                    row[k * m + j] = row.get(k * m + j, 0) + tN[i][k]
            for k in range(m):
                if tM[k][j]:
                    row[i * m + k] = row.get(i * m + k, 0) - tM[k][j]
            rows.append({c: v for c, v in row.items() if v})
    return rows


def ext_dims_kt(M, N):
    """``(dim Hom, dim Ext^1)`` over k[t] for finite-dimensional modules."""
    m, n = M.dim, N.dim
    r = linalg.sparse_rank(_ad(N.matrix(), M.matrix(), m, n))
    return (m * n - r, m * n - r)


def koszul_ext(Ms, Ns):
    """Ext over ``k[t_1..t_k]`` between modules given by commuting matrices."""
    k = len(Ms)
    m, n = len(Ms[0]) if Ms else 0, len(Ns[0]) if Ns else 0
    size = m * n
    ads = [_ad(Ns[j], Ms[j], m, n) for j in range(k)]
    subsets = [list(combinations(range(k), p)) for p in range(k + 1)]
    ranks = []
    for p in range(k):
        src = {S: i for i, S in enumerate(subsets[p])}
        rows = []
        for T in subsets[p + 1]:
            block = [dict() for _ in range(size)]
            for pos, j in enumerate(T):
                S = T[:pos] + T[pos + 1:]
                sign = (-1) ** pos
                off = src[S] * size
                for r, row in enumerate(ads[j]):
                    for c, v in row.items():
                        block[r][off + c] = block[r].get(off + c, 0) + sign * v
            rows.extend(block)
        ranks.append(linalg.sparse_rank(rows))
    dims = [len(subsets[p]) * size for p in range(k + 1)]
    return tuple(dims[p] - (ranks[p] if p < k else 0) - (ranks[p - 1] if p else 0)
                 for p in range(k + 1))


_POS, _NEG = (0,), (-1,)


def _arrows(cx):
    pos = cx.arrow_id(0, 1, _POS)
    neg = cx.arrow_id(0, 1, _NEG)
    return pos, neg


def mirror_1d(M, orientation=1, cx=None):
    cx = cx or circle_complex()
    pos, neg = _arrows(cx)
    t, eye = M.matrix(), linalg.identity(M.dim)
    if orientation < 0:
        pos, neg = neg, pos
    return CellSheaf(cx, [M.dim, M.dim], {pos: t, neg: eye})


def mirror_1d_gm(M, cx=None):
    """Local system with monodromy ``t`` (``L_chi`` for ``t = chi``)."""
    if not isinstance(M, LaurentModule):
        M = LaurentModule(M.t)
    cx = cx or circle_complex()
    pos, neg = _arrows(cx)
    return CellSheaf(cx, [M.dim, M.dim],
                     {pos: linalg.identity(M.dim), neg: linalg.inverse(M.matrix())})


def pullback_at_zero(M):
    """Derived fibre at 0: ``(dim ker t, dim coker t)`` in degrees -1, 0."""
    r = linalg.rank(M.matrix(), M.dim) if M.dim else 0
    return (M.dim - r, M.dim - r)


def microstalk_1d(F):
    """Microstalk at the negative covector over 0: fibre along the positive-side arrow."""
    return fiber_dims(F, 0, (-1,))[:2]


def normalize_1d(F):
    """Relabel the arc so that the negative-side arrow is the identity, when invertible."""
    cx = F.cx
    pos, neg = _arrows(cx)
    n = F.dims[0]
    if F.dims[1] != n or (n and linalg.rank(F.maps[neg], n) != n):
        return F
    if not n:
        return F
    inv = linalg.inverse(F.maps[neg])
    return CellSheaf(cx, F.dims, {neg: linalg.identity(n),
                                  pos: mat_mul(inv, F.maps[pos], n, n)}, check=False)


def product_mirror(ts, dim=None):
    """Sheaf on the square torus (or circle) for commuting ``t_1..t_k``."""
    k = len(ts)
    if k not in (1, 2):
        raise UnsupportedDimension("products are implemented for one or two coordinates")
    ts = [[[Fraction(x) for x in r] for r in t] for t in ts]
    n = len(ts[0]) if dim is None else dim
    for a, b in combinations(ts, 2):
        if mat_mul(a, b, n, n) != mat_mul(b, a, n, n):
            raise NonCommuting("the actions do not commute")
    cx = circle_complex() if k == 1 else torus_complex(2)
    maps = {}
    for arr in cx.arrows:
        src, tgt = cx.cells[arr.src].sample, cx.cells[arr.tgt].sample
        m = linalg.identity(n)
        for j in range(k):
            if tgt[j] + arr.shift[j] - src[j] > 0:
                m = mat_mul(ts[j], m, n, n)
        maps[arr.index] = m
    return CellSheaf(cx, [n] * len(cx.cells), maps)


# -- random corpus -------------------------------------------------------------

def random_module(rng, max_dim=4):
    n = rng.randint(0, max_dim)
    kind = rng.choice(["random", "nilpotent", "singular", "scalar", "jordan"])
    if kind == "nilpotent":
        t = [[Fraction(rng.randint(-2, 2)) if j > i else Fraction(0) for j in range(n)]
             for i in range(n)]
    elif kind == "scalar":
        c = rng.choice([0, 1, -1, 2])
        t = [[Fraction(c * int(i == j)) for j in range(n)] for i in range(n)]
    elif kind == "jordan":
        t = [[Fraction(0)] * n for _ in range(n)]
        i = 0
        while i < n:
            size = rng.randint(1, n - i)
            eig = rng.choice([0, 1, -1])
            for a in range(size):
                t[i + a][i + a] = Fraction(eig)
                if a + 1 < size:
                    t[i + a][i + a + 1] = Fraction(1)
            i += size
    else:
        t = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if kind == "singular" and n:
            col = rng.randrange(n)
            for r in t:
                r[col] = Fraction(0)
    return TorsionModule(t)


def random_pairs(seed, count, max_dim=4):
    rng = random.Random(seed)
    return [(random_module(rng, max_dim), random_module(rng, max_dim)) for _ in range(count)]
