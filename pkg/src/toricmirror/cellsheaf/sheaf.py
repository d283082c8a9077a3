"""Representations of the entrance-path category (constructible sheaves).

A ``CellSheaf`` stores a vector space ``F(c)`` per cell (as a dimension) and
a matrix ``F(a)`` of shape ``dim F(tgt) x dim F(src)`` per arrow.
"""
from fractions import Fraction

from .. import linalg
from .complex import CellComplex


class MismatchedComplex(ValueError):
    pass


class NonSymmetricComplex(ValueError):
    pass


class NotFunctorial(ValueError):
    pass


def _zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def mat_mul(a, b, inner, ncols):
    """``a @ b`` where ``a`` is m x inner and ``b`` is inner x ncols."""
    return [[sum((row[k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(ncols)]
            for row in a]


class CellSheaf:
    def __init__(self, cx, dims, maps, check=True):
        self.cx = cx
        self.dims = tuple(int(x) for x in dims)
        self.maps = {a: [[Fraction(x) for x in row] for row in m] for a, m in maps.items()}
        for arr in cx.arrows:
            m = self.maps.setdefault(arr.index, _zeros(self.dims[arr.tgt], self.dims[arr.src]))
            if len(m) != self.dims[arr.tgt] or any(len(r) != self.dims[arr.src] for r in m):
                raise ValueError(f"arrow {arr.index} has the wrong shape")
        if check:
            self.check()

    def __repr__(self):
        return f"CellSheaf(dims={self.dims})"

    def check(self):
        for a, b in self.cx.pairs:
            A, B = self.cx.arrows[a], self.cx.arrows[b]
            comp = mat_mul(self.maps[b], self.maps[a], self.dims[A.tgt], self.dims[A.src])
            if comp != self.maps[self.cx.compose(a, b)]:
                raise NotFunctorial(f"arrows {a} then {b} do not commute")

    @property
    def total_dim(self):
        return sum(self.dims)

    def is_zero(self):
        return self.total_dim == 0

    def __eq__(self, other):
        return (isinstance(other, CellSheaf) and self.cx.same_as(other.cx)
                and self.dims == other.dims and self.maps == other.maps)

    def apply(self, a, v):
        return linalg.matvec(self.maps[a], v) if self.maps[a] else []


def same_complex(F, G):
    if not F.cx.same_as(G.cx):
        raise MismatchedComplex("sheaves live on different cell complexes")


def zero(cx):
    return CellSheaf(cx, [0] * len(cx.cells), {})


def constant(cx, rank=1):
    eye = linalg.identity(rank)
    return CellSheaf(cx, [rank] * len(cx.cells), {a.index: eye for a in cx.arrows})


def from_generators(cx, dims, gen_maps):
    """Extend matrices on a generating set of arrows to all arrows by composition."""
    maps = dict(gen_maps)
    changed = True
    while changed:
        changed = False
        for a, b in cx.pairs:
            if a in maps and b in maps:
                c = cx.compose(a, b)
                if c not in maps:
                    A = cx.arrows[a]
                    maps[c] = mat_mul(maps[b], maps[a], dims[A.tgt], dims[A.src])
                    changed = True
    return CellSheaf(cx, dims, maps)


def representable(cx, c):
    """``P_c = k[Hom(c, -)]``; its basis at ``x`` is the morphisms ``c -> x``."""
    basis = {x.index: ([None] if x.index == c else []) + cx.hom(c, x.index) for x in cx.cells}
    dims = [len(basis[x.index]) for x in cx.cells]
    maps = {}
    for arr in cx.arrows:
        src, tgt = basis[arr.src], basis[arr.tgt]
        pos = {m: i for i, m in enumerate(tgt)}
        M = _zeros(len(tgt), len(src))
        for j, m in enumerate(src):
            img = arr.index if m is None else cx.compose(m, arr.index)
            M[pos[img]][j] = Fraction(1)
        maps[arr.index] = M
    return CellSheaf(cx, dims, maps)


def direct_sum(*sheaves):
    cx = sheaves[0].cx
    for G in sheaves[1:]:
        same_complex(sheaves[0], G)
    dims = [sum(F.dims[i] for F in sheaves) for i in range(len(cx.cells))]
    maps = {}
    for arr in cx.arrows:
        M = _zeros(dims[arr.tgt], dims[arr.src])
        r = c = 0
        for F in sheaves:
            for i, row in enumerate(F.maps[arr.index]):
                M[r + i][c:c + F.dims[arr.src]] = row
            r += F.dims[arr.tgt]
            c += F.dims[arr.src]
        maps[arr.index] = M
    return CellSheaf(cx, dims, maps, check=False)


def subrep_generated(F, gens):
    """Row bases of the smallest subrepresentation containing ``gens[cell]``."""
    cx = F.cx
    spans = {x.index: [] for x in cx.cells}
    for c, vecs in gens.items():
        for v in vecs:
            spans[c].append(list(v))
            for a in cx.out_arrows[c]:
                spans[cx.arrows[a].tgt].append(F.apply(a, v))
    return {x: linalg.row_basis(vs, F.dims[x]) if vs else [] for x, vs in spans.items()}


def quotient(F, sub):
    """``F / sub`` where ``sub`` gives row bases of a subrepresentation."""
    cx = F.cx
    proj, keep = {}, {}
    for x in cx.cells:
        i = x.index
        n = F.dims[i]
        comp = linalg.complement_basis(sub[i], n) if sub[i] else linalg.identity(n)
        keep[i] = [next(j for j, c in enumerate(v) if c) for v in comp]
        if not sub[i]:
            proj[i] = linalg.identity(n)
            continue
        # coordinates in the basis sub + comp are given by the inverse transpose
        inv = linalg.inverse(linalg.transpose(sub[i] + comp, n))
        proj[i] = inv[len(sub[i]):]
    dims = [len(keep[x.index]) for x in cx.cells]
    maps = {}
    for arr in cx.arrows:
        M = F.maps[arr.index]
        cols = [[row[j] for j in keep[arr.src]] for row in M]
        maps[arr.index] = _sparse_mul(proj[arr.tgt], cols, dims[arr.src])
    return CellSheaf(cx, dims, maps, check=False)


def _sparse_mul(a, b, ncols):
    out = []
    for row in a:
        acc = [Fraction(0)] * ncols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def restrict(F, sub):
    """The subrepresentation with the given row bases, in those coordinates."""
    cx = F.cx
    dims = [len(sub[x.index]) for x in cx.cells]
    maps = {}
    for arr in cx.arrows:
        cols = [linalg.coordinates(sub[arr.tgt], F.dims[arr.tgt], F.apply(arr.index, v))
                for v in sub[arr.src]]
        maps[arr.index] = [[cols[j][i] for j in range(dims[arr.src])] for i in range(dims[arr.tgt])]
    return CellSheaf(cx, dims, maps, check=False)


def twist(F, chi):
    """Scale the arrow with shift ``s`` by ``prod chi_j ** s_j``."""
    chi = tuple(Fraction(x) for x in chi)
    if len(chi) != F.cx.d or any(x == 0 for x in chi):
        raise ValueError("twist needs one nonzero scalar per coordinate loop")
    maps = {}
    for arr in F.cx.arrows:
        s = Fraction(1)
        for c, k in zip(chi, arr.shift):
            s *= c ** k
        maps[arr.index] = [[x * s for x in row] for row in F.maps[arr.index]]
    return CellSheaf(F.cx, F.dims, maps, check=False)


def translation_map(cx, vec):
    """Cell permutation and per-cell integer offsets for translation by ``vec``."""
    vec = tuple(Fraction(x) for x in vec)
    perm, offs = {}, {}
    for c in cx.cells:
        moved = tuple(p + v for p, v in zip(c.sample, vec))
        j = cx.cell_at(c.dim, moved)
        if j is None:
            raise NonSymmetricComplex(f"{c} has no translate in the complex")
        u = tuple(m - s for m, s in zip(moved, cx.cells[j].sample))
        shifted = sorted(tuple(p + v - w for p, v, w in zip(pt, vec, u)) for pt in c.geom)
        if shifted != sorted(cx.cells[j].geom):
            raise NonSymmetricComplex(f"{c} does not translate onto a cell")
        perm[c.index], offs[c.index] = j, tuple(int(x) for x in u)
    amap = {}
    for arr in cx.arrows:
        s = tuple(a + offs[arr.tgt][k] - offs[arr.src][k] for k, a in enumerate(arr.shift))
        b = cx.arrow_id(perm[arr.src], perm[arr.tgt], s)
        if b is None:
            raise NonSymmetricComplex(f"arrow {arr.index} has no translate")
        amap[arr.index] = b
    return perm, amap


def translate(F, vec):
    perm, amap = translation_map(F.cx, vec)
    dims = [0] * len(F.dims)
    for i, j in perm.items():
        dims[j] = F.dims[i]
    maps = {amap[a]: m for a, m in F.maps.items()}
    return CellSheaf(F.cx, dims, maps, check=False)


def local_system(cx, chi):
    return twist(constant(cx), chi)
