"""Cell decompositions of 1- and 2-tori adapted to a family of loci.

Cells live in the universal cover.  Each cell has one representative piece
whose sample point (vertex, midpoint or centroid) lies in ``[0,1)^d``; other
lifts are integer translates.  A morphism ``(src, tgt, shift)`` of the
entrance-path category means ``rep(src)`` lies in the closure of
``rep(tgt) + shift``; composition adds shifts.

Each arrow also records the local shape of its branch at the source, used by
the microsupport test:

- ``("ray", u)``: an edge leaving a vertex in direction ``u``;
- ``("sector", d1, d2)``: a convex corner of a face spanned by ``d1, d2``;
- ``("half", n, w)``: a face on the side ``n`` of an edge with direction ``w``.
"""
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import floor
import itertools

from .. import lattice_core


class UnsupportedDimension(ValueError):
    pass


class IrrationalLocus(ValueError):
    pass


def _mod1(x):
    return x - floor(x)


def _key(p):
    return tuple(_mod1(Fraction(c)) for c in p)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def _mid(pts):
    k = len(pts)
    return tuple(sum(p[i] for p in pts) / k for i in range(len(pts[0])))


def _floor(p):
    return tuple(floor(x) for x in p)


@dataclass(frozen=True)
class Cell:
    index: int
    dim: int
    key: tuple
    geom: tuple         # points of the representative piece
    sample: tuple

    def __repr__(self):
        return f"Cell({self.index}, dim={self.dim}, at={tuple(str(x) for x in self.key)})"


@dataclass(frozen=True)
class Arrow:
    index: int
    src: int
    tgt: int
    shift: tuple
    branch: tuple


@dataclass(frozen=True)
class Circle:
    normal: tuple       # primitive, first nonzero entry positive
    offset: Fraction    # normal . m = offset (mod 1)

    def contains(self, p):
        return (sum(a * x for a, x in zip(self.normal, p)) - self.offset).denominator == 1


class CellComplex:
    def __init__(self, d, cells, arrows, points=(), circles=()):
        self.d = d
        self.cells = list(cells)
        self.arrows = list(arrows)
        self.points = tuple(points)
        self.circles = tuple(circles)
        self._index = {(a.src, a.tgt, a.shift): a.index for a in self.arrows}
        self.out_arrows = {c.index: [] for c in self.cells}
        self.in_arrows = {c.index: [] for c in self.cells}
        for a in self.arrows:
            self.out_arrows[a.src].append(a.index)
            self.in_arrows[a.tgt].append(a.index)
        self._by_key = {(c.dim, c.key): c.index for c in self.cells}
        self.pairs = [(a.index, b) for a in self.arrows for b in self.out_arrows[a.tgt]]
        for a, b in self.pairs:
            if self.compose(a, b) is None:
                raise AssertionError("entrance paths do not compose")

    def __repr__(self):
        return (f"CellComplex(d={self.d}, cells={self.f_vector()}, "
                f"arrows={len(self.arrows)})")

    @property
    def signature(self):
        return (self.d, tuple((c.dim, c.key, c.geom) for c in self.cells),
                tuple((a.src, a.tgt, a.shift) for a in self.arrows))

    def same_as(self, other):
        return self is other or self.signature == other.signature

    def arrow_id(self, src, tgt, shift):
        return self._index.get((src, tgt, tuple(shift)))

    def compose(self, a, b):
        """Index of ``b . a`` (first ``a``, then ``b``)."""
        A, B = self.arrows[a], self.arrows[b]
        if A.tgt != B.src:
            raise ValueError("arrows are not composable")
        return self.arrow_id(A.src, B.tgt, _add(A.shift, B.shift))

    def cell_at(self, dim, point):
        return self._by_key.get((dim, _key(point)))

    def hom(self, c, x):
        """Non-identity morphisms ``c -> x``."""
        return [a for a in self.out_arrows[c] if self.arrows[a].tgt == x]

    def chains(self, p):
        """Composable strings of ``p`` non-identity arrows (``p >= 1``)."""
        if p == 1:
            return [(a.index,) for a in self.arrows]
        out = []
        for ch in self.chains(p - 1):
            last = self.arrows[ch[-1]].tgt
            out.extend(ch + (b,) for b in self.out_arrows[last])
        return out

    def f_vector(self):
        return tuple(sum(1 for c in self.cells if c.dim == k) for k in range(self.d + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))


def loci_from_components(components, d):
    """Point and circle loci carried by lower-dimensional bases."""
    points, circles = set(), set()
    for comp in components:
        base = comp.base
        k = len(base.direction)
        if k >= d:
            continue
        for p in base.cosets:
            if any(not isinstance(x, (int, Fraction)) for x in p):
                raise IrrationalLocus(f"non-rational base point {p}")
            p = tuple(Fraction(x) for x in p)
            if k == 0:
                points.add(_key(p))
            else:
                w = base.direction[0]
                if any(not isinstance(x, int) for x in w):
                    raise IrrationalLocus(f"non-integral direction {w}")
                circles.add(_circle((-w[1], w[0]), p))
    return sorted(points), sorted(circles, key=lambda c: (c.normal, c.offset))


def _circle(normal, p):
    a, b = normal
    g = abs(a) if b == 0 else abs(b) if a == 0 else _gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return Circle((a, b), _mod1(a * p[0] + b * p[1]))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def build_adapted_complex(components=(), d=None, points=(), circles=()):
    """Cell structure refining the loci of ``components`` (plus any extra loci)."""
    components = list(components)
    if d is None:
        if not components:
            raise UnsupportedDimension("dimension is required without components")
        d = components[0].base.dim
    if d not in (1, 2):
        raise UnsupportedDimension(f"cell complexes are implemented for d <= 2, not {d}")
    pts, circs = loci_from_components(components, d)
    pts = sorted(set(pts) | {_key(p) for p in points})
    circs = sorted(set(circs) | set(circles), key=lambda c: (c.normal, c.offset))
    if d == 1:
        return _build_1d(pts)
    return _build_2d(pts, circs)


@lru_cache(maxsize=None)
def _cached(d, points):
    return build_adapted_complex(d=d, points=points)


def circle_complex(points=()):
    return _cached(1, tuple(_key(p) for p in points))


def torus_complex(d):
    """Minimal cube structure: one vertex at the origin."""
    return _cached(d, ((0,) * d,))


# -- dimension one -----------------------------------------------------------

def _build_1d(pts):
    xs = sorted({p[0] for p in pts}) or [Fraction(0)]
    cells = []
    vidx = {}
    for x in xs:
        vidx[x] = len(cells)
        cells.append(Cell(len(cells), 0, (x,), ((x,),), (x,)))
    arcs = []
    for i, x in enumerate(xs):
        y = xs[i + 1] if i + 1 < len(xs) else xs[0] + 1
        arcs.append((x, y))
    arcs.sort(key=lambda ab: _key(((ab[0] + ab[1]) / 2,)))
    arrows = []
    for x, y in arcs:
        mid = (x + y) / 2
        fl = floor(mid)
        c = len(cells)
        cells.append(Cell(c, 1, (mid - fl,), ((x - fl,), (y - fl,)), (mid - fl,)))
        for end, u in ((x - fl, 1), (y - fl, -1)):
            v = vidx[_mod1(end)]
            t = floor(end)
            arrows.append((v, c, (-t,), ("ray", (u,))))
    return _finish(1, cells, arrows, [(x,) for x in xs], ())


# -- dimension two -----------------------------------------------------------

def _primary_vertices(pts, circs):
    out = set(pts)
    for c1, c2 in itertools.combinations(circs, 2):
        if c1.normal[0] * c2.normal[1] - c1.normal[1] * c2.normal[0] == 0:
            continue
        fam = lattice_core.solve_congruences([list(c1.normal), list(c2.normal)],
                                        [c1.offset, c2.offset], 2)
        out.update(fam.cosets)
    return sorted(out)


def _perimeter_param(p, x0, y0, x1, y1):
    x, y = p
    w, h = x1 - x0, y1 - y0
    if y == y0 and x < x1:
        return x - x0
    if x == x1 and y < y1:
        return w + (y - y0)
    if y == y1 and x > x0:
        return w + h + (x1 - x)
    return 2 * w + h + (y1 - y)


def _chords(circ, x0, y0, x1, y1):
    a, b = circ.normal
    vals = [a * x + b * y for x in (x0, x1) for y in (y0, y1)]
    lo, hi = min(vals), max(vals)
    out = []
    for k in range(floor(lo - circ.offset), floor(hi - circ.offset) + 2):
        L = circ.offset + k
        if not lo < L < hi:
            continue
        ends = set()
        for x in (x0, x1):
            y = (L - a * x) / b
            if y0 <= y <= y1:
                ends.add((x, y))
        for y in (y0, y1):
            x = (L - b * y) / a
            if x0 <= x <= x1:
                ends.add((x, y))
        ends = sorted(ends)
        out.append((ends[0], ends[-1]))
    return out


def _split(polys, p, q):
    for i, poly in enumerate(polys):
        if p in poly and q in poly:
            a, b = sorted((poly.index(p), poly.index(q)))
            if b - a in (1, len(poly) - 1):
                continue
            polys[i:i + 1] = [poly[a:b + 1], poly[b:] + poly[:a + 1]]
            return
    raise AssertionError("chord does not split a face")


def _build_2d(pts, circs):
    prim = _primary_vertices(pts, circs)
    xs = {p[0] for p in prim} | {c.offset for c in circs if c.normal == (1, 0)}
    ys = {p[1] for p in prim} | {c.offset for c in circs if c.normal == (0, 1)}
    xs = sorted(xs) or [Fraction(0)]
    ys = sorted(ys) or [Fraction(0)]
    X = xs + [xs[0] + 1]
    Y = ys + [ys[0] + 1]
    slanted = [c for c in circs if 0 not in c.normal]
    faces = []
    for i in range(len(xs)):
        for j in range(len(ys)):
            x0, x1, y0, y1 = X[i], X[i + 1], Y[j], Y[j + 1]
            chords = sorted({ch for c in slanted for ch in _chords(c, x0, y0, x1, y1)})
            bpts = {(x0, y0), (x1, y0), (x1, y1), (x0, y1)}
            for p, q in chords:
                bpts.update((p, q))
            ring = sorted(bpts, key=lambda p: _perimeter_param(p, x0, y0, x1, y1))
            polys = [ring]
            for p, q in chords:
                _split(polys, p, q)
            faces.extend(polys)

    vkeys, ekeys, fkeys = {}, {}, {}
    for poly in faces:
        for k, p in enumerate(poly):
            vkeys.setdefault(_key(p), (p,))
            q = poly[(k + 1) % len(poly)]
            ekeys.setdefault(_key(_mid((p, q))), (p, q))
        fkeys.setdefault(_key(_mid(poly)), tuple(poly))

    cells = []

    def add(dim, table):
        idx = {}
        for key in sorted(table):
            geom = table[key]
            fl = _floor(_mid(geom))
            geom = tuple(_sub(p, fl) for p in geom)
            idx[key] = len(cells)
            cells.append(Cell(len(cells), dim, key, geom, _mid(geom)))
        return idx

    vid, eid, fid = add(0, vkeys), add(1, ekeys), add(2, fkeys)

    def offset(cell_index, geom_pts):
        return _sub(_mid(geom_pts), cells[cell_index].sample)

    arrows = []
    for poly in faces:
        f = fid[_key(_mid(poly))]
        fo = offset(f, poly)
        m = len(poly)
        for k, p in enumerate(poly):
            q, r = poly[(k + 1) % m], poly[k - 1]
            v = vid[_key(p)]
            t = _sub(p, cells[v].sample)
            arrows.append((v, f, _sub(fo, t), ("sector", _sub(q, p), _sub(r, p))))
            e = eid[_key(_mid((p, q)))]
            te = offset(e, (p, q))
            w = _sub(q, p)
            n = (-w[1], w[0])
            inward = _sub(_mid(poly), _mid((p, q)))
            if n[0] * inward[0] + n[1] * inward[1] < 0:
                n = _neg(n)
            arrows.append((e, f, _sub(fo, te), ("half", n, w)))
    for e in eid.values():
        a, b = cells[e].geom
        for p, q in ((a, b), (b, a)):
            v = vid[_key(p)]
            t = _sub(p, cells[v].sample)
            arrows.append((v, e, _neg(t), ("ray", _sub(q, p))))
    return _finish(2, cells, arrows, prim, circs)


def _finish(d, cells, raw, points, circles):
    seen = {}
    for src, tgt, shift, branch in raw:
        shift = tuple(int(s) for s in shift)
        if (src, tgt, shift) in seen:
            raise AssertionError("duplicate branch")
        seen[(src, tgt, shift)] = branch
    order = sorted(seen, key=lambda k: (cells[k[0]].dim, k[0], cells[k[1]].dim, k[1], k[2]))
    arrows = [Arrow(i, s, t, sh, seen[(s, t, sh)]) for i, (s, t, sh) in enumerate(order)]
    return CellComplex(d, cells, arrows, points, circles)
