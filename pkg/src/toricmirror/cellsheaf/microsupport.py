"""Microsupport of cellular sheaves, tested chamber by chamber.

At a cell ``tau`` with sample point ``p`` and a covector ``xi``, put
``l(x) = xi . (x - p)``.  The covector is absent from the microsupport when
restriction from the star of ``tau`` to ``star(tau) n {l < 0}`` is a
quasi-isomorphism.  Sections over the star are ``F(tau)``; sections over the
cut star are the homotopy limit over the branches meeting ``{l < 0}``, which
(branches form a poset of height at most two) is

    prod_{x in U} F(x)  ->  prod_{(e -> f) in U} F(f).

``xi`` is present iff the fibre of ``F(tau) -> holim`` is nonzero.  Only
finitely many covector chambers need testing: the fibre depends on ``xi``
only through which branches it sends below ``p``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd, floor

from .. import linalg, lp
from .complex import UnsupportedDimension


class NonAdaptedComplex(ValueError):
    pass


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v):
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cr = a[0] * b[1] - a[1] * b[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


@dataclass(frozen=True)
class Chamber:
    kind: str           # "zero", "ray" or "sector"
    xi: tuple           # representative covector
    walls: tuple = ()   # bounding rays of a sector

    def __repr__(self):
        return f"{self.kind}{self.xi}"


def _in_U(branch, xi):
    kind = branch[0]
    if kind == "ray":
        return _dot(xi, branch[1]) < 0
    if kind == "sector":
        return _dot(xi, branch[1]) < 0 or _dot(xi, branch[2]) < 0
    n, w = branch[1], branch[2]
    return _dot(xi, n) < 0 or _dot(xi, w) != 0


def chambers(cx, tau):
    cell = cx.cells[tau]
    zero = Chamber("zero", (0,) * cx.d)
    if cell.dim == cx.d:
        return [zero]
    if cx.d == 1:
        return [zero, Chamber("ray", (1,)), Chamber("ray", (-1,))]
    if cell.dim == 1:
        a, b = cell.geom
        w = (b[0] - a[0], b[1] - a[1])
        nu = _primitive((-w[1], w[0]))
        return [zero, Chamber("ray", nu), Chamber("ray", tuple(-x for x in nu))]
    dirs = set()
    for a in cx.out_arrows[tau]:
        br = cx.arrows[a].branch
        if br[0] == "ray":
            u = br[1]
            nu = _primitive((-u[1], u[0]))
            dirs.add(nu)
            dirs.add(tuple(-x for x in nu))
    rays = sorted(dirs, key=cmp_to_key(_angle_cmp))
    out = [zero] + [Chamber("ray", r) for r in rays]
    for k, r in enumerate(rays):
        s = rays[(k + 1) % len(rays)]
        cr = r[0] * s[1] - r[1] * s[0]
        rep = (r[0] + s[0], r[1] + s[1]) if cr > 0 else (-r[1], r[0])
        out.append(Chamber("sector", _primitive(rep), (r, s)))
    return out


def fiber_dims(F, tau, xi):
    """Cohomology dims of ``fib(F(tau) -> holim over the cut star)``."""
    cx = F.cx
    U = [a for a in cx.out_arrows[tau] if _in_U(cx.arrows[a].branch, xi)]
    Uset = set(U)
    off1, n1 = {}, 0
    for a in U:
        off1[a] = n1
        n1 += F.dims[cx.arrows[a].tgt]
    pairs = []
    for a in U:
        for e in cx.out_arrows[cx.arrows[a].tgt]:
            c = cx.compose(a, e)
            if c in Uset:
                pairs.append((a, e, c))
    n0 = F.dims[tau]
    n2 = sum(F.dims[cx.arrows[e].tgt] for _, e, _ in pairs)
    # d0: F(tau) -> sum F(x), rows indexed by degree-1 coordinates
    d0 = []
    for a in U:
        d0.extend({j: x for j, x in enumerate(row) if x} for row in F.maps[a])
    d1 = []
    for a, e, c in pairs:
        fe = F.maps[e]
        for r, row in enumerate(fe):
            entry = {off1[a] + j: x for j, x in enumerate(row) if x}
            k = off1[c] + r
            entry[k] = entry.get(k, 0) - 1
            d1.append({j: x for j, x in entry.items() if x})
    r0 = linalg.sparse_rank(d0)
    r1 = linalg.sparse_rank(d1)
    return (n0 - r0, n1 - r0 - r1, n2 - r1)


@dataclass
class MicroSupportReport:
    """``entries`` holds ``(cell, chamber, present, dims)``.

    ``dims`` are the fibre dims of the pointwise test.  ``present`` is the
    closure: the zero covector marks the closed support, and a wall ray at
    a vertex is also present when an adjacent sector or the incident edge's
    conormal in that direction is.
    """
    entries: list = field(default_factory=list)

    def present(self):
        return [(c, ch) for c, ch, p, _ in self.entries if p]

    def pointwise(self):
        return [(c, ch) for c, ch, _, d in self.entries if any(d) and ch.kind != "zero"]

    def is_empty(self):
        return not self.present()

    def at(self, cell):
        return {ch: p for c, ch, p, _ in self.entries if c == cell}

    def zero_section_only(self):
        return all(ch.kind == "zero" for _, ch in self.present())

    def is_closed(self):
        """Present chambers at each cell are closed under taking boundaries."""
        for cell in {c for c, _, _, _ in self.entries}:
            table = self.at(cell)
            by_xi = {(ch.kind, ch.xi): p for ch, p in table.items()}
            for ch, p in table.items():
                if not p:
                    continue
                if not by_xi.get(("zero", tuple(0 for _ in ch.xi))):
                    return False
                if ch.kind == "sector" and not all(by_xi.get(("ray", w)) for w in ch.walls):
                    return False
        return True

    def to_json(self):
        return [{"cell": c, "kind": ch.kind, "xi": list(ch.xi), "present": p, "dims": list(d)}
                for c, ch, p, d in self.entries]


def microsupport(F):
    cx = F.cx
    if cx.d not in (1, 2):
        raise UnsupportedDimension("microsupport is implemented for d <= 2")
    raw = {}
    for cell in cx.cells:
        for ch in chambers(cx, cell.index):
            raw[cell.index, ch] = fiber_dims(F, cell.index, ch.xi)
    hit = {key for key, d in raw.items() if any(d) and key[1].kind != "zero"}
    for (c, ch) in list(hit):
        if ch.kind == "sector":
            hit.update((c, Chamber("ray", w)) for w in ch.walls)
    for a in cx.arrows:
        if cx.cells[a.src].dim == 0 and cx.cells[a.tgt].dim == 1 and cx.d == 2:
            for ch in chambers(cx, a.tgt):
                if ch.kind == "ray" and (a.tgt, ch) in hit:
                    hit.add((a.src, ch))
    rep = MicroSupportReport()
    for (c, ch), dims in raw.items():
        if ch.kind == "zero":
            star = [F.dims[c]] + [F.dims[cx.arrows[a].tgt] for a in cx.out_arrows[c]]
            present = any(star) or any(k == c for k, _ in hit)
        else:
            present = (c, ch) in hit
        rep.entries.append((c, ch, present, dims))
    return rep


# -- membership in a conic Lagrangian -----------------------------------------

def check_adapted(cx, components):
    from .complex import loci_from_components
    pts, circs = loci_from_components(components, cx.d)
    vkeys = {c.key for c in cx.cells if c.dim == 0}
    for p in pts:
        if p not in vkeys:
            raise NonAdaptedComplex(f"point locus {p} is not a vertex")
    for circ in circs:
        for cell in cx.cells:
            if cell.dim != 2:
                continue
            vals = [_dot(circ.normal, q) for q in cell.geom]
            lo, hi = min(vals), max(vals)
            k = floor(lo - circ.offset) + 1
            if circ.offset + k < hi:
                raise NonAdaptedComplex(f"circle {circ} crosses the face {cell}")


def in_lambda(components, point, xi):
    for comp in components:
        if comp.base.contains(point):
            if all(x == 0 for x in xi) or (comp.cone and lp.in_cone(xi, list(comp.cone))):
                return True
    return False


def violations(F, components, report=None):
    check_adapted(F.cx, components)
    report = report or microsupport(F)
    out = []
    for c, ch in report.present():
        if not in_lambda(components, F.cx.cells[c].sample, ch.xi):
            out.append((c, ch))
    return out


def in_subcategory(F, components, report=None):
    return not violations(F, components, report)
