"""Conic Lagrangians attached to fan data.

Sign conventions (shared with ``cellsheaf``): the cotangent fibre of the
torus ``A_gamma = M_R / M`` is identified with ``N_R``, a covector ``xi``
pairs with a tangent vector ``u`` in M-coordinates by the dot product, and
the stratum ``S`` contributes the cone generated by ``-f(e_i)``, ``i in S``.

``M`` is embedded in ``Z^n`` as the image of the transpose of the ray
matrix, so M-coordinates are the standard coordinates of ``Z^d`` and
``<iota(m), e_i> = <m, f(e_i)>``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import logging

from . import fan as fanmod
from . import lattice_core, lp

log = logging.getLogger(__name__)


class DimensionTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AffineSubtorus:
    """A finite union of parallel affine subtori of ``R^k / L``.

    Membership is decided by the defining congruences ``G p = target (mod 1)``.
    ``periodic_rank`` counts independent lattice translations producing further
    components when the ambient is not compact.
    """
    ambient: str
    dim: int
    direction: tuple
    cosets: tuple
    G: tuple = ()
    target: tuple = ()
    periodic_rank: int = 0

    @property
    def base_dim(self):
        return len(self.direction)

    def contains(self, p):
        for row, t in zip(self.G, self.target):
            if (sum(Fraction(a) * x for a, x in zip(row, p)) - t).denominator != 1:
                return False
        return True


@dataclass(frozen=True)
class SkeletonComponent:
    stratum: tuple                    # sorted 0-based ray indices
    base: AffineSubtorus
    cone: tuple                       # generator vectors

    @property
    def base_dim(self):
        return self.base.base_dim

    @property
    def cone_dim(self):
        return lattice_core.int_rank([list(g) for g in self.cone], len(self.cone[0])) if self.cone else 0

    def signature(self):
        """Position-free description used to compare skeleta at different gamma."""
        return (self.stratum, self.base_dim, len(self.base.cosets), self.cone)

    def to_json(self):
        return {
            "stratum": [i + 1 for i in self.stratum],
            "base": {
                "direction": [list(v) for v in self.base.direction],
                "cosets": [[str(x) for x in p] for p in self.base.cosets],
                "periodic_rank": self.base.periodic_rank,
            },
            "cone": {"generators": [list(g) for g in self.cone]},
        }


def _frac_vec(v):
    return tuple(Fraction(x) for x in v)


def lambda_Z(fd):
    """Components of the upstairs skeleton in ``T^*(R/Z)^n``: one per stratum."""
    fanmod.require_valid(fd)
    return _lambda_Z_formula(fd.n, fd.sorted_strata())


def _lambda_Z_formula(n, strata):
    out = []
    for S in strata:
        S = tuple(sorted(S))
        G = [[int(j == i) for j in range(n)] for i in S]
        fam = lattice_core.solve_congruences(G, [0] * len(S), n)
        base = AffineSubtorus(f"(R/Z)^{n}", n, fam.direction, fam.cosets, fam.G, fam.target)
        cone = tuple(tuple(-int(j == i) for j in range(n)) for i in S)
        out.append(SkeletonComponent(S, base, cone))
    return out


def lambda_ZM(fd):
    """Components of the preimage skeleton in ``T^*(R^n / M)``."""
    fanmod.require_valid(fd)
    cs = lattice_core.character_sequence(fd.f, fd.n)
    Mi = cs.M_inclusion
    out = []
    for S in fd.sorted_strata():
        S = tuple(sorted(S))
        direction = tuple(tuple(int(j == k) for j in range(fd.n)) for k in range(fd.n) if k not in S)
        if S:
            proj = [Mi[i] for i in S]
            pres, qmap = lattice_core._quotient(proj, len(S), fd.d)
            reps = []
            for res in itertools.product(*(range(s) for s in pres.invariant_factors)):
                z = qmap.lift(((0,) * pres.rank, tuple(res)))
                p = [Fraction(0)] * fd.n
                for i, zi in zip(S, z):
                    p[i] = Fraction(zi)
                reps.append(tuple(p))
            periodic = pres.rank
        else:
            reps, periodic = [tuple(Fraction(0) for _ in range(fd.n))], 0
        G = tuple(tuple(int(j == i) for j in range(fd.n)) for i in S)
        base = AffineSubtorus("R^n/M", fd.n, direction, tuple(sorted(reps)), G,
                              tuple(Fraction(0) for _ in S), periodic)
        cone = tuple(tuple(-int(j == i) for j in range(fd.n)) for i in S)
        out.append(SkeletonComponent(S, base, cone))
    return out


def gamma_lift(fd, gamma):
    g = tuple(Fraction(x) for x in gamma)
    if len(g) != fd.n:
        raise ValueError(f"gamma lift must have {fd.n} entries")
    return g


def reduced_base(fd, S, gamma):
    x = gamma_lift(fd, gamma)
    S = tuple(sorted(S))
    G = [list(fd.rays[i]) for i in S]
    fam = lattice_core.solve_congruences(G, [-x[i] for i in S], fd.d)
    return AffineSubtorus(f"R^{fd.d}/M", fd.d, fam.direction, fam.cosets, fam.G, fam.target)


def reduce(fd, gamma):
    """Components of the reduced skeleton over ``A_gamma``; empty bases are logged and dropped."""
    fanmod.require_valid(fd)
    out = []
    for S in fd.sorted_strata():
        S = tuple(sorted(S))
        base = reduced_base(fd, S, gamma)
        if not base.cosets:
            log.info("stratum %s has empty base at gamma=%s", [i + 1 for i in S],
                     [str(v) for v in gamma])
            continue
        cone = tuple(tuple(-x for x in fd.rays[i]) for i in S)
        out.append(SkeletonComponent(S, base, cone))
    return out


def base_emptiness(fd, gamma):
    return {tuple(sorted(S)): not reduced_base(fd, S, gamma).cosets for S in fd.sorted_strata()}


def is_noncharacteristic(fd):
    return noncharacteristic_witness(fd) is None


def noncharacteristic_witness(fd):
    """A stratum and a nonzero fibre covector in the linear span of its conormal piece.

    The piece of the skeleton over a stratum ``S`` is an open subset of the
    conormal ``R^S`` of its base, so the test is whether ``R^S`` meets the
    fibre conormal ``ker f``.  Each orthant of ``R^S`` is one exact LP.
    """
    fanmod.require_valid(fd)
    for S in fd.sorted_strata():
        S = sorted(S)
        if not S:
            continue
        for signs in itertools.product((1, -1), repeat=len(S) - 1):
            eps = (1,) + signs
            A = [[e * fd.rays[i][k] for e, i in zip(eps, S)] for k in range(fd.d)]
            A.append([1] * len(S))
            pt = lp.feasible_point(A_eq=A, b_eq=[0] * fd.d + [1], lower=[0] * len(S),
                                   nvars=len(S))
            if pt is not None:
                vec = [Fraction(0)] * fd.n
                for e, i, y in zip(eps, S, pt):
                    vec[i] = -e * y
                return tuple(S), tuple(vec)
    return None


def is_submersive(fd):
    """Every base's linear part surjects onto ``R^n / M_R``."""
    fanmod.require_valid(fd)
    cs = lattice_core.character_sequence(fd.f, fd.n)
    mcols = [list(c) for c in lattice_core.columns(cs.M_inclusion, fd.d)]
    for S in fd.strata:
        vecs = [[int(j == k) for j in range(fd.n)] for k in range(fd.n) if k not in S] + mcols
        if lattice_core.int_rank(vecs, fd.n) != fd.n:
            return False
    return True


@dataclass
class EquivalenceReport:
    simplicial: bool
    noncharacteristic: bool
    submersive: bool
    witness: object = None

    @property
    def agree(self):
        return self.simplicial == self.noncharacteristic == self.submersive

    def as_tuple(self):
        return (self.simplicial, self.noncharacteristic, self.submersive)


def check_equivalence(fd):
    w = noncharacteristic_witness(fd)
    rep = EquivalenceReport(fanmod.is_simplicial(fd), w is None, is_submersive(fd), w)
    if not rep.agree:
        log.warning("equivalence defect for %s: %s", fd.name, rep.as_tuple())
    return rep


# -- drawing -----------------------------------------------------------------

def _fmt(x, scale=200):
    v = round(Fraction(x) * scale * 1000)
    sign = "-" if v < 0 else ""
    q, r = divmod(abs(v), 1000)
    return f"{sign}{q}.{r:03d}".rstrip("0").rstrip(".")


def _clip_line(nu, c):
    """Segments of ``nu . m = c (mod 1)`` inside the unit square."""
    a, b = nu
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    vals = [a * x + b * y for x, y in corners]
    lo, hi = min(vals), max(vals)
    segs = []
    k0 = int(Fraction(lo - c).__floor__())
    for k in range(k0, int(Fraction(hi - c).__ceil__()) + 1):
        L = c + k
        pts = set()
        for x in (0, 1):
            if b:
                y = (L - a * x) / Fraction(b)
                if 0 <= y <= 1:
                    pts.add((Fraction(x), y))
        for y in (0, 1):
            if a:
                x = (L - b * y) / Fraction(a)
                if 0 <= x <= 1:
                    pts.add((x, Fraction(y)))
        pts = sorted(pts)
        if len(pts) >= 2 and pts[0] != pts[-1]:
            segs.append((pts[0], pts[-1]))
    return segs


def emit_svg(fd, gamma):
    """Deterministic SVG drawing of the reduced skeleton on the unit square (d <= 2)."""
    if fd.d > 2:
        raise DimensionTooLarge(f"cannot draw a {fd.d}-torus")
    comps = reduce(fd, gamma)
    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="240" height="240" '
           'viewBox="-20 -20 240 240">',
           '<rect x="0" y="0" width="200" height="200" fill="none" stroke="#999"/>']
    glyph = Fraction(1, 12)

    def pt(p):
        if fd.d == 1:
            return Fraction(p[0]), Fraction(1, 2)
        return Fraction(p[0]), 1 - Fraction(p[1])

    def arrow(p, g):
        x, y = pt(p)
        gx = Fraction(g[0])
        gy = Fraction(g[1]) if fd.d == 2 else Fraction(0)
        n = max(abs(gx), abs(gy))
        ex, ey = x + glyph * gx / n, y - glyph * gy / n
        return (f'<line class="cone" x1="{_fmt(x)}" y1="{_fmt(y)}" x2="{_fmt(ex)}" '
                f'y2="{_fmt(ey)}" stroke="#c00"/>')

    for comp in comps:
        if comp.base_dim == fd.d:
            continue
        for p in comp.base.cosets:
            if comp.base_dim == 1:
                w = comp.base.direction[0]
                nu = (-w[1], w[0])
                c = nu[0] * p[0] + nu[1] * p[1]
                segs = _clip_line(nu, c)
                for (x1, y1), (x2, y2) in segs:
                    a, b = pt((x1, y1)), pt((x2, y2))
                    out.append(f'<line class="locus" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
                               f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" stroke="#000"/>')
                if segs:
                    (x1, y1), (x2, y2) = segs[0]
                    mid = ((x1 + x2) / 2, (y1 + y2) / 2)
                    out.extend(arrow(mid, g) for g in comp.cone)
            else:
                x, y = pt(p)
                out.append(f'<circle class="point" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3"/>')
                out.extend(arrow(p, g) for g in comp.cone)
    if fd.d == 1:
        out.append('<line class="torus" x1="0" y1="100" x2="200" y2="100" stroke="#999"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
