"""Generators of the subcategory of sheaves with microsupport in a Lagrangian.

An arrow ``tau -> c`` is *forced* when every covector of the Lagrangian at
the point of ``tau`` is nonnegative on the whole branch ``c`` near ``tau``:
for such covectors the branch never lies below the point, so the
propagation condition along those directions forces ``F(tau) -> F(c)`` to
be an isomorphism.  Generators are the representables localized at the
forced arrows (one per class of cells glued by forced arrows), and every
candidate is checked against the full microsupport test afterwards.
"""
from dataclasses import dataclass
import logging

from .. import linalg
from .complex import build_adapted_complex
from .microsupport import violations
from .rhom import rhom
from .sheaf import constant, direct_sum, quotient, representable, subrep_generated

log = logging.getLogger(__name__)


class CodimTwoObstruction(RuntimeError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or []


class LocalizationDiverged(RuntimeError):
    pass


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _branch_cone(branch):
    if branch[0] == "ray":
        return [branch[1]]
    if branch[0] == "sector":
        return [branch[1], branch[2]]
    n, w = branch[1], branch[2]
    return [n, w, tuple(-x for x in w)]


def cone_generators_at(components, point):
    gens = []
    for comp in components:
        if comp.base.contains(point):
            gens.extend(comp.cone)
    return gens


def forced_arrows(cx, components):
    out = []
    for arr in cx.arrows:
        gens = cone_generators_at(components, cx.cells[arr.src].sample)
        dirs = _branch_cone(arr.branch)
        if all(_dot(g, u) >= 0 for g in gens for u in dirs):
            out.append(arr.index)
    return out


def forced_classes(cx, W):
    parent = list(range(len(cx.cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in W:
        x, y = find(cx.arrows[a].src), find(cx.arrows[a].tgt)
        if x != y:
            parent[max(x, y)] = min(x, y)
    classes = {}
    for c in cx.cells:
        classes.setdefault(find(c.index), []).append(c.index)
    return sorted(tuple(v) for v in classes.values())


def localize(F, W, cap=64):
    """Universal map from ``F`` to a representation inverting the arrows ``W``."""
    cx = F.cx
    while True:
        if F.total_dim > cap:
            raise LocalizationDiverged(f"localization exceeded total dimension {cap}")
        kern = {}
        for a in W:
            src = cx.arrows[a].src
            if F.dims[src] and F.maps[a]:
                ker = linalg.nullspace(F.maps[a], F.dims[src])
            else:
                ker = linalg.identity(F.dims[src]) if F.dims[src] else []
            if ker:
                kern.setdefault(src, []).extend(ker)
        if kern:
            F = quotient(F, subrep_generated(F, kern))
            continue
        for a in W:
            arr = cx.arrows[a]
            img = linalg.transpose(F.maps[a], F.dims[arr.src]) if F.dims[arr.src] else []
            missing = linalg.complement_basis(img, F.dims[arr.tgt]) if img else \
                linalg.identity(F.dims[arr.tgt])
            if missing:
                break
        else:
            return F
        P = representable(cx, arr.src)
        ext = direct_sum(F, *([P] * len(missing)))
        pos = cx.hom(arr.src, arr.tgt)
        k = pos.index(a)
        rels = []
        for j, y in enumerate(missing):
            v = list(y) + [0] * (ext.dims[arr.tgt] - F.dims[arr.tgt])
            v[F.dims[arr.tgt] + j * P.dims[arr.tgt] + k] = -1
            rels.append(v)
        F = quotient(ext, subrep_generated(ext, {arr.tgt: rels}))


@dataclass
class Generator:
    cells: tuple          # class of cells glued by forced arrows
    sheaf: object
    fallback: bool = False


def generators(components, cx=None, cap=64):
    components = list(components)
    cx = cx or build_adapted_complex(components)
    W = forced_arrows(cx, components)
    out = []
    for cls in forced_classes(cx, W):
        try:
            G = localize(representable(cx, cls[0]), W, cap)
            fallback = False
        except LocalizationDiverged:
            log.info("localization at %s diverges; using the constant sheaf", cls)
            G, fallback = constant(cx), True
        G.check()
        bad = violations(G, components)
        if bad:
            raise CodimTwoObstruction(
                f"candidate generator for cells {cls} leaves the Lagrangian", bad)
        out.append(Generator(cls, G, fallback))
    return out


def hom_matrix(gens):
    return [[rhom(a.sheaf, b.sheaf) for b in gens] for a in gens]


def full_subcategory_defects(gens):
    """Pairs whose ambient RHom differs from the localized representable Hom."""
    out = []
    for a in gens:
        for b in gens:
            if a.fallback or b.fallback:
                continue
            want = (b.sheaf.dims[a.cells[0]],) + (0,) * a.sheaf.cx.d
            got = rhom(a.sheaf, b.sheaf)
            if got != want:
                out.append((a.cells, b.cells, got, want))
    return out
