"""Line bundle cohomology on the toric stack ``(A^n - Z) / G``.

``H^i(O(D))`` splits over characters ``m`` of the dense torus.  The degree-m
piece is the reduced cohomology, shifted down by one, of the subcomplex of
the fan's simplicial complex spanned by the rays with ``<m, v_rho> < -D_rho``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import itertools
import math

from . import fan as fanmod
from . import lattice_core, linalg


class NotSimplicial(ValueError):
    pass


class NotComplete(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    lift: tuple
    cls: tuple      # (free coordinates, torsion residues) in Cl = Z^n / M


def divisor_class(fd, lift):
    cs = lattice_core.character_sequence(fd.f, fd.n)
    lift = tuple(int(x) for x in lift)
    return DivisorClass(lift, cs.canonical(lift))


def class_group(fd):
    return lattice_core.character_sequence(fd.f, fd.n).quotient


@dataclass(frozen=True)
class CohomologyTable:
    dims: tuple
    truncated: bool = False
    per_degree: dict = field(default=None, compare=False, repr=False)

    def to_json(self, cls=None):
        out = {"h": list(self.dims), "truncated": self.truncated}
        if cls is not None:
            out = {"class": list(cls), **out}
        return out


def _lift(D):
    return tuple(D.lift) if isinstance(D, DivisorClass) else tuple(int(x) for x in D)


def chamber_box(fd, D):
    """Box hull of all chamber vertices, padded by one."""
    lo = [0] * fd.d
    hi = [0] * fd.d
    for S in itertools.combinations(range(fd.n), fd.d):
        A = [list(fd.rays[i]) for i in S]
        if linalg.rank(A, fd.d) < fd.d:
            continue
        m = linalg.solve(A, fd.d, [-D[i] for i in S])
        for k in range(fd.d):
            lo[k] = min(lo[k], math.floor(m[k]))
            hi[k] = max(hi[k], math.ceil(m[k]))
    return [(a - 1, b + 1) for a, b in zip(lo, hi)]


def _reduced_cohomology(simplices, top):
    """Reduced cohomology dims (degrees -1..top) of a simplicial complex."""
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    for k in by_dim:
        by_dim[k].sort()
    index = {k: {s: i for i, s in enumerate(v)} for k, v in by_dim.items()}

    def delta_rank(k):   # coboundary C^k -> C^{k+1}
        hi = by_dim.get(k + 1, [])
        if not hi or not by_dim.get(k):
            return 0
        rows = []
        for s in hi:
            row = {}
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                row[index[k][face]] = (-1) ** j
            rows.append(row)
        return linalg.sparse_rank(rows)

    ranks = {k: delta_rank(k) for k in range(-2, top + 1)}
    return [len(by_dim.get(k, [])) - ranks[k] - ranks.get(k - 1, 0)
            for k in range(-1, top + 1)]


def _check(fd, box):
    fanmod.require_valid(fd)
    if not fanmod.is_simplicial(fd):
        raise NotSimplicial(fd.name or "fan is not simplicial")
    complete = fanmod.is_complete(fd)
    if not complete and box is None:
        raise NotComplete("non-complete fan needs an explicit degree box")
    return complete


def cohomology_dims(fd, D, box=None, keep_degrees=False):
    """``h^i(Y, O(D))`` for ``i = 0..d`` by the chamber method."""
    complete = _check(fd, box)
    D = _lift(D)
    region = box if box is not None else chamber_box(fd, D)
    strata = [tuple(sorted(S)) for S in fd.strata]
    cache = {}
    dims = [0] * (fd.d + 1)
    per = {} if keep_degrees else None
    for m in itertools.product(*(range(a, b + 1) for a, b in region)):
        neg = frozenset(i for i in range(fd.n)
                        if sum(a * b for a, b in zip(m, fd.rays[i])) < -D[i])
        h = cache.get(neg)
        if h is None:
            sub = [S for S in strata if set(S) <= neg]
            h = _reduced_cohomology(sub, fd.d)
            cache[neg] = h
        for i in range(fd.d + 1):
            if h[i]:
                dims[i] += h[i]
                if per is not None:
                    per.setdefault(m, [0] * (fd.d + 1))[i] += h[i]
    return CohomologyTable(tuple(dims), truncated=not complete, per_degree=per)


def hom_dims(fd, D1, D2, box=None):
    """``Ext^i(O(D1), O(D2)) = h^i(O(D2 - D1))``."""
    a, b = _lift(D1), _lift(D2)
    return cohomology_dims(fd, tuple(y - x for x, y in zip(a, b)), box=box)


def hom_matrix(fd, classes, box=None):
    return [[hom_dims(fd, c1, c2, box=box) for c2 in classes] for c1 in classes]


def canonical_lift(fd):
    return tuple([-1] * fd.n)


def lift_from_class_coordinates(fd, free, torsion=()):
    cs = lattice_core.character_sequence(fd.f, fd.n)
    return cs.lift((tuple(free), tuple(torsion)))
