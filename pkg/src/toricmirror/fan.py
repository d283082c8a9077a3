"""Fan data: a ray map ``f: Z^n -> N`` and a set of coordinate strata.

A stratum is stored by its *support* ``S``: the closed coordinate face
``{x in R^n_{>=0} : x_i = 0 for i not in S}``.  Indices are 0-based in
memory and 1-based in files and reports.

Closure convention: a stratum's sub-strata are the supports of the faces of
its image cone ``f(S)``.  For simplicial cones these are all subsets of
``S``; for a non-simplicial cone (e.g. the cone over a square) diagonals
are not faces and need not be listed.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import itertools
import json

from . import lattice_core, lp


class InvalidFan(ValueError):
    pass


class UnknownName(KeyError):
    pass


@dataclass(frozen=True)
class FanData:
    n: int
    d: int
    rays: tuple                  # n tuples of length d (the columns of f)
    strata: frozenset            # frozensets of 0-based indices
    name: str = ""
    closure_added: tuple = field(default=(), compare=False)

    @property
    def f(self):
        """The ray map as a d x n integer matrix."""
        return [[self.rays[i][k] for i in range(self.n)] for k in range(self.d)]

    def ray_matrix(self, S):
        S = sorted(S)
        return [[self.rays[i][k] for i in S] for k in range(self.d)]

    def sorted_strata(self):
        return sorted(self.strata, key=lambda S: (len(S), sorted(S)))


def fan(rays, strata, name="", complete_closure=True):
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    n = len(rays)
    d = len(rays[0]) if rays else 0
    strata = frozenset(frozenset(S) for S in strata)
    fd = FanData(n, d, rays, strata, name)
    if complete_closure:
        fd = close_strata(fd)
    return fd


def face_supports(fd, S):
    """Supports of the faces of the cone ``f(S)``: subsets ``P`` of ``S`` cut out
    by a supporting functional vanishing exactly on ``P``."""
    return set(_face_supports(fd.rays, fd.d, tuple(sorted(S))))


@lru_cache(maxsize=100000)
def _face_supports(rays, d, S):
    out = set()
    for k in range(len(S) + 1):
        for P in itertools.combinations(S, k):
            rest = [i for i in S if i not in P]
            A_eq = [list(rays[i]) for i in P]
            A_ub = [[-x for x in rays[i]] for i in rest]
            if lp.is_feasible(A_eq=A_eq, b_eq=[0] * len(P), A_ub=A_ub,
                              b_ub=[-1] * len(rest), nvars=d):
                out.add(frozenset(P))
    return frozenset(out)


def close_strata(fd):
    """Complete the strata under face sub-strata, adding the empty stratum and rays."""
    strata = set(fd.strata) | {frozenset()} | {frozenset([i]) for i in range(fd.n)}
    todo = list(strata)
    while todo:
        S = todo.pop()
        if len(S) <= 1:
            continue
        for P in face_supports(fd, S):
            if P not in strata:
                strata.add(P)
                todo.append(P)
    added = tuple(sorted((tuple(sorted(S)) for S in strata - set(fd.strata)),
                         key=lambda s: (len(s), s)))
    return FanData(fd.n, fd.d, fd.rays, frozenset(strata), fd.name, added)


def relint_disjoint(fd, S, T):
    """True iff the relative interiors of ``f(S)`` and ``f(T)`` are disjoint."""
    return relint_witness(fd, S, T) is None


def relint_witness(fd, S, T):
    """A common point of the relative interiors, or ``None``."""
    return _relint_witness(fd.rays, fd.d, tuple(sorted(S)), tuple(sorted(T)))


@lru_cache(maxsize=1000000)
def _relint_witness(rays, d, S, T):
    nv = len(S) + len(T)
    A = [[rays[i][k] for i in S] + [-rays[j][k] for j in T] for k in range(d)]
    pt = lp.feasible_point(A_eq=A, b_eq=[0] * d, lower=[1] * nv, nvars=nv)
    if pt is None:
        return None
    return tuple(sum(pt[a] * rays[i][k] for a, i in enumerate(S)) for k in range(d))


@dataclass
class ValidationReport:
    violations: list

    @property
    def valid(self):
        return not self.violations

    def lines(self):
        return [f"- {kind}: {msg}" for kind, msg, _ in self.violations]


def _fmt(S):
    return "{" + ",".join(str(i + 1) for i in sorted(S)) + "}"


def validate(fd):
    return _validate(fd)


@lru_cache(maxsize=4096)
def _validate(fd):
    v = []
    if fd.n == 0:
        v.append(("empty", "no rays", None))
        return ValidationReport(v)
    if any(len(r) != fd.d for r in fd.rays):
        v.append(("shape", "rays have inconsistent length", None))
        return ValidationReport(v)
    rk = lattice_core.int_rank(fd.f, fd.n)
    if rk != fd.d:
        v.append(("rank", f"ray map has rank {rk} < d = {fd.d}; not rationally surjective", rk))
    if any(max(S, default=-1) >= fd.n for S in fd.strata):
        v.append(("index", "stratum refers to a ray index > n", None))
        return ValidationReport(v)
    if frozenset() not in fd.strata:
        v.append(("closure", "the zero stratum {} is missing", frozenset()))
    for i in range(fd.n):
        if frozenset([i]) not in fd.strata:
            v.append(("rays", f"coordinate ray {i + 1} is missing", frozenset([i])))
    for S in fd.sorted_strata():
        if len(S) > 1:
            for P in sorted(face_supports(fd, S), key=lambda P: (len(P), sorted(P))):
                if P not in fd.strata:
                    v.append(("closure", f"face {_fmt(P)} of stratum {_fmt(S)} is missing", (S, P)))
    strata = fd.sorted_strata()
    for a, S in enumerate(strata):
        for T in strata[a + 1:]:
            w = relint_witness(fd, S, T)
            if w is not None:
                pt = "(" + ",".join(str(x) for x in w) + ")"
                v.append(("disjoint", f"relative interiors of f{_fmt(S)} and f{_fmt(T)} "
                          f"meet at {pt}", (S, T, w)))
    return ValidationReport(v)


def require_valid(fd):
    rep = validate(fd)
    if not rep.valid:
        raise InvalidFan("; ".join(m for _, m, _ in rep.violations))


def is_simplicial(fd):
    require_valid(fd)
    return all(lattice_core.int_rank(fd.ray_matrix(S), len(S)) == len(S)
               for S in fd.strata if S)


def is_complete(fd):
    """Pure of dimension d and every (d-1)-cone lies in exactly two d-cones."""
    ranks = {S: (lattice_core.int_rank(fd.ray_matrix(S), len(S)) if S else 0) for S in fd.strata}
    top = [S for S, r in ranks.items() if r == fd.d]
    if not top:
        return False
    for S, r in ranks.items():
        if r < fd.d and not any(S < T for T in top):
            return False
        if r == fd.d - 1 and sum(1 for T in top if S < T) != 2:
            return False
    return True


@dataclass(frozen=True)
class IrrelevantLocus:
    n: int
    components: tuple     # sorted tuples of 0-based indices; V(S) = {x_i = 0, i in S}

    def describe(self):
        if not self.components:
            return "Z = empty"
        return "Z = " + " u ".join(
            "V(" + ",".join(f"x{i + 1}" for i in S) + ")" for S in self.components)


def irrelevant_locus(fd):
    """Minimal coordinate sets ``S`` whose face is not contained in any stratum."""
    require_valid(fd)
    down = set()
    for S in fd.strata:
        for k in range(len(S) + 1):
            down.update(frozenset(P) for P in itertools.combinations(sorted(S), k))
    minimal = []
    for k in range(fd.n + 1):
        for S in itertools.combinations(range(fd.n), k):
            fs = frozenset(S)
            if fs in down or any(set(m) <= fs for m in minimal):
                continue
            minimal.append(S)
    return IrrelevantLocus(fd.n, tuple(minimal))


# -- standard fans ---------------------------------------------------------

def _all_subsets(n, exclude=()):
    ex = {frozenset(e) for e in exclude}
    return [frozenset(S) for k in range(n + 1) for S in itertools.combinations(range(n), k)
            if frozenset(S) not in ex]


def standard_fan(name, *params):
    if name == "affine":
        (n,) = params
        rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        fd = fan(rays, _all_subsets(n), f"affine({n})")
    elif name == "projective":
        (n,) = params
        rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
        fd = fan(rays, _all_subsets(n + 1, [range(n + 1)]), f"projective({n})")
    elif name == "weighted_projective":
        w = list(params[0]) if len(params) == 1 and not isinstance(params[0], int) else list(params)
        k = len(w)
        kb = lattice_core.kernel_basis([w], k)
        rays = [tuple(v[i] for v in kb) for i in range(k)]
        fd = fan(rays, _all_subsets(k, [range(k)]),
                 "weighted_projective(" + ",".join(map(str, w)) + ")")
    elif name == "hirzebruch":
        (a,) = params
        rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
        fd = fan(rays, [{0, 1}, {1, 2}, {2, 3}, {3, 0}], f"hirzebruch({a})")
    elif name == "product":
        fd1, fd2 = params
        rays = [tuple(r) + (0,) * fd2.d for r in fd1.rays] + \
               [(0,) * fd1.d + tuple(r) for r in fd2.rays]
        strata = [S | frozenset(i + fd1.n for i in T) for S in fd1.strata for T in fd2.strata]
        fd = fan(rays, strata, f"{fd1.name}x{fd2.name}")
    elif name == "p2_minus_vertex":
        rays = [(1, 0), (0, 1), (-1, -1)]
        fd = fan(rays, _all_subsets(3, [(0, 1, 2), (1, 2)]), "p2_minus_vertex")
    elif name == "cone_over_square":
        rays = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
        fd = fan(rays, [{0, 1, 2, 3}], "cone_over_square")
    else:
        raise UnknownName(name)
    require_valid(fd)
    return fd


# -- files -------------------------------------------------------------------

def fan_from_dict(data, name=""):
    n, d = int(data["n"]), int(data["d"])
    rays = data["rays"]
    if len(rays) != n or any(len(r) != d for r in rays):
        raise InvalidFan("rays do not match the declared n and d")
    strata = [frozenset(int(i) - 1 for i in S) for S in data.get("strata", [])]
    if any(i < 0 or i >= n for S in strata for i in S):
        raise InvalidFan("stratum index out of range 1..n")
    return fan(rays, strata, data.get("name", name))


def fan_to_dict(fd):
    return {
        "name": fd.name,
        "n": fd.n,
        "d": fd.d,
        "rays": [list(r) for r in fd.rays],
        "strata": [[i + 1 for i in sorted(S)] for S in fd.sorted_strata()],
    }


def load_fan(path):
    with open(path) as fh:
        data = json.load(fh)
    return fan_from_dict(data, name=str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0])
