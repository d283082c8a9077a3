"""Cross-checks between the coherent side and the constructible side.

Hom matrices are lists of lists of per-degree dimension tuples.  Two
matrices *match* when some bijection of objects, an optional global
transpose, and one integer shift per object make them equal entrywise;
the witness ``{"permutation", "transpose", "shifts"}`` is stored in the
report and can be re-applied by ``recheck``.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
import itertools
import json
import logging
import random

from . import cox_coh, onedim_mirror
from . import fan as fanmod
from . import skeleton
from .cellsheaf.generators import generators, hom_matrix
from .cellsheaf.rhom import rhom
from .cellsheaf.sheaf import twist

log = logging.getLogger(__name__)

CHARACTERS = (Fraction(2), Fraction(-1), Fraction(3), Fraction(1, 2), Fraction(-2, 3))


def _plain(x):
    """JSON-ready copy with fractions as strings and tuples as lists."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class VerificationReport:
    test: str
    fan: str
    params: dict
    matrices: dict
    verdict: str
    witness: object = None
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict == "pass" and self.witness is None:
            raise ValueError("a passing report needs a witness")

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "test": self.test,
            "fan": self.fan,
            "inputs": _plain(self.params),
            "matrices": _plain(self.matrices),
            "verdict": self.verdict,
            "witness": _plain(self.witness),
            "warnings": list(self.warnings),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def merge_reports(reports):
    """Deterministic merge: sorted by test name, then fan, then inputs."""
    return sorted(reports, key=lambda r: (r.test, r.fan, json.dumps(_plain(r.params), sort_keys=True)))


def _pmap(fn, items, jobs):
    items = list(items)
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# -- matching ----------------------------------------------------------------

def _shifted(v, s):
    """Per-degree vector ``w`` with ``w[k] = v[k - s]``, or None if it leaves the range."""
    n = len(v)
    w = [0] * n
    for k, x in enumerate(v):
        if x:
            if not 0 <= k + s < n:
                return None
            w[k + s] = x
    return tuple(w)


def _entry(A, transpose, i, j):
    return tuple(A[j][i] if transpose else A[i][j])


def apply_witness(A, witness):
    """``A`` rearranged by the witness into the coordinates of the other matrix."""
    p, t, s = witness["permutation"], witness["transpose"], witness["shifts"]
    k = len(p)
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            out[i][j] = _shifted(_entry(A, t, p[i], p[j]), s[j] - s[i])
    return out


def recheck(A, B, witness):
    return apply_witness(A, witness) == [[tuple(x) for x in row] for row in B]


def match_matrices(A, B):
    """Witness that ``B`` is ``A`` up to permutation, transpose and shifts, or None."""
    k = len(B)
    if len(A) != k:
        return None
    if k == 0:
        return {"permutation": [], "transpose": False, "shifts": []}
    width = len(B[0][0]) if B[0] else 1
    B = [[tuple(x) for x in row] for row in B]
    for t in (False, True):
        for p in itertools.permutations(range(k)):
            if any(_entry(A, t, p[i], p[i]) != B[i][i] for i in range(k)):
                continue
            s = _shifts(A, B, t, p, width)
            if s is not None:
                return {"permutation": list(p), "transpose": t, "shifts": s}
    return None


def _shifts(A, B, t, p, width):
    k = len(B)
    s = [None] * k
    s[0] = 0

    def extend(i):
        if i == k:
            return True
        for c in range(-width, width + 1):
            s[i] = c
            if all(_shifted(_entry(A, t, p[a], p[b]), s[b] - s[a]) == B[a][b]
                   for a in range(i + 1) for b in range(i + 1) if a == i or b == i):
                if extend(i + 1):
                    return True
        s[i] = None
        return False

    return list(s) if extend(1) else None


def _entry_multiset(A):
    return sorted(tuple(x) for row in A for x in row)


# -- dimension one -------------------------------------------------------------

def _dim1_pair(args):
    idx, M, N, orientation = args
    FM, FN = onedim_mirror.mirror_1d(M, orientation), onedim_mirror.mirror_1d(N, orientation)
    ext = onedim_mirror.ext_dims_kt(M, N)
    rh = rhom(FM, FN)
    pull = onedim_mirror.pullback_at_zero(M)
    micro = onedim_mirror.microstalk_1d(FM)
    failures = []
    if ext != rh:
        failures.append(("ext", list(ext), list(rh)))
    if pull != micro:
        failures.append(("intertwine", list(pull), list(micro)))
    for chi in CHARACTERS:
        lhs = onedim_mirror.normalize_1d(twist(FM, (chi,)))
        rhs = onedim_mirror.mirror_1d(M.scaled(chi), orientation)
        if lhs.dims != rhs.dims or lhs.maps != rhs.maps:
            failures.append(("equivariance", str(chi)))
            break
        if rhom(lhs, twist(FN, (chi,))) != rh:
            failures.append(("twist-invariance", str(chi)))
            break
    row = {"pair": idx, "dims": [M.dim, N.dim], "ext": list(ext), "rhom": list(rh),
           "pullback": list(pull), "microstalk": list(micro)}
    return row, failures


def verify_dim1(seed, count, orientation=1, max_dim=4, jobs=1):
    """Run the one-dimensional suites on ``count`` seeded module pairs."""
    pairs = onedim_mirror.random_pairs(seed, count, max_dim)
    results = _pmap(_dim1_pair, [(i, M, N, orientation) for i, (M, N) in enumerate(pairs)], jobs)
    rows = [r for r, _ in results]
    params = {"seed": seed, "count": count, "orientation": orientation, "max_dim": max_dim,
              "characters": list(CHARACTERS)}
    warnings = []
    bad = [(i, f) for i, (_, f) in enumerate(results) if f]
    if bad:
        i, f = bad[0]
        M, N = pairs[i]
        witness = {"pair": i, "M": M.matrix(), "N": N.matrix(), "failures": f,
                   "failed_pairs": len(bad)}
        return VerificationReport("dim1", "circle", params, {"pairs": rows}, "fail", witness)
    if not count:
        warnings.append("vacuous pass: no module pairs were checked")
    digest = hashlib.sha256(json.dumps(_plain(rows), sort_keys=True).encode()).hexdigest()
    witness = {"pairs_checked": count, "sha256": digest}
    return VerificationReport("dim1", "circle", params, {"pairs": rows}, "pass", witness, warnings)


# -- quotient ------------------------------------------------------------------

def _require_quotient_input(fd):
    fanmod.require_valid(fd)
    if not fanmod.is_simplicial(fd):
        raise cox_coh.NotSimplicial(fd.name or "fan is not simplicial")
    if not fanmod.is_complete(fd):
        raise cox_coh.NotComplete(fd.name or "fan is not complete")
    if fd.d > 2:
        raise skeleton.DimensionTooLarge(f"sheaf engine supports d <= 2, got {fd.d}")


def a_side_matrix(fd, gamma=None):
    gamma = tuple(gamma) if gamma is not None else (0,) * fd.n
    gens = generators(skeleton.reduce(fd, gamma))
    return gens, [[tuple(x) for x in row] for row in hom_matrix(gens)]


def verify_quotient(fd, classes, gamma=None):
    _require_quotient_input(fd)
    classes = [cox_coh._lift(c) for c in classes]
    B = [[tuple(t.dims) for t in row] for row in cox_coh.hom_matrix(fd, classes)]
    gens, A = a_side_matrix(fd, gamma)
    params = {"classes": [list(c) for c in classes],
              "gamma": list(gamma) if gamma is not None else [0] * fd.n}
    mats = {"b_side": B, "a_side": A}
    warnings = [f"generator for cells {g.cells} is the constant fallback" for g in gens if g.fallback]
    if len(gens) != len(classes):
        witness = {"reason": "object count", "generators": len(gens), "classes": len(classes)}
        return VerificationReport("quotient", fd.name, params, mats, "fail", witness, warnings)
    w = match_matrices(A, B)
    if w is None:
        a_set, b_set = _entry_multiset(A), _entry_multiset(B)
        missing = [list(x) for x in b_set if b_set.count(x) > a_set.count(x)]
        witness = {"reason": "no permutation, transpose and shifts match",
                   "unmatched_b_entries": sorted(set(map(tuple, missing)))}
        return VerificationReport("quotient", fd.name, params, mats, "fail", witness, warnings)
    assert recheck(A, B, w)
    return VerificationReport("quotient", fd.name, params, mats, "pass", w, warnings)


# -- gamma independence ----------------------------------------------------------

def canonical_matrix(A):
    """Least rearrangement of ``A`` over object permutations and transpose."""
    k = len(A)
    best = None
    for t in (False, True):
        for p in itertools.permutations(range(k)):
            m = tuple(tuple(_entry(A, t, p[i], p[j]) for j in range(k)) for i in range(k))
            if best is None or m < best:
                best = m
    return [list(r) for r in best] if best is not None else []


def _gamma_data(args):
    fd, g, categorical = args
    comps = skeleton.reduce(fd, g)
    sig = sorted((list(c.stratum), c.base_dim, len(c.base.cosets), c.cone_dim) for c in comps)
    mat = canonical_matrix(a_side_matrix(fd, g)[1]) if categorical else None
    return sig, mat


def verify_gamma(fd, gammas, jobs=1):
    fanmod.require_valid(fd)
    gammas = [tuple(Fraction(x) for x in g) for g in gammas]
    params = {"gammas": [list(g) for g in gammas]}
    if not fanmod.is_simplicial(fd):
        pattern = {}
        for g in gammas:
            for S, empty in skeleton.base_emptiness(fd, g).items():
                pattern.setdefault(tuple(i + 1 for i in S), []).append(empty)
        varying = sorted(S for S, v in pattern.items() if len(set(v)) > 1)
        mats = {"emptiness": {",".join(map(str, S)): v for S, v in sorted(pattern.items())}}
        if varying:
            witness = {"varying_strata": [list(S) for S in varying]}
            return VerificationReport("gamma", fd.name, params, mats, "pass", witness)
        return VerificationReport("gamma", fd.name, params, mats, "fail",
                                  {"reason": "no base changes emptiness across gamma"},
                                  ["non-simplicial fan showed no gamma dependence"])
    categorical = fd.d <= 2
    warnings = [] if categorical else ["d > 2: only component data compared"]
    data = _pmap(_gamma_data, [(fd, g, categorical) for g in gammas], jobs)
    sigs = [s for s, _ in data]
    mats = [m for _, m in data]
    out = {"components": sigs, "a_side": mats}
    for i in range(1, len(data)):
        if sigs[i] != sigs[0] or mats[i] != mats[0]:
            witness = {"reason": "gamma dependence", "gamma_index": i}
            return VerificationReport("gamma", fd.name, params, out, "fail", witness, warnings)
    if not gammas:
        warnings.append("vacuous pass: no gamma given")
    witness = {"components": sigs[0] if sigs else [], "a_side": mats[0] if mats else None}
    return VerificationReport("gamma", fd.name, params, out, "pass", witness, warnings)


def random_gammas(fd, seed, count, denominator=7):
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randrange(denominator), denominator) for _ in range(fd.n))
            for _ in range(count)]
