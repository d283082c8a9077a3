"""Seeded random generators of valid fan data."""
from math import gcd
import itertools
import random

from . import fan as fanmod
from . import lattice_core


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v) if g else tuple(v)


def _random_rays(rng, n, d):
    rays = set()
    tries = 0
    while len(rays) < n and tries < 200:
        tries += 1
        v = tuple(rng.randint(-2, 2) for _ in range(d))
        if any(v):
            rays.add(_primitive(v))
    return sorted(rays)


def _polygon_cone(rng, k):
    """Rays over a convex polygon at height one: a non-simplicial 3-cone."""
    pool = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 1), (1, 2), (-1, 1), (1, -1)]
    while True:
        pts = rng.sample(pool, k)
        if _convex_position(pts):
            return [_primitive((x, y, 1)) for x, y in pts]


def _convex_position(pts):
    for p in pts:
        others = [q for q in pts if q != p]
        for a, b, c in itertools.combinations(others, 3):
            if _in_triangle(p, a, b, c):
                return False
    if len(pts) == 4:
        for a, b, c in itertools.permutations(pts, 3):
            if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) == 0:
                return False
    return True


def _in_triangle(p, a, b, c):
    def cr(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])
    s = [cr(a, b, p), cr(b, c, p), cr(c, a, p)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def random_valid_fan(rng, max_n=6, max_d=3):
    """Greedy random fan: try random cones and keep those that stay valid."""
    while True:
        d = rng.randint(1, max_d)
        if d == 3 and rng.random() < 0.3:
            k = min(rng.choice([4, 4, 5]), max_n)
            rays = _polygon_cone(rng, k)
            extra = _random_rays(rng, rng.randint(0, max_n - k), 3)
            rays = rays + [r for r in extra if r not in rays]
            seed_strata = [frozenset(range(k))]
        else:
            n = rng.randint(d, max_n)
            rays = _random_rays(rng, n, d)
            seed_strata = []
        if len(rays) < d or lattice_core.int_rank([list(r) for r in rays], d) < d:
            continue
        fd = fanmod.fan(rays, seed_strata, "random")
        if not fanmod.validate(fd).valid:
            continue
        n = len(rays)
        cands = [frozenset(S) for k in range(2, min(n, d + 1) + 1)
                 for S in itertools.combinations(range(n), k)]
        rng.shuffle(cands)
        strata = set(fd.strata)
        for S in cands[:12]:
            trial = fanmod.fan(rays, strata | {S}, "random")
            if fanmod.validate(trial).valid:
                strata = set(trial.strata)
        return fanmod.fan(rays, strata, "random")


def random_fans(seed, count, max_n=6, max_d=3):
    rng = random.Random(seed)
    return [random_valid_fan(rng, max_n, max_d) for _ in range(count)]
