"""Shared fixtures and small independent oracles for the test suite."""
from functools import lru_cache
import itertools
from importlib import resources

from toricmirror import fan, linalg


def golden(name):
    return fan.load_fan(resources.files("toricmirror") / "data" / "fans" / f"{name}.json")


@lru_cache(maxsize=None)
def std(name, *params):
    return fan.standard_fan(name, *params)


def p1():
    return std("projective", 1)


def p2():
    return std("projective", 2)


def p1xp1():
    return fan.standard_fan("product", p1(), p1())


def cech_p1(k, window=12):
    """Two-chart Cech complex of O(k) on P^1 in the Laurent-exponent window.

    Sections over the chart ``x0 != 0`` are ``t^a`` with ``a >= 0``, over
    ``x1 != 0`` they are ``t^a`` with ``a <= k``, and over the overlap all
    Laurent monomials.  The differential is ``(f, g) -> g - f``.
    """
    exps = list(range(-window, window + 1))
    c0 = [("u", a) for a in exps if a >= 0] + [("v", a) for a in exps if a <= k]
    rows = []
    for e in exps:
        rows.append([(-1 if kind == "u" else 1) if a == e else 0 for kind, a in c0])
    r = linalg.rank(rows, len(c0)) if c0 else 0
    return (len(c0) - r, len(exps) - r)


def points_p2(k):
    return sum(1 for a, b in itertools.product(range(k + 1), repeat=2) if a + b <= k)
