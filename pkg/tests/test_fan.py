import itertools
import json
import os
import random

import pytest
from hypothesis import given, strategies as st

from toricmirror import corpus, fan
from conftest import FIXTURES
from helpers import golden, p1, p2

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]


def _subsets(n, exclude=()):
    ex = {frozenset(e) for e in exclude}
    return [set(S) for k in range(n + 1) for S in itertools.combinations(range(n), k)
            if frozenset(S) not in ex]


def test_p2_valid():
    fd = fan.fan(P2_RAYS, _subsets(3, [(0, 1, 2)]))
    assert fan.validate(fd).valid


def test_p2_with_top_stratum_invalid():
    fd = fan.fan(P2_RAYS, _subsets(3))
    rep = fan.validate(fd)
    assert not rep.valid
    pairs = [w for kind, _, w in rep.violations if kind == "disjoint"]
    assert any({frozenset({0, 1, 2}), frozenset({0, 1})} == {w[0], w[1]} for w in pairs)
    # the witness lies in both relative interiors: positive on rays 1, 2 of the cone
    S, T, pt = next(w for w in pairs if frozenset({0, 1}) in w[:2])
    assert pt[0] > 0 and pt[1] > 0


def test_a1_valid():
    fd = fan.fan([(1,)], [set(), {0}])
    assert fan.validate(fd).valid


def test_relint_examples():
    assert fan.relint_disjoint(p2(), {0}, {1})
    assert not fan.relint_disjoint(p2(), {0}, {0})
    dup = fan.fan([(1, 0), (1, 0), (0, 1)], [set()], complete_closure=False)
    assert not fan.relint_disjoint(dup, {0}, {1})


def test_is_simplicial_examples():
    assert fan.is_simplicial(p2())
    assert not fan.is_simplicial(fan.standard_fan("cone_over_square"))
    assert fan.is_simplicial(fan.standard_fan("affine", 3))


def test_irrelevant_locus_examples():
    assert fan.irrelevant_locus(p2()).components == ((0, 1, 2),)
    assert fan.irrelevant_locus(fan.standard_fan("p2_minus_vertex")).components == ((1, 2),)
    assert fan.irrelevant_locus(fan.standard_fan("affine", 2)).components == ()


def test_standard_fan_examples():
    fd = p1()
    assert (fd.n, fd.f) == (2, [[1, -1]])
    assert fd.strata == {frozenset(), frozenset({0}), frozenset({1})}
    assert fan.standard_fan("affine", 2).f == [[1, 0], [0, 1]]
    h = fan.standard_fan("hirzebruch", 1)
    assert fan.validate(h).valid and fan.is_simplicial(h) and fan.is_complete(h)
    with pytest.raises(fan.UnknownName):
        fan.standard_fan("nonsense")


def test_golden_files_match_constructors():
    P1 = p1()
    pairs = {"affine1": ("affine", 1), "affine2": ("affine", 2), "projective1": ("projective", 1),
             "projective2": ("projective", 2), "p1xp1": ("product", P1, P1),
             "hirzebruch1": ("hirzebruch", 1), "wp112": ("weighted_projective", 1, 1, 2),
             "p2_minus_vertex": ("p2_minus_vertex",), "cone_over_square": ("cone_over_square",)}
    for name, args in pairs.items():
        g, s = golden(name), fan.standard_fan(*args)
        assert (g.rays, g.strata) == (s.rays, s.strata), name


def test_loader_records_closure():
    fd = golden("p1xp1")
    assert fd.closure_added
    assert fan.validate(fd).valid


def test_bad_fixture_diagnostics():
    fd = fan.load_fan(os.path.join(FIXTURES, "bad.json"))
    lines = fan.validate(fd).lines()
    assert lines and all(line.startswith("- ") for line in lines)


def test_loader_rejects_out_of_range():
    with pytest.raises(fan.InvalidFan):
        fan.fan_from_dict({"n": 1, "d": 1, "rays": [[1]], "strata": [[2]]})


def test_roundtrip_dict():
    fd = fan.standard_fan("hirzebruch", 1)
    back = fan.fan_from_dict(json.loads(json.dumps(fan.fan_to_dict(fd))))
    assert (back.rays, back.strata) == (fd.rays, fd.strata)


def _brute_minimal_nonfaces(fd):
    # x lies off Z iff its zero set is contained in some stratum
    non = [frozenset(S) for k in range(fd.n + 1) for S in itertools.combinations(range(fd.n), k)
           if not any(frozenset(S) <= T for T in fd.strata)]
    return sorted(tuple(sorted(S)) for S in non if not any(T < S for T in non))


@given(st.integers(0, 10 ** 6))
def test_irrelevant_locus_is_minimal_nonfaces(seed):
    fd = corpus.random_valid_fan(random.Random(seed))
    assert sorted(fan.irrelevant_locus(fd).components) == _brute_minimal_nonfaces(fd)


@given(st.integers(0, 10 ** 6))
def test_validate_order_independent(seed):
    fd = corpus.random_valid_fan(random.Random(seed))
    strata = list(fd.strata)
    random.Random(seed).shuffle(strata)
    again = fan.fan(fd.rays, strata)
    assert fan.validate(again).lines() == fan.validate(fd).lines()
    singles = [frozenset({i}) for i in range(fd.n)]
    assert all(fan.relint_disjoint(fd, a, b) for a, b in itertools.combinations(singles, 2))


def test_random_corpus_is_valid_and_seeded():
    fans = corpus.random_fans(7, 15)
    assert all(fan.validate(f).valid for f in fans)
    assert all(f.n <= 6 and f.d <= 3 for f in fans)
    assert [f.strata for f in fans] == [f.strata for f in corpus.random_fans(7, 15)]
