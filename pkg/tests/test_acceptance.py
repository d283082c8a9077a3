"""Acceptance suite.  Each criterion is timed and prints one PASS/FAIL line."""
import os
import random
import time
from contextlib import contextmanager

import pytest

from toricmirror import corpus, cox_coh, fan, lattice_core, skeleton, workbench as wb
from toricmirror.cellsheaf.generators import generators
from helpers import cech_p1, golden, points_p2


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(label, limit):
        t0 = time.perf_counter()
        err = None
        try:
            yield
        except BaseException as e:
            err = e
        dt = time.perf_counter() - t0
        if err is None and dt >= limit:
            err = AssertionError(f"{label} took {dt:.2f}s, limit {limit}s")
        status = "PASS" if err is None else "FAIL"
        with capsys.disabled():
            print(f"\n{label} {status} ({dt:.2f}s, limit {limit}s)"
                  + ("" if err is None else f": {err!r}"[:300]))
        if err is not None:
            raise err
    return run


def test_ac01_cox_locus_goldens(criterion):
    with criterion("AC1 cox locus goldens", 1):
        assert fan.irrelevant_locus(golden("projective2")).describe() == "Z = V(x1,x2,x3)"
        assert fan.irrelevant_locus(golden("p2_minus_vertex")).describe() == "Z = V(x2,x3)"


def _snf_oracle(fd):
    # cokernel of the inclusion M -> Z^n from determinantal divisors
    cs = lattice_core.character_sequence(fd.f, fd.n)
    A = [list(r) for r in cs.M_inclusion]
    divs = lattice_core.determinantal_divisors(A, fd.d)
    factors = [b // a for a, b in zip([1] + divs, divs)]
    return fd.n - len(divs), tuple(x for x in factors if x > 1)


def test_ac02_character_sequences(criterion):
    with criterion("AC2 character sequences", 1):
        for name in ("projective1", "projective2", "wp112"):
            fd = golden(name)
            q = cox_coh.class_group(fd)
            assert str(q) == "Z"
            assert (q.rank, q.invariant_factors) == _snf_oracle(fd)
        tor = fan.fan([(1, 0), (1, 2)], [set(), {0}, {1}, {0, 1}])
        q = cox_coh.class_group(tor)
        assert (q.rank, q.invariant_factors) == (0, (2,)) == _snf_oracle(tor)


def test_ac03_equivalence_on_random_fans(criterion):
    with criterion("AC3 simplicial/noncharacteristic/submersive", 30):
        fans = corpus.random_fans(2024, 200)
        assert len(fans) >= 200
        assert all(fan.validate(f).valid and f.n <= 6 and f.d <= 3 for f in fans)
        bad = [f for f in fans if not skeleton.check_equivalence(f).agree]
        assert not bad, f"{len(bad)} disagreements"


def test_ac04_skeleton_structure(criterion):
    with criterion("AC4 skeleton structure", 1):
        comps = skeleton.reduce(golden("projective1"), (0, 0))
        assert len(comps) == 3
        rays = [c for c in comps if c.cone_dim == 1]
        assert sorted(c.cone for c in rays) == [((-1,),), ((1,),)]
        assert len({tuple(c.base.cosets) for c in rays}) == 1
        assert all(c.base_dim == 0 and len(c.base.cosets) == 1 for c in rays)
        comps = skeleton.reduce(golden("projective2"), (0, 0, 0))
        assert len(comps) == 7
        assert [c.base_dim for c in comps] == [2, 1, 1, 1, 0, 0, 0]
        assert [c.cone_dim for c in comps] == [0, 1, 1, 1, 2, 2, 2]
        for name in ("projective1", "projective2", "p1xp1", "hirzebruch1", "wp112", "affine2"):
            fd = golden(name)
            assert all(c.base_dim + c.cone_dim == fd.d for c in skeleton.reduce(fd, (0,) * fd.n))


def test_ac05_one_dim_suite(criterion):
    with criterion("AC5 1-d mirror suite", 30):
        rep = wb.verify_dim1(1, 50)
        assert len(wb.CHARACTERS) == 5
        assert rep.passed, rep.witness
        assert rep.witness["pairs_checked"] == 50
        rows = rep.matrices["pairs"]
        assert all(r["ext"] == r["rhom"] and r["pullback"] == r["microstalk"] for r in rows)


def test_ac06_p1_quotient(criterion):
    with criterion("AC6 P1 quotient", 5):
        classes = [(0, 0), (-1, 0)]
        rep = wb.verify_quotient(golden("projective1"), classes)
        assert rep.passed and wb.recheck(rep.matrices["a_side"], rep.matrices["b_side"], rep.witness)
        # independent Cech oracle: Hom(O(a), O(b)) = H(O(b - a))
        B = [[cech_p1(b[0] - a[0]) for b in classes] for a in classes]
        assert [[tuple(e) for e in row] for row in rep.matrices["b_side"]] == B
        h0 = [[B[j][i][0] for j in range(2)] for i in range(2)]
        assert h0 == [[1, 2], [0, 1]]


def test_ac07_p2_quotient(criterion):
    with criterion("AC7 P2 quotient", 120):
        fd = golden("projective2")
        assert len(generators(skeleton.reduce(fd, (0, 0, 0)))) == 3
        classes = [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
        rep = wb.verify_quotient(fd, classes)
        assert rep.passed and wb.recheck(rep.matrices["a_side"], rep.matrices["b_side"], rep.witness)
        B = rep.matrices["b_side"]
        upper = [B[i][j][0] for i in range(3) for j in range(i + 1, 3)]
        assert sorted(upper) == [3, 3, 6]
        assert upper == [points_p2(j - i) for i in range(3) for j in range(i + 1, 3)]


def test_ac08_gamma_independence(criterion):
    with criterion("AC8 gamma independence", 120):
        jobs = min(4, os.cpu_count() or 1)
        for name in ("projective1", "projective2", "p1xp1"):
            fd = golden(name)
            gammas = [(0,) * fd.n] + wb.random_gammas(fd, 3, 4)
            rep = wb.verify_gamma(fd, gammas, jobs=jobs)
            assert rep.passed, (name, rep.witness)
        fd = golden("cone_over_square")
        rep = wb.verify_gamma(fd, [(0,) * fd.n] + wb.random_gammas(fd, 3, 4))
        assert rep.passed, rep.witness
        pattern = rep.matrices["emptiness"]["1,2,3,4"]
        assert True in pattern and False in pattern


def test_ac09_b_side_self_consistency(criterion):
    with criterion("AC9 B-side self-consistency", 30):
        rng = random.Random(9)
        for name in ("projective1", "projective2", "p1xp1", "hirzebruch1"):
            fd = golden(name)
            K = cox_coh.canonical_lift(fd)
            for _ in range(5):
                D = tuple(rng.randint(-3, 3) for _ in range(fd.n))
                dual = tuple(k - x for k, x in zip(K, D))
                assert cox_coh.cohomology_dims(fd, D).dims == cox_coh.cohomology_dims(fd, dual).dims[::-1]
        for name in ("projective1", "projective2", "p1xp1", "hirzebruch1", "wp112"):
            fd = golden(name)
            cs = lattice_core.character_sequence(fd.f, fd.n)
            for _ in range(4):
                D = tuple(rng.randint(-2, 2) for _ in range(fd.n))
                u = [rng.randint(-2, 2) for _ in range(fd.d)]
                D2 = tuple(x + sum(cs.M_inclusion[i][k] * u[k] for k in range(fd.d))
                           for i, x in enumerate(D))
                assert cox_coh.cohomology_dims(fd, D2).dims == cox_coh.cohomology_dims(fd, D).dims
        assert cox_coh.cohomology_dims(golden("projective2"), (-3, 0, 0)).dims == (0, 0, 1)
        assert cox_coh.cohomology_dims(golden("p1xp1"), (-1, 0, -1, 0)).dims == (0, 0, 0)


def test_ac10_negative_controls(criterion):
    with criterion("AC10 negative controls", 5):
        rep = wb.verify_dim1(1, 50, orientation=-1)
        assert rep.verdict == "fail" and rep.witness and rep.witness["failures"]
        rep = wb.verify_quotient(golden("projective1"), [(0, 0), (5, 0)])
        assert rep.verdict == "fail" and rep.witness["unmatched_b_entries"]
