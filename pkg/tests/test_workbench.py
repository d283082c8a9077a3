import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricmirror import cox_coh, skeleton, workbench as wb
from helpers import p1, p1xp1, p2, std

F = Fraction


def test_dim1_passes():
    rep = wb.verify_dim1(1, 50)
    assert rep.passed and rep.witness["pairs_checked"] == 50
    assert len(rep.matrices["pairs"]) == 50
    assert all(r["ext"] == r["rhom"] and r["pullback"] == r["microstalk"]
               for r in rep.matrices["pairs"])


def test_dim1_vacuous():
    rep = wb.verify_dim1(1, 0)
    assert rep.passed and rep.warnings


def test_dim1_wrong_orientation_fails():
    rep = wb.verify_dim1(1, 20, orientation=-1)
    assert rep.verdict == "fail"
    assert "M" in rep.witness and rep.witness["failures"]


def test_dim1_jobs_do_not_change_report():
    assert wb.verify_dim1(4, 6, jobs=2).to_json() == wb.verify_dim1(4, 6).to_json()


def test_quotient_p1():
    rep = wb.verify_quotient(p1(), [(0, 0), (-1, 0)])
    assert rep.passed
    # Cech oracle: only Hom(O(-1), O) is nonzero off the diagonal, of dimension 2
    B = rep.matrices["b_side"]
    assert [[e[0] for e in row] for row in B] == [[1, 0], [2, 1]]
    assert wb.recheck(rep.matrices["a_side"], B, rep.witness)
    t = [[B[j][i][0] for j in range(2)] for i in range(2)]
    assert t == [[1, 2], [0, 1]]


def test_quotient_p2():
    rep = wb.verify_quotient(p2(), [(0, 0, 0), (1, 0, 0), (2, 0, 0)])
    assert rep.passed
    B = rep.matrices["b_side"]
    assert (B[0][1][0], B[0][2][0], B[1][2][0]) == (3, 6, 3)
    assert wb.recheck(rep.matrices["a_side"], B, rep.witness)


def test_quotient_p1xp1():
    rep = wb.verify_quotient(p1xp1(), [(0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0)])
    assert rep.passed


def test_quotient_wrong_collection_fails():
    rep = wb.verify_quotient(p1(), [(0, 0), (5, 0)])
    assert rep.verdict == "fail"
    assert [6, 0] in [list(x) for x in rep.witness["unmatched_b_entries"]]


def test_quotient_wrong_count_fails():
    rep = wb.verify_quotient(p1(), [(0, 0)])
    assert rep.verdict == "fail" and rep.witness["reason"] == "object count"


def test_quotient_errors():
    with pytest.raises(cox_coh.NotSimplicial):
        wb.verify_quotient(std("cone_over_square"), [(0, 0, 0, 0)])
    with pytest.raises(cox_coh.NotComplete):
        wb.verify_quotient(std("affine", 1), [(0,)])
    with pytest.raises(skeleton.DimensionTooLarge):
        wb.verify_quotient(std("projective", 3), [(0, 0, 0, 0)])


def test_gamma_p2():
    gammas = [(0, 0, 0)] + wb.random_gammas(p2(), 3, 5)
    rep = wb.verify_gamma(p2(), gammas)
    assert rep.passed
    assert len(rep.matrices["a_side"]) == 6


def test_gamma_cone_over_square():
    fd = std("cone_over_square")
    rep = wb.verify_gamma(fd, [(0, 0, 0, 0), (F(1, 2), 0, 0, 0)])
    assert rep.passed
    assert rep.witness["varying_strata"] == [[1, 2, 3, 4]]
    assert rep.matrices["emptiness"]["1,2,3,4"] == [False, True]
    none = wb.verify_gamma(fd, [(0, 0, 0, 0)])
    assert none.verdict == "fail"


def test_gamma_affine_line():
    rep = wb.verify_gamma(std("affine", 1), [(0,), (F(1, 3),)])
    assert rep.passed


def test_gamma_higher_dimension_is_combinatorial():
    rep = wb.verify_gamma(std("projective", 3), [(0, 0, 0, 0), (F(1, 2), 0, 0, 0)])
    assert rep.passed and rep.warnings


def test_report_requires_witness():
    with pytest.raises(ValueError):
        wb.VerificationReport("x", "y", {}, {}, "pass")


def test_report_json_deterministic():
    a = wb.verify_quotient(p2(), [(0, 0, 0), (1, 0, 0), (2, 0, 0)]).to_json()
    b = wb.verify_quotient(p2(), [(0, 0, 0), (1, 0, 0), (2, 0, 0)]).to_json()
    assert a == b
    d = json.loads(a)
    assert {"test", "inputs", "matrices", "verdict", "witness"} <= set(d)


def test_merge_reports_sorted():
    r1 = wb.verify_dim1(1, 0)
    r2 = wb.verify_quotient(p1(), [(0, 0), (-1, 0)])
    assert [r.test for r in wb.merge_reports([r2, r1])] == ["dim1", "quotient"]


def _random_matrix(rng, k, width):
    return [[tuple(rng.randint(0, 3) for _ in range(width)) for _ in range(k)] for _ in range(k)]


@given(st.integers(0, 10 ** 6))
def test_matching_recovers_rearrangement(seed):
    rng = random.Random(seed)
    k, width = rng.randint(1, 4), rng.randint(2, 3)
    # entries concentrated in one degree so that shifts stay in range
    A = [[tuple(rng.randint(0, 3) if deg == 0 else 0 for deg in range(width)) for _ in range(k)]
         for _ in range(k)]
    p = list(range(k))
    rng.shuffle(p)
    w = {"permutation": p, "transpose": rng.random() < 0.5, "shifts": [0] * k}
    B = wb.apply_witness(A, w)
    found = wb.match_matrices(A, B)
    assert found is not None and wb.recheck(A, B, found)


def test_matching_with_shift():
    A = [[(1, 0), (2, 0)], [(0, 0), (1, 0)]]
    B = [[(1, 0), (0, 2)], [(0, 0), (1, 0)]]
    w = wb.match_matrices(A, B)
    assert w is not None and w["shifts"] == [0, 1]
    assert wb.recheck(A, B, w)


def test_matching_rejects():
    assert wb.match_matrices([[(1, 0)]], [[(2, 0)]]) is None
    assert wb.match_matrices([[(1, 0)]], [[(1, 0), (0, 0)], [(0, 0), (1, 0)]]) is None


def test_canonical_matrix_invariant():
    A = [[(1,), (2,)], [(0,), (1,)]]
    At = [[(1,), (0,)], [(2,), (1,)]]
    assert wb.canonical_matrix(A) == wb.canonical_matrix(At)
