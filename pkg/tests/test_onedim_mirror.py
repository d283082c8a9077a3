import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricmirror import linalg, onedim_mirror
from toricmirror.cellsheaf.generators import localize
from toricmirror.cellsheaf.microsupport import in_subcategory, microsupport
from toricmirror.cellsheaf.rhom import rhom
from toricmirror.cellsheaf.sheaf import local_system, twist
from toricmirror import skeleton
from helpers import std

F = Fraction
T = onedim_mirror.TorsionModule
THETA = skeleton.reduce(std("affine", 1), (0,))


def test_ext_examples():
    k0 = T([[0]])
    assert onedim_mirror.ext_dims_kt(k0, k0) == (1, 1)
    assert onedim_mirror.ext_dims_kt(k0, T([[1]])) == (0, 0)
    assert onedim_mirror.ext_dims_kt(T([]), k0) == (0, 0)


def test_mirror_examples():
    G = onedim_mirror.mirror_1d(T([[0]]))
    assert G.dims == (1, 1)
    pos, neg = onedim_mirror._arrows(G.cx)
    assert G.maps[neg] == [[1]] and G.maps[pos] == [[0]]
    assert in_subcategory(G, THETA)
    rep = microsupport(G)
    assert {(ch.kind, ch.xi) for c, ch in rep.present() if ch.kind != "zero"} == {("ray", (-1,))}
    inv = onedim_mirror.mirror_1d(T([[3]]))
    assert microsupport(inv).zero_section_only()
    assert onedim_mirror.mirror_1d(T([])).is_zero()


def test_gm_examples():
    chi = F(5)
    assert onedim_mirror.mirror_1d_gm(onedim_mirror.LaurentModule([[chi]])) == local_system(onedim_mirror.circle_complex(), (chi,))
    J = onedim_mirror.LaurentModule(onedim_mirror.jordan_block(1, 2))
    assert rhom(onedim_mirror.mirror_1d_gm(J), onedim_mirror.mirror_1d_gm(J)) == (2, 2)
    assert onedim_mirror.ext_dims_kt(J, J) == (2, 2)
    one = onedim_mirror.mirror_1d_gm(onedim_mirror.LaurentModule([[1]]))
    assert one.maps == local_system(one.cx, (1,)).maps
    with pytest.raises(onedim_mirror.NotInvertible):
        onedim_mirror.mirror_1d_gm(T([[0]]))


def test_pullback_and_microstalk_examples():
    for t, want in [([[0]], (1, 1)), ([[2]], (0, 0)), (onedim_mirror.jordan_block(0, 2), (1, 1))]:
        M = T(t)
        assert onedim_mirror.pullback_at_zero(M) == want
        assert onedim_mirror.microstalk_1d(onedim_mirror.mirror_1d(M)) == want
    assert onedim_mirror.microstalk_1d(local_system(onedim_mirror.circle_complex(), (1,))) == (0, 0)


def test_product_examples():
    sky = onedim_mirror.product_mirror([[[0]], [[0]]])
    assert rhom(sky, sky) == (1, 2, 1) == onedim_mirror.koszul_ext([[[0]], [[0]]], [[[0]], [[0]]])
    # a point of the plane off the origin still has a two-dimensional tangent space
    pt = onedim_mirror.product_mirror([[[0]], [[1]]])
    assert rhom(pt, pt) == onedim_mirror.koszul_ext([[[0]], [[1]]], [[[0]], [[1]]]) == (1, 2, 1)
    assert rhom(sky, pt) == (0, 0, 0)
    assert onedim_mirror.product_mirror([[], []], dim=0).is_zero()
    with pytest.raises(onedim_mirror.NonCommuting):
        onedim_mirror.product_mirror([[[0, 1], [0, 0]], [[1, 0], [0, 2]]])


def test_product_needs_small_dimension():
    with pytest.raises(onedim_mirror.UnsupportedDimension):
        onedim_mirror.product_mirror([[[0]]] * 3)


def _commuting_pair(rng, n):
    A = [[F(rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)]
    p = [rng.randint(-1, 1) for _ in range(3)]
    eye = linalg.identity(n)
    A2 = linalg.matmul(A, A, n)
    B = [[p[0] * eye[i][j] + p[1] * A[i][j] + p[2] * A2[i][j] for j in range(n)] for i in range(n)]
    return A, B


@given(st.integers(0, 10 ** 6))
def test_product_matches_koszul(seed):
    rng = random.Random(seed)
    A1, B1 = _commuting_pair(rng, rng.randint(1, 2))
    A2, B2 = _commuting_pair(rng, rng.randint(1, 2))
    G1, G2 = onedim_mirror.product_mirror([A1, B1]), onedim_mirror.product_mirror([A2, B2])
    assert rhom(G1, G2) == onedim_mirror.koszul_ext([A1, B1], [A2, B2])


@given(st.integers(0, 10 ** 6))
def test_dictionary_random_pairs(seed):
    rng = random.Random(seed)
    M, N = onedim_mirror.random_module(rng), onedim_mirror.random_module(rng)
    FM, FN = onedim_mirror.mirror_1d(M), onedim_mirror.mirror_1d(N)
    assert onedim_mirror.ext_dims_kt(M, N) == rhom(FM, FN)
    assert onedim_mirror.koszul_ext([M.matrix()], [N.matrix()]) == onedim_mirror.ext_dims_kt(M, N)
    assert onedim_mirror.pullback_at_zero(M) == onedim_mirror.microstalk_1d(FM)
    assert in_subcategory(FM, THETA)


@given(st.integers(0, 10 ** 6), st.sampled_from([F(2), F(-1), F(1, 3), F(-5, 2), F(7)]))
def test_equivariance(seed, chi):
    rng = random.Random(seed)
    M, N = onedim_mirror.random_module(rng), onedim_mirror.random_module(rng)
    tw = onedim_mirror.normalize_1d(twist(onedim_mirror.mirror_1d(M), (chi,)))
    want = onedim_mirror.mirror_1d(M.scaled(chi))
    assert (tw.dims, tw.maps) == (want.dims, want.maps)
    assert rhom(twist(onedim_mirror.mirror_1d(M), (chi,)), twist(onedim_mirror.mirror_1d(N), (chi,))) == \
        rhom(onedim_mirror.mirror_1d(M), onedim_mirror.mirror_1d(N))


@given(st.integers(0, 10 ** 6))
def test_localization_kills_torsion_part(seed):
    M = onedim_mirror.random_module(random.Random(seed))
    G = localize(onedim_mirror.mirror_1d(M), [a.index for a in onedim_mirror.circle_complex().arrows])
    n = M.dim
    tn = linalg.identity(n)
    for _ in range(n):
        tn = linalg.matmul(tn, M.matrix(), n)
    # what survives is the part of M where t acts invertibly
    assert G.dims[0] == (linalg.rank(tn, n) if n else 0)


def test_orientation_flip_breaks_intertwining():
    M = T([[0]])
    flipped = onedim_mirror.mirror_1d(M, orientation=-1)
    assert not in_subcategory(flipped, THETA)


def test_random_pairs_seeded():
    a = onedim_mirror.random_pairs(3, 5)
    b = onedim_mirror.random_pairs(3, 5)
    assert a == b and all(m.dim <= 4 for pair in a for m in pair)
