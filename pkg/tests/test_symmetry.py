import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minklab.errors import MinklabError
from minklab.permalg import default_base_circle
from minklab.symmetry import (
    Generator,
    characteristic,
    circle_symmetry,
    derived_plane,
    double_homothety,
    harmonic_homology,
    intersection_counts,
    involutory_translation,
    orth_matrix,
    orthogonal,
    sk_table,
    sym_table,
    symmetric_point,
    tangent_matrix,
    translations_at,
)

from conftest import model


def test_symmetric_point_fixes_circle(p5):
    K = 9
    for p in p5.circles[K]:
        assert symmetric_point(p5, K, int(p)) == p


def test_reflection_in_diagonal(p5):
    E = default_base_circle(p5)
    for a in range(p5.n):
        for b in range(p5.n):
            assert p5.coords(symmetric_point(p5, E, p5.point(a, b))) == (b, a)


def test_symmetric_point_coordinates(p7):
    # S_K(a, b) = (g^-1 b, g a) for K the graph of g
    K = 123
    g, gi = p7.perms[K], p7.inv_perms[K]
    for p in range(p7.n_points):
        a, b = p7.coords(p)
        assert p7.coords(symmetric_point(p7, K, p)) == (gi[b], g[a])


@pytest.mark.parametrize("spec", [("pgl2", 5), ("pgl2", 8), ("nearfield9", None)])
def test_symmetries_are_involutions(spec):
    S = sym_table(model(*spec))
    assert np.array_equal(np.take_along_axis(S, S, axis=1), np.broadcast_to(np.arange(S.shape[1]), S.shape))


@pytest.mark.parametrize("q", [4, 5, 7])
def test_circle_symmetries_are_automorphisms(q):
    P = model("pgl2", q)
    assert (sk_table(P) >= 0).all()
    for K in range(0, P.n_circles, 7):
        phi = circle_symmetry(P, K)
        ok, _ = phi.is_automorphism()
        assert ok and phi.exchanges_families and phi.fixes == frozenset(P.circles[K].tolist())


def test_nearfield_symmetries_are_automorphisms(nf9):
    # the image of a circle is again a circle because the permutation set is a group
    assert (sk_table(nf9) >= 0).all()


def test_orthogonal_to_diagonal_means_involution(p7):
    E = default_base_circle(p7)
    P = p7.perms
    invol = np.all(P[np.arange(len(P))[:, None], P] == np.arange(p7.n), axis=1)
    invol[E] = False  # orthogonality needs two different circles
    assert np.array_equal(orth_matrix(p7)[E], invol)
    assert invol.sum() == 7 * 7


def test_orth_matrix_matches_literal_definition(p5):
    O = orth_matrix(p5)
    for K in range(0, p5.n_circles, 11):
        for L in range(p5.n_circles):
            if L != K:
                assert O[K, L] == orthogonal(p5, K, L)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 119), st.integers(0, 119))
def test_orthogonality_symmetric(K, L):
    O = orth_matrix(model("pgl2", 5))
    assert O[K, L] == O[L, K]


@pytest.mark.parametrize("q,char", [(3, "NotTwo"), (4, "Two"), (5, "NotTwo"), (7, "NotTwo"), (8, "Two")])
def test_characteristic(q, char):
    P = model("pgl2", q)
    assert characteristic(P) == char
    O, T = orth_matrix(P), tangent_matrix(P)
    if char == "Two":
        assert np.array_equal(T & O, T)  # every tangent pair is orthogonal
    else:
        assert not np.any(T & O)


def test_intersection_counts(p5):
    I = intersection_counts(p5)
    M = p5.mask.astype(int)
    assert np.array_equal(I, M @ M.T)


@pytest.mark.parametrize("spec,p", [(("pgl2", 7), 0), (("pgl2", 7), 30), (("nearfield9", None), 5)])
def test_derived_planes_are_affine(spec, p):
    D = derived_plane(model(*spec), p)
    ok, why = D.is_affine()
    assert ok, why
    q = D.order
    assert len(D.points) == q * q and len(D.line_list) == q * q + q


def test_double_homothety(p7):
    a, b = 0, p7.point(1, 1)
    H = double_homothety(p7, a, b)
    assert H.is_involution and H.is_automorphism()[0] and H.preserves_families
    assert {a, b} <= H.fixes


def test_double_homothety_needs_odd_char(p4):
    with pytest.raises(MinklabError):
        double_homothety(p4, 0, p4.point(1, 1))


def test_harmonic_homology(p5):
    phi = harmonic_homology(p5, Generator(2, 0), Generator(2, 3))
    assert phi.is_involution and phi.is_automorphism()[0]
    # both generators are fixed pointwise
    for y in (0, 3):
        assert set(p5.generator_points(2, y).tolist()) <= phi.fixes


def test_involutory_translation_char2(p4):
    t = involutory_translation(p4, Generator(2, 1), Generator(2, 2), 0)
    assert t.is_involution and t.is_automorphism()[0]
    assert set(p4.generator_points(2, 0).tolist()) <= t.fixes  # [p]_2 with p = 0
    Y1, Y2 = set(p4.generator_points(2, 1).tolist()), set(p4.generator_points(2, 2).tolist())
    assert {int(t(x)) for x in Y1} == Y2


def test_translations_at_point():
    P = model("pgl2", 4)
    ts = translations_at(P, 0)
    assert ts and all(t.is_automorphism()[0] for t in ts)
