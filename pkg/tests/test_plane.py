import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minklab.errors import NotSharply3Transitive, ParallelPoints, ParseError, PreconditionViolated
from minklab.permset import PermutationSet
from minklab.plane import (
    Plane,
    build_from_permutation_set,
    bundle,
    circle_through,
    circle_through_scan,
    pencil,
    pq,
    tangent_circle,
    trace,
)

from conftest import model


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_counts(q):
    P = model("pgl2", q)
    assert P.n_points == (q + 1) ** 2
    assert P.n_circles == q * (q * q - 1)
    assert all(len(c) == q + 1 for c in P.circles)
    assert P.mask.sum(axis=1).tolist() == [q + 1] * P.n_circles


def test_identity_alone_is_rejected():
    with pytest.raises(NotSharply3Transitive):
        build_from_permutation_set(PermutationSet(np.array([[0, 1, 2, 3]])))


def test_join_points(p5):
    a, b = p5.point(1, 2), p5.point(4, 3)
    assert pq(p5, a, a) == a
    assert p5.coords(pq(p5, a, b)) == (1, 3)
    assert p5.coords(pq(p5, b, a)) == (4, 2)


def test_trace_sides(p5):
    K = 17
    g = p5.perms[K]
    a, b = 2, 5
    p = p5.point(a, b)
    assert p5.coords(trace(p5, p, K, "pK")) == (a, g[a])
    assert p5.coords(trace(p5, p, K, "Kp")) == (int(np.nonzero(g == b)[0][0]), b)
    on = int(p5.circles[K][3])
    assert trace(p5, on, K, "pK") == on == trace(p5, on, K, "Kp")


def test_circle_of_identity_points(pgl):
    for q in (3, 5, 7, 8):
        P = pgl(q)
        # symbols: field codes, infinity = q; 0, 1 and infinity fixed only by the identity
        K = circle_through(P, P.point(0, 0), P.point(1, 1), P.point(q, q))
        assert np.array_equal(P.perms[K], np.arange(q + 1))


def test_three_points_of_a_circle(p7):
    for K in range(0, p7.n_circles, 17):
        a, b, c = p7.circles[K][[0, 3, 5]]
        assert circle_through(p7, a, b, c) == K


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([("pgl2", 4), ("pgl2", 5), ("pgl2", 7), ("nearfield9", None)]), st.data())
def test_index_agrees_with_scan(spec, data):
    P = model(*spec)
    n = P.n
    xs = data.draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))
    ys = data.draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))
    a, b, c = (P.point(x, y) for x, y in zip(xs, ys))
    assert circle_through_scan(P, a, b, c) == [circle_through(P, a, b, c)]


def test_parallel_points_raise(p5):
    with pytest.raises(ParallelPoints):
        circle_through(p5, p5.point(0, 0), p5.point(0, 1), p5.point(2, 2))


def test_tangent_circle_against_scan(p5):
    M = p5.mask
    C = 11
    for a in p5.circles[C]:
        ax, ay = p5.coords(a)
        for b in range(p5.n_points):
            bx, by = p5.coords(b)
            if M[C, b] or bx == ax or by == ay:
                continue
            brute = [B for B in range(p5.n_circles) if M[B, a] and M[B, b] and (M[B] & M[C]).sum() == 1]
            assert brute == [tangent_circle(p5, C, int(a), b)]


def test_tangent_circle_precondition(p5):
    a, b = p5.circles[0][:2]
    with pytest.raises(PreconditionViolated):
        tangent_circle(p5, 0, int(a), int(b))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 35), st.integers(0, 35))
def test_bundle_size(p, r):
    P = model("pgl2", 5)
    if P.parallel(p, r):
        return
    B = bundle(P, p, r)
    assert len(B) == P.n - 2  # q - 1 circles through two non-parallel points
    assert P.mask[B][:, [p, r]].all()


def test_pencil_partitions_off_points(p5):
    # circles tangent to K at p, together with K, cover each point off K and off [p] once
    K, p = 3, int(p5.circles[3][0])
    pen = pencil(p5, p, K)
    assert len(pen) == p5.n - 2
    M = p5.mask
    cover = M[pen].sum(axis=0)
    px, py = p5.coords(p)
    for x in range(p5.n_points):
        xx, yy = p5.coords(x)
        if not M[K, x] and xx != px and yy != py:
            assert cover[x] == 1


def test_mink_round_trip(tmp_path, p5):
    path = tmp_path / "p5.mink"
    p5.save(path)
    Q = Plane.load(path)
    assert Q.n == p5.n and Q.n_circles == p5.n_circles
    assert {tuple(c) for c in map(list, Q.circles)} == {tuple(c) for c in map(list, p5.circles)}
    assert Plane.loads(p5.dumps()).dumps() == p5.dumps()


@pytest.mark.parametrize("text", ["", "MINK v2 n=3", "NOT A FILE"])
def test_bad_mink(text):
    with pytest.raises(ParseError):
        Plane.loads(text)


def test_permset_round_trip(tmp_path):
    S = PermutationSet(model("pgl2", 4).perms, name="p4")
    path = tmp_path / "p4.perm"
    S.save(path)
    T = PermutationSet.load(path)
    assert np.array_equal(np.sort(T.perms, axis=0), np.sort(S.perms, axis=0))
