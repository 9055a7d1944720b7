"""Verifiers for the statements about circle symmetries, orthogonality and the
characteristic of a plane.

Each verifier enumerates every configuration satisfying the hypotheses of its
statement and tests the conclusion, returning a :class:`CheckReport`.  An
empty hypothesis domain gives SKIPPED(empty-domain); statements that assume a
characteristic the plane does not have give SKIPPED(hypothesis-not-met).
"""

from __future__ import annotations

from itertools import product

import numpy as np

from ._parallel import pmap
from .errors import UnknownStatementId
from .plane import Plane, bundle, pencil
from .report import EMPTY_DOMAIN, NOT_APPLICABLE, SIZE_ASSUMPTION, CheckReport, failed, passed, skipped, timed_check
from .symmetry import (
    Generator,
    PointMap,
    cached,
    circle_images,
    derived_plane,
    double_homothety,
    harmonic_homology,
    intersection_counts,
    involutory_translation,
    orth_matrix,
    plane_char,
    sk_table,
    sym_table,
    tangent_matrix,
)

#: circles need this many points for every auxiliary construction to exist
SIZE_FLOOR = 8


class Context:
    """Run settings shared by the verifiers."""

    def __init__(self, workers: int | None = 1, seed: int = 0, budget: int = 100_000, E: int | None = None):
        self.workers = workers
        self.seed = seed
        self.budget = budget
        self.E = E


def conclude(stmt: str, checked: int, witness=None, plane: Plane | None = None, existential: bool = False,
             **kw) -> CheckReport:
    """Standard verdict: FAIL with witness, SKIPPED on an empty domain, else PASS.

    A failed existential conclusion on circles below the size floor is
    reported as SKIPPED(size-assumption), witness kept.
    """
    if witness is not None:
        if existential and plane is not None and plane.n < SIZE_FLOOR:
            return CheckReport(stmt, "SKIPPED", checked=checked, witness=witness, reason=SIZE_ASSUMPTION,
                               detail=f"circles have {plane.n} < {SIZE_FLOOR} points", **kw)
        return failed(stmt, witness, checked=checked, **kw)
    if checked == 0:
        return skipped(stmt, EMPTY_DOMAIN, **kw)
    return passed(stmt, checked, **kw)


def _first(results):
    """Merge ordered per-item results ``(checked, witness|None)``."""
    total = 0
    for checked, w in results:
        total += checked
        if w is not None:
            return total, w
    return total, None


def concyclic(plane: Plane, rows: np.ndarray) -> np.ndarray:
    """Whether each row of point indexes (duplicates allowed) lies on one circle.

    Needs (H4): two distinct points are concyclic exactly when not parallel.
    """
    rows = np.sort(np.asarray(rows, dtype=np.int64), axis=1)
    N, n = plane.n_points, plane.n
    dup = np.zeros(rows.shape, dtype=bool)
    dup[:, 1:] = rows[:, 1:] == rows[:, :-1]
    comp = np.sort(np.where(dup, N, rows), axis=1)  # distinct points first, padding N
    k = (~dup).sum(axis=1)
    out = k <= 1
    two = k == 2
    if np.any(two):
        (ax, ay), (bx, by) = np.divmod(comp[two, 0], n), np.divmod(comp[two, 1], n)
        out[two] = (ax != bx) & (ay != by)
    big = k >= 3
    if np.any(big):
        r = comp[big]
        c = plane.lookup_triples(r[:, 0], r[:, 1], r[:, 2])
        ok = c >= 0
        M = np.zeros((plane.n_circles, N + 1), dtype=bool)
        M[:, :N] = plane.mask
        M[:, N] = True
        ok[ok] = M[c[ok][:, None], r[ok]].all(axis=1)
        out[big] = ok
    return out


# -- section 2 -------------------------------------------------------------------


def _p21(plane: Plane, ctx: Context) -> CheckReport:
    O, I = orth_matrix(plane), intersection_counts(plane)

    def at(p):
        C = plane.circles_through[p]
        o = O[np.ix_(C, C)]
        t = I[np.ix_(C, C)] == 1
        c = len(C)
        eye = np.eye(c, dtype=bool)
        # axes: K, L, M
        hyp = o[:, None, :] & ~eye[:, :, None] & ~eye[None, :, :] & ~eye[:, None, :]
        concl = o.T[:, :, None] == t[None, :, :]
        bad = np.argwhere(hyp & ~concl)
        w = None
        if len(bad):
            K, L, M = (int(C[i]) for i in bad[0])
            w = {"p": int(p), "K": K, "L": L, "M": M, "L_perp_K": bool(O[L, K]), "|L^M|": int(I[L, M])}
        return int(hyp.sum()), w

    checked, w = _first(pmap(at, range(plane.n_points), ctx.workers))
    return conclude("P2.1", checked, w)


def _image_is_circle(stmt: str, plane: Plane, which) -> CheckReport:
    I, sk = intersection_counts(plane), sk_table(plane)
    hyp = which(I)
    np.fill_diagonal(hyp, False)
    bad = np.argwhere(hyp & (sk < 0))
    w = {"I": int(bad[0][0]), "J": int(bad[0][1])} if len(bad) else None
    return conclude(stmt, int(hyp.sum()), w, plane, existential=True)


def _p22(plane, ctx):
    return _image_is_circle("P2.2", plane, lambda I: I == 1)


def _p23(plane, ctx):
    return _image_is_circle("P2.3", plane, lambda I: I == 2)


def _l21(plane: Plane, ctx: Context) -> CheckReport:
    P, Pi, n, m = plane.perms, plane.inv_perms, plane.n, plane.n_circles
    S = sym_table(plane)
    xs = np.arange(n)
    off = ~np.eye(n, dtype=bool)

    def per_I(I):
        g = P[I]
        # x = (a, h a) on J; xI = (a, g a); x1 = J(xI) = (h^-1 g a, g a)
        a1 = Pi[:, g]  # (m, n): row J, column a
        a2 = np.take_along_axis(Pi, g[a1], axis=1)
        on_J = xs[None, :] * n + P
        x1 = a1 * n + np.take_along_axis(P, a1, axis=1)
        x2 = a2 * n + np.take_along_axis(P, a2, axis=1)
        sx, s1, s2 = S[I][on_J], S[I][x1], S[I][x2]
        free = P != g[None, :]
        free[I] = False
        hyp = free[:, :, None] & free[:, None, :] & off[None, :, :]  # [J, x, y]
        J, ix, iy = np.nonzero(hyp)
        rows = np.stack([sx[J, ix], sx[J, iy], s1[J, ix], s2[J, ix]], axis=1)
        ok = concyclic(plane, rows)
        if not ok.all():
            i = int(np.nonzero(~ok)[0][0])
            return len(rows), {"I": I, "J": int(J[i]), "x": int(on_J[J[i], ix[i]]), "y": int(on_J[J[i], iy[i]])}
        return len(rows), None

    checked, w = _first(pmap(per_I, range(m), ctx.workers))
    return conclude("L2.1", checked, w)


def _t21(plane: Plane, ctx: Context) -> CheckReport:
    sk = sk_table(plane)
    S = sym_table(plane)
    for K in range(plane.n_circles):
        pm = PointMap(plane, S[K])
        if not pm.exchanges_families:
            return conclude("T2.1", K + 1, {"K": K, "reason": "generators not exchanged"})
        bad = np.nonzero(sk[K] < 0)[0]
        if len(bad):
            return conclude("T2.1", K + 1, {"K": K, "L": int(bad[0])})
    return conclude("T2.1", plane.n_circles * plane.n_circles)


def _c23(plane: Plane, ctx: Context) -> CheckReport:
    O, sk = orth_matrix(plane), sk_table(plane)
    pairs = np.argwhere(O)

    def per_K(K):
        img = sk[K]
        a, b = pairs[:, 0], pairs[:, 1]
        ia, ib = img[a], img[b]
        ok = (ia >= 0) & (ib >= 0)
        ok[ok] = O[ia[ok], ib[ok]]
        bad = np.nonzero(~ok)[0]
        if len(bad):
            A, B = int(a[bad[0]]), int(b[bad[0]])
            return len(pairs), {"K": K, "A": A, "B": B, "S_K(A)": int(img[A]), "S_K(B)": int(img[B])}
        return len(pairs), None

    checked, w = _first(pmap(per_K, range(plane.n_circles), ctx.workers))
    return conclude("C2.3", checked, w)


def _bundles(plane: Plane):
    """Vertex pairs (p, q), p < q, non-parallel, with their bundles."""
    n, N = plane.n, plane.n_points
    out = []
    for p in range(N):
        px, py = divmod(p, n)
        for q in range(p + 1, N):
            qx, qy = divmod(q, n)
            if px != qx and py != qy:
                out.append((p, q))
    return out


def _t22(plane: Plane, ctx: Context) -> CheckReport:
    S = sym_table(plane)
    M = plane.mask

    def per(pq):
        p, q = pq
        B = np.nonzero(M[:, p] & M[:, q])[0]
        maps = S[B]  # (b, N)
        b = len(B)
        two = maps[:, maps]  # [J, I] = S_J o S_I
        three = maps[:, two]  # [K, J, I] = S_K o S_J o S_I
        hit = (three[:, :, :, None, :] == maps[None, None, None]).all(axis=-1).any(axis=-1)
        bad = np.argwhere(~hit)
        if len(bad):
            k, j, i = bad[0]
            return b**3, {"p": p, "q": q, "I": int(B[i]), "J": int(B[j]), "K": int(B[k])}
        return b**3, None

    checked, w = _first(pmap(per, _bundles(plane), ctx.workers))
    return conclude("T2.2", checked, w, plane, existential=True)


def _p24(plane: Plane, ctx: Context) -> CheckReport:
    """L is searched in the pencil together with its direction K (needed when I = J)."""
    S = sym_table(plane)

    def per_p(p):
        c = 0
        for K in plane.circles_through[p]:
            pen = pencil(plane, p, int(K))
            cand = np.concatenate([pen, [K]])
            maps = S[cand]
            for I, J in product(pen, repeat=2):
                comp = S[K][S[J][S[I]]]
                c += 1
                if not np.any(np.all(maps == comp, axis=1)):
                    return c, {"p": int(p), "K": int(K), "I": int(I), "J": int(J)}
        return c, None

    checked, w = _first(pmap(per_p, range(plane.n_points), ctx.workers))
    return conclude("P2.4", checked, w, plane, existential=True)


# -- section 3 -------------------------------------------------------------------------


def _p31(plane: Plane, ctx: Context) -> CheckReport:
    O, S = orth_matrix(plane), sym_table(plane)
    ident = np.arange(plane.n_points)

    def per_I(I):
        comp = np.take_along_axis(S, np.broadcast_to(S[I], S.shape), axis=1)  # row J: S_J o S_I
        sq = np.take_along_axis(comp, comp, axis=1)
        invol = np.all(sq == ident, axis=1) & ~np.all(comp == ident, axis=1)
        mism = np.nonzero(invol != O[I])[0]
        mism = mism[mism != I]
        if len(mism):
            J = int(mism[0])
            return len(S) - 1, {"I": I, "J": J, "orthogonal": bool(O[I, J]), "involution": bool(invol[J])}
        return len(S) - 1, None

    checked, w = _first(pmap(per_I, range(plane.n_circles), ctx.workers))
    return conclude("P3.1", checked, w)


def is_homothety_at(plane: Plane, phi: PointMap, p: int) -> bool:
    """phi fixes p and induces a homothety on the derived plane at p."""
    if phi.images[p] != p:
        return False
    return derived_plane(plane, p).is_homothety(phi)


def is_double_homothety(plane: Plane, phi: PointMap, p: int, q: int) -> bool:
    n = plane.n
    (px, py), (qx, qy) = plane.coords(p), plane.coords(q)
    if px == qx or py == qy:
        return False
    pq, qp = px * n + qy, qx * n + py
    img = phi.images
    if not all(img[v] == v for v in (p, q, pq, qp)):
        return False
    return is_homothety_at(plane, phi, p) and is_homothety_at(plane, phi, pq)


def _c31(plane: Plane, ctx: Context) -> CheckReport:
    O, I, S = orth_matrix(plane), intersection_counts(plane), sym_table(plane)
    pairs = np.argwhere(O & (I == 2))
    M = plane.mask

    def per(pair):
        A, B = (int(v) for v in pair)
        phi = PointMap(plane, S[B][S[A]])
        ok, _ = phi.is_automorphism()
        a, b = (int(v) for v in np.nonzero(M[A] & M[B])[0])
        if not (ok and is_double_homothety(plane, phi, a, b)):
            return 1, {"I": A, "J": B, "a": a, "b": b, "automorphism": ok}
        return 1, None

    checked, w = _first(pmap(per, pairs, ctx.workers))
    return conclude("C3.1", checked, w)


def _p32(plane: Plane, ctx: Context) -> CheckReport:
    O, Ic, M = orth_matrix(plane), intersection_counts(plane), plane.mask
    checked = 0
    for I in range(plane.n_circles):
        Js = np.nonzero(O[I] & (Ic[I] == 1))[0]
        if not len(Js):
            continue
        Ks = np.nonzero(O[I])[0]
        for J in Js:
            p = int(np.nonzero(M[I] & M[J])[0][0])
            hyp = Ks[M[Ks, p]]
            checked += len(hyp)
            bad = hyp[Ic[I, hyp] != 1]
            if len(bad):
                return conclude("P3.2", checked, {"I": I, "J": int(J), "K": int(bad[0]), "p": p})
    return conclude("P3.2", checked)


def _p33(plane: Plane, ctx: Context) -> CheckReport:
    O, Ic, M = orth_matrix(plane), intersection_counts(plane), plane.mask
    done, checked = set(), 0
    for I, J in np.argwhere(O & (Ic == 2)):
        p, q = (int(v) for v in np.nonzero(M[I] & M[J])[0])
        if (p, q) in done:
            continue
        done.add((p, q))
        B = bundle(plane, p, q)
        cnt = O[np.ix_(B, B)].sum(axis=1)
        checked += len(B)
        bad = np.nonzero(cnt != 1)[0]
        if len(bad):
            return conclude("P3.3", checked, {"p": p, "q": q, "K": int(B[bad[0]]), "count": int(cnt[bad[0]])},
                            plane, existential=True)
    return conclude("P3.3", checked)


def _t31(plane: Plane, ctx: Context) -> CheckReport:
    O, T, Ic = orth_matrix(plane), tangent_matrix(plane), intersection_counts(plane)
    m = plane.n_circles
    if np.any(O & T):
        bad = np.argwhere(T & ~O)
        if len(bad):
            return failed("T3.1", {"K": int(bad[0][0]), "L": int(bad[0][1]), "reason": "tangent, not orthogonal"},
                          checked=m * m)
        bad = np.argwhere(O & (Ic > 1))
        if len(bad):
            return failed("T3.1", {"K": int(bad[0][0]), "L": int(bad[0][1]),
                                   "reason": "orthogonal with more than one common point"}, checked=m * m)
        return passed("T3.1", m * m, detail="char 2: every tangent pair orthogonal")
    return passed("T3.1", m * m, detail="no orthogonal tangent pair (hypothesis absent; dichotomy holds)")


def _involutory_pool(plane: Plane, extra: bool):
    """Family-preserving candidate maps (x, y) -> (alpha x, beta y)."""
    P = plane.perms
    n = plane.n
    ident = np.arange(n)
    sq = np.take_along_axis(P, P, axis=1)
    invol = np.all(sq == ident, axis=1)
    keep = invol | np.all(P == ident, axis=1)
    if extra:
        keep |= (P == ident).sum(axis=1) >= 2
    gens = P[keep]
    xs, ys = np.divmod(np.arange(plane.n_points), n)
    pool = []
    for a in gens:
        for b in gens:
            img = a[xs] * n + b[ys]
            if not np.array_equal(img, np.arange(plane.n_points)):
                pool.append(img)
    return np.array(pool, dtype=np.int64)


def _p34(plane: Plane, ctx: Context) -> CheckReport:
    """Characterizations compared extensionally over a candidate pool of automorphisms."""
    if plane_char(plane) == "Two":
        return skipped("P3.4", NOT_APPLICABLE, detail="char 2")
    O, Ic, S = orth_matrix(plane), intersection_counts(plane), sym_table(plane)
    products = {}
    for I, J in np.argwhere(O & (Ic >= 1)):
        products.setdefault(S[J][S[I]].tobytes(), (int(I), int(J)))
    pool = _involutory_pool(plane, extra=plane.n <= 6)
    imgs = circle_images(plane, pool)
    autos = pool[np.all(imgs >= 0, axis=1)]
    ident = np.arange(plane.n_points)

    def classify(img):
        phi = PointMap(plane, img)
        invol = np.array_equal(img[img], ident) and not np.array_equal(img, ident)
        fix = np.nonzero(img == ident)[0]
        c1 = invol and any(is_homothety_at(plane, phi, int(p)) for p in fix)
        c2 = False
        for p in fix:
            for q in fix:
                if p < q and is_double_homothety(plane, phi, int(p), int(q)):
                    c2 = True
                    break
            if c2:
                break
        c3 = img.tobytes() in products
        return c1, c2, c3

    res = list(pmap(classify, autos, ctx.workers))
    for k, (c1, c2, c3) in enumerate(res):
        if not (c1 == c2 == c3):
            return failed("P3.4", {"map_index": k, "involutory_homothety": c1, "double_homothety": c2,
                                   "product_of_symmetries": c3, "images": autos[k].tolist()}, checked=k + 1)
    hits = sum(r[2] for r in res)
    if hits < len(products):
        return failed("P3.4", {"reason": "a product of orthogonal symmetries is missing from the pool"},
                      checked=len(res))
    return passed("P3.4", len(res), detail=f"{hits} of {len(res)} candidate automorphisms satisfy (i)-(iii)")


def _h_actions(plane: Plane, family: int) -> dict:
    """Generator action of H_{a,b} for all non-parallel (a, b)."""

    def build():
        n = plane.n
        out = {}
        for a in range(plane.n_points):
            ax, ay = divmod(a, n)
            for b in range(plane.n_points):
                bx, by = divmod(b, n)
                if ax != bx and ay != by:
                    out[a, b] = double_homothety(plane, a, b)
        return out

    H = cached(plane, "H-all", build)
    return {k: v.generator_action(family) for k, v in H.items()}


def _l31(plane: Plane, ctx: Context) -> CheckReport:
    if plane_char(plane) == "Two":
        return skipped("L3.1", NOT_APPLICABLE, detail="char 2")
    checked = 0
    for fam in (1, 2):
        act = _h_actions(plane, fam)
        for (a, b), ab in act.items():
            for c in plane.generator_points(fam, plane.gen_of(a, fam)):
                for d in plane.generator_points(fam, plane.gen_of(b, fam)):
                    c, d = int(c), int(d)
                    if (c, d) not in act:
                        continue
                    checked += 1
                    if not np.array_equal(ab, act[c, d]):
                        return failed("L3.1", {"family": fam, "a": a, "b": b, "c": c, "d": d}, checked=checked)
    return conclude("L3.1", checked)


def _pairs(plane: Plane):
    n = plane.n
    return [(Generator(f, i), Generator(f, j)) for f in (1, 2) for i in range(n) for j in range(n) if i != j]


def _c32(plane: Plane, ctx: Context) -> CheckReport:
    """Involutory automorphism, fixed axis, and independence of the centers chosen."""
    if plane_char(plane) == "Two":
        return skipped("C3.2", NOT_APPLICABLE, detail="char 2")

    def per(AB):
        A, B = AB
        base = harmonic_homology(plane, A, B)
        ok, info = base.is_automorphism()
        if not (ok and base.is_involution):
            return 1, {"A": list(A), "B": list(B), "automorphism": ok, "involution": base.is_involution}
        c = 1
        for a in plane.generator_points(A.family, A.index):
            for b in plane.generator_points(B.family, B.index):
                if plane.parallel(int(a), int(b)):
                    continue
                c += 1
                other = harmonic_homology(plane, A, B, centers=(int(a), int(b)))
                if other != base:
                    return c, {"A": list(A), "B": list(B), "centers": [int(a), int(b)]}
        return c, None

    checked, w = _first(pmap(per, _pairs(plane), ctx.workers))
    return conclude("C3.2", checked, w)


def _c33(plane: Plane, ctx: Context) -> CheckReport:
    if plane_char(plane) == "Two":
        return skipped("C3.3", NOT_APPLICABLE, detail="char 2")
    O, Ic, M = orth_matrix(plane), intersection_counts(plane), plane.mask
    P, n, m = plane.perms, plane.n, plane.n_circles

    def per(XY):
        X, Y = XY
        H = harmonic_homology(plane, X, Y)
        img = H.circle_images()
        if X.family == 1:
            k1, k2 = X.index * n + P[:, X.index], Y.index * n + P[:, Y.index]
        else:
            inv = plane.inv_perms
            k1, k2 = inv[:, X.index] * n + X.index, inv[:, Y.index] * n + Y.index
        pred = O & (Ic == 2) & M[:, k1].T & M[:, k2].T  # [K, L]
        actual = np.zeros((m, m), dtype=bool)
        good = img >= 0
        actual[np.nonzero(good)[0], img[good]] = True
        bad = np.argwhere(pred != actual)
        if len(bad):
            K, L = (int(v) for v in bad[0])
            return m * m, {"X": list(X), "Y": list(Y), "K": K, "L": L, "image_is_L": bool(actual[K, L])}
        return m * m, None

    checked, w = _first(pmap(per, _pairs(plane), ctx.workers))
    return conclude("C3.3", checked, w)


def _p35(plane: Plane, ctx: Context) -> CheckReport:
    if plane_char(plane) != "Two":
        return skipped("P3.5", NOT_APPLICABLE, detail="char is not 2")
    n = plane.n

    def per(p):
        c = 0
        px, py = divmod(p, n)
        D = derived_plane(plane, p)
        seen = {}
        for X, Y in _pairs(plane):
            if plane.gen_of(p, X.family) in (X.index, Y.index):
                continue
            c += 1
            w = {"X": list(X), "Y": list(Y), "p": p}
            try:
                phi = involutory_translation(plane, X, Y, p)
            except Exception as exc:  # construction failure is the refutation
                return c, {**w, "error": str(exc)}
            key = phi.images.tobytes()
            if key not in seen:
                seen[key] = (phi.is_automorphism()[0], phi.is_involution, D.is_translation(phi))
            ok, invol, trans = seen[key]
            if not (ok and invol and trans):
                return c, {**w, "automorphism": ok, "involution": invol, "translation": trans}
        return c, None

    checked, w = _first(pmap(per, range(plane.n_points), ctx.workers))
    return conclude("P3.5", checked, w, plane, existential=True)


def _p36(plane: Plane, ctx: Context) -> CheckReport:
    if plane_char(plane) != "Two":
        return skipped("P3.6", NOT_APPLICABLE, detail="char is not 2")
    O, Ic, M = orth_matrix(plane), intersection_counts(plane), plane.mask
    checked = 0
    for K in range(plane.n_circles):
        for L in np.nonzero(Ic[K] == 1)[0]:
            if L == K:
                continue
            p = int(np.nonzero(M[K] & M[L])[0][0])
            Ms = np.nonzero(O[K] & O[L])[0]
            checked += len(Ms)
            bad = Ms[~(M[Ms, p] & (Ic[Ms, K] == 1))]
            if len(bad):
                return failed("P3.6", {"K": K, "L": int(L), "M": int(bad[0]), "p": p}, checked=checked)
    return conclude("P3.6", checked)


VERIFIERS = {
    "P2.1": _p21, "P2.2": _p22, "P2.3": _p23, "L2.1": _l21, "T2.1": _t21, "C2.3": _c23,
    "T2.2": _t22, "P2.4": _p24, "P3.1": _p31, "C3.1": _c31, "P3.2": _p32, "P3.3": _p33,
    "T3.1": _t31, "P3.4": _p34, "L3.1": _l31, "C3.2": _c32, "C3.3": _c33, "P3.5": _p35,
    "P3.6": _p36,
}
STATEMENT_IDS = tuple(VERIFIERS)


@timed_check
def verify_statement(plane: Plane, stmt: str, workers: int | None = 1, seed: int = 0,
                     budget: int = 100_000) -> CheckReport:
    """Check one statement about symmetries and orthogonality on ``plane``."""
    try:
        fn = VERIFIERS[stmt]
    except KeyError:
        raise UnknownStatementId(f"unknown statement id {stmt!r}") from None
    return fn(plane, Context(workers=workers, seed=seed, budget=budget))
