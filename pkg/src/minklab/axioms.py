"""Deciders for the hyperbola axioms (H1)-(H5), touching (T), symmetry (S) and
the rectangle axiom (G), each returning a :class:`CheckReport` with a witness
on failure.  :func:`replay_witness` re-validates a failure against a plane.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from ._parallel import pmap
from .plane import Plane, circle_through_scan
from .report import (
    FAIL,
    NOT_APPLICABLE,
    CheckReport,
    failed,
    passed,
    skipped,
    timed_check,
)
from .symmetry import derived_plane, intersection_counts, orth_matrix, orthogonal, sym_table

DEFAULT_BUDGET = 100_000


# -- (H1)-(H5) --------------------------------------------------------------------


def _h1(plane: Plane) -> CheckReport:
    n, N = plane.n, plane.n_points
    for fam in (1, 2):
        pts = np.concatenate([plane.generator_points(fam, i) for i in range(n)])
        cnt = np.bincount(pts, minlength=N)
        bad = np.nonzero(cnt != 1)[0]
        if len(bad):
            return failed("H1", {"axiom": "H1", "point": int(bad[0]), "family": fam, "count": int(cnt[bad[0]])})
    return passed("H1", 2 * N)


def _h2(plane: Plane) -> CheckReport:
    n = plane.n
    for a in range(n):
        A = set(plane.generator_points(1, a).tolist())
        for b in range(n):
            k = len(A.intersection(plane.generator_points(2, b).tolist()))
            if k != 1:
                return failed("H2", {"axiom": "H2", "generators": [a, b], "count": k})
    return passed("H2", n * n)


def _h3(plane: Plane) -> CheckReport:
    n = plane.n
    for k, c in enumerate(plane.circles):
        xs, ys = np.divmod(c, n)
        for fam, coord in ((1, xs), (2, ys)):
            cnt = np.bincount(coord, minlength=n)
            bad = np.nonzero(cnt != 1)[0]
            if len(bad):
                g = int(bad[0])
                return failed("H3", {"axiom": "H3", "circle": k, "generator": [fam, g], "count": int(cnt[g])})
    return passed("H3", 2 * n * plane.n_circles)


def _all_triple_codes(plane: Plane) -> np.ndarray:
    n, N = plane.n, plane.n_points
    xs = np.array(list(combinations(range(n), 3)), dtype=np.int64)
    ys = np.array(list(permutations(range(n), 3)), dtype=np.int64)
    pts = xs[:, None, :] * n + ys[None, :, :]
    codes = (pts[..., 0] * N + pts[..., 1]) * N + pts[..., 2]
    return np.sort(codes.ravel())


def _decode(plane: Plane, code: int) -> list[int]:
    N = plane.n_points
    ab, c = divmod(int(code), N)
    a, b = divmod(ab, N)
    return [a, b, c]


def _h4(plane: Plane) -> CheckReport:
    """Run only on graph planes (H3 holds): circles are then 3-point-indexed."""
    codes, ids = plane._triple_index
    total = len(_all_triple_codes(plane)) if plane.n >= 3 else 0
    if len(codes) > 1:
        dup = np.nonzero(codes[1:] == codes[:-1])[0]
        if len(dup):
            i = int(dup[0])
            return failed("H4", {"axiom": "H4", "points": _decode(plane, codes[i]),
                                 "circles": sorted({int(ids[i]), int(ids[i + 1])})})
    if len(codes) != total:
        missing = np.setdiff1d(_all_triple_codes(plane), codes, assume_unique=True)
        return failed("H4", {"axiom": "H4", "points": _decode(plane, missing[0]), "circles": []})
    return passed("H4", total)


def _h5(plane: Plane) -> CheckReport:
    if any(len(c) >= 3 for c in plane.circles):
        return passed("H5", plane.n_circles)
    return failed("H5", {"axiom": "H5", "largest": max((len(c) for c in plane.circles), default=0)},
                  checked=plane.n_circles)


@timed_check
def check_hyperbola(plane: Plane) -> CheckReport:
    """(H1)-(H5) in order; the witness names the first violated axiom."""
    parts = []
    for name, fn in (("H1", _h1), ("H2", _h2), ("H3", _h3), ("H4", _h4), ("H5", _h5)):
        if any(r.verdict == FAIL for r in parts):
            parts.append(skipped(name, NOT_APPLICABLE, detail="an earlier axiom fails"))
            continue
        parts.append(fn(plane))
    bad = next((r for r in parts if r.verdict == FAIL), None)
    checked = sum(r.checked for r in parts)
    if bad is not None:
        return failed("H", bad.witness, checked=checked, sub=parts, detail=f"{bad.statement} fails")
    return passed("H", checked, sub=parts)


def _precondition(plane: Plane, statement: str) -> CheckReport | None:
    h = check_hyperbola(plane)
    if h.passed:
        return None
    return failed(statement, h.witness, detail="not a hyperbola structure: " + h.detail)


# -- (T) ------------------------------------------------------------------------------


def _touching_fail(plane: Plane, C: int):
    """First (a, b) on/off C whose tangent-circle count is not 1, or None."""
    M = plane.mask
    n, N = plane.n, plane.n_points
    inter = intersection_counts(plane)[C]
    Bs = np.nonzero(inter == 1)[0]
    Cpts = plane.circles[C]
    cnt = np.zeros((N, N), dtype=np.int32)
    if len(Bs):
        a_of = np.argmax(M[Bs] & M[C], axis=1)
        pts = np.stack([plane.circles[b] for b in Bs])
        np.add.at(cnt, (np.broadcast_to(a_of[:, None], pts.shape), pts), 1)
    xs, ys = np.divmod(np.arange(N), n)
    for a in Cpts:
        ax, ay = divmod(int(a), n)
        ok_b = ~M[C] & (xs != ax) & (ys != ay)
        bad = np.nonzero(ok_b & (cnt[a] != 1))[0]
        if len(bad):
            b = int(bad[0])
            return int(a), b, int(cnt[a, b])
    return None


@timed_check
def check_touching(plane: Plane, workers: int | None = 1, cross_check: int = 3, seed: int = 0) -> CheckReport:
    """(T) over every circle C, a in C, b off C and off [a].

    ``cross_check`` derived planes at seeded random points are tested for
    affinity; a disagreement with the (T) verdict is reported as a failure.
    """
    pre = _precondition(plane, "T")
    if pre is not None:
        return pre
    n = plane.n
    per_a = plane.n_points - (2 * n - 1) - (n - 1)
    res = list(pmap(lambda C: _touching_fail(plane, C), range(plane.n_circles), workers))
    bad = next(((C, r) for C, r in enumerate(res) if r is not None), None)
    rng = np.random.default_rng(seed)
    sample = sorted(rng.choice(plane.n_points, size=min(cross_check, plane.n_points), replace=False).tolist())
    affine = {p: derived_plane(plane, p).is_affine()[0] for p in sample}
    sub = [CheckReport("T/derived", "PASS" if all(affine.values()) else FAIL, checked=len(sample),
                       detail="derived planes at " + ",".join(map(str, sample)))]
    total = plane.n_circles * n * per_a
    if bad is not None:
        C, (a, b, c) = bad
        return failed("T", {"axiom": "T", "C": C, "a": a, "b": b, "count": c}, checked=total, sub=sub)
    if not all(affine.values()):
        p = next(p for p, ok in affine.items() if not ok)
        return failed("T", {"axiom": "T-derived", "p": p}, checked=total, sub=sub,
                      detail="(T) holds but a derived plane is not affine")
    return passed("T", total, sub=sub)


# -- (S) ---------------------------------------------------------------------------------


def _symmetry_fail(plane: Plane, K: int, O: np.ndarray, S: np.ndarray):
    pts = np.stack(plane.circles)  # (m, n)
    img = S[K][pts]
    M = plane.mask
    hit = M[np.arange(len(pts))[:, None], img] & ~M[K][pts]
    bad = np.nonzero(hit.any(axis=1) & ~O[K])[0]
    bad = bad[bad != K]
    if len(bad) == 0:
        return None
    L = int(bad[0])
    j = int(np.nonzero(hit[L])[0][0])
    return L, int(pts[L, j])


@timed_check
def check_symmetry(plane: Plane, workers: int | None = 1) -> CheckReport:
    """(S): for all K, L and p in L minus K with S_K(p) in L, K is orthogonal to L."""
    pre = _precondition(plane, "S")
    if pre is not None:
        return pre
    O, S = orth_matrix(plane), sym_table(plane)
    m = plane.n_circles
    res = list(pmap(lambda K: _symmetry_fail(plane, K, O, S), range(m), workers))
    for K, r in enumerate(res):
        if r is not None:
            L, p = r
            return failed("S", {"axiom": "S", "K": K, "L": L, "p": p, "S_K(p)": int(S[K][p])},
                          checked=m * m)
    return passed("S", m * m * plane.n)


# -- (G) -------------------------------------------------------------------------------------


def _direct_batch(plane: Plane, rng, size: int):
    """Sample rectangle configurations; return (A, B, C, xs, ok) arrays."""
    P, Pi, n, m = plane.perms, plane.inv_perms, plane.n, plane.n_circles
    A, B, C = (rng.integers(0, m, size) for _ in range(3))
    xs = np.sort(np.argsort(rng.random((size, n)), axis=1)[:, :4], axis=1)
    cx = P[C[:, None], xs]  # y of q_i, equal to y of p_i q_i
    qx = Pi[B[:, None], cx]  # x of q_i
    ry = P[A[:, None], xs]  # y of p_i
    r = qx * n + ry  # the points q_i p_i
    circ = plane.lookup_triples(r[:, 0], r[:, 1], r[:, 2])
    ok = (circ >= 0) & plane.mask[np.maximum(circ, 0), r[:, 3]]
    return A, B, C, xs, ok


@timed_check
def check_rectangle(plane: Plane, mode: str = "closure", budget: int = DEFAULT_BUDGET, seed: int = 0,
                    workers: int | None = 1, E: int | None = None) -> CheckReport:
    """(G) by composition closure of ``{f_K}`` (exhaustive) or by direct sampling.

    Direct configurations are drawn as circles A, B, C and four distinct
    first coordinates x_i: ``p_i = (x_i, a x_i)`` on A, ``q_i`` the point of
    B with ``p_i q_i`` on C.  Every admissible configuration arises this way.
    """
    pre = _precondition(plane, "G")
    if pre is not None:
        return pre
    if mode == "closure":
        from .permalg import check_closure, perm_table

        rep = check_closure(perm_table(plane, E), workers, statement="G")
        if rep.witness is not None:
            rep.witness = {"axiom": "G", "mode": "closure", **rep.witness}
        return rep
    if mode != "direct":
        raise ValueError("mode must be 'closure' or 'direct'")
    if plane.n < 4:
        return skipped("G", "empty-domain", coverage="sampled", seed=seed, samples=budget,
                       detail="circles have fewer than four points")
    rng = np.random.default_rng(seed)
    done = 0
    while done < budget:
        size = min(20_000, budget - done)
        A, B, C, xs, ok = _direct_batch(plane, rng, size)
        bad = np.nonzero(~ok)[0]
        if len(bad):
            i = int(bad[0])
            w = {"axiom": "G", "mode": "direct", "A": int(A[i]), "B": int(B[i]), "C": int(C[i]),
                 "xs": xs[i].tolist()}
            return failed("G", w, checked=done + i, coverage="sampled", seed=seed, samples=budget)
        done += size
    return passed("G", done, coverage="sampled", seed=seed, samples=budget)


# -- witness replay ---------------------------------------------------------------------------


def replay_witness(plane: Plane, witness: dict) -> bool:
    """True when ``witness`` still exhibits the violation it names on ``plane``."""
    ax = witness.get("axiom")
    M = plane.mask
    n = plane.n
    if ax == "H1":
        fam, p = witness["family"], witness["point"]
        hits = sum(p in set(plane.generator_points(fam, i).tolist()) for i in range(n))
        return hits != 1
    if ax == "H2":
        a, b = witness["generators"]
        return len(set(plane.generator_points(1, a).tolist()) & set(plane.generator_points(2, b).tolist())) != 1
    if ax == "H3":
        k = witness["circle"]
        fam, g = witness["generator"]
        on = M[k, plane.generator_points(fam, g)].sum()
        return int(on) != 1
    if ax == "H4":
        a, b, c = witness["points"]
        if plane.parallel(a, b) or plane.parallel(b, c) or plane.parallel(a, c):
            return False
        return len(circle_through_scan(plane, a, b, c)) != 1
    if ax == "H5":
        return all(len(c) < 3 for c in plane.circles)
    if ax == "T":
        C, a, b = witness["C"], witness["a"], witness["b"]
        if not M[C, a] or M[C, b] or plane.parallel(a, b):
            return False
        cand = np.nonzero(M[:, a] & M[:, b])[0]
        return int(((M[cand] & M[C]).sum(axis=1) == 1).sum()) != 1
    if ax == "T-derived":
        return not derived_plane(plane, witness["p"]).is_affine()[0]
    if ax == "S":
        K, L, p = witness["K"], witness["L"], witness["p"]
        if K == L or not M[L, p] or M[K, p]:
            return False
        return bool(M[L, sym_table(plane)[K][p]]) and not orthogonal(plane, K, L)
    if ax == "G" and witness.get("mode") == "closure":
        from .permalg import f_of_circle, perm_table

        E, L, K = witness["E"], witness["L"], witness["K"]
        comp = f_of_circle(plane, E, L) @ f_of_circle(plane, E, K)
        return perm_table(plane, E).circle_of(comp) < 0
    if ax == "G" and witness.get("mode") == "direct":
        A, B, C, xs = witness["A"], witness["B"], witness["C"], witness["xs"]
        p = [plane.point(x, int(plane.perms[A, x])) for x in xs]
        q = [plane.point(int(plane.inv_perms[B, plane.perms[C, x]]), int(plane.perms[C, x])) for x in xs]
        r = [plane.point(plane.coords(qi)[0], plane.coords(pi)[1]) for pi, qi in zip(p, q)]
        hyp = (M[:, [plane.point(plane.coords(pi)[0], plane.coords(qi)[1]) for pi, qi in zip(p, q)]].all(axis=1).any()
               and M[B, q].all() and M[A, p].all())
        return bool(hyp) and not M[:, r].all(axis=1).any()
    raise ValueError(f"unknown witness kind {ax!r}")


def check_axiom(plane: Plane, axiom: str, **kw) -> CheckReport:
    axiom = axiom.upper()
    if axiom in ("H", "HYPERBOLA"):
        return check_hyperbola(plane)
    if axiom == "T":
        return check_touching(plane, workers=kw.get("workers", 1), seed=kw.get("seed", 0))
    if axiom == "S":
        return check_symmetry(plane, workers=kw.get("workers", 1))
    if axiom == "G":
        return check_rectangle(plane, mode=kw.get("mode", "closure"), budget=kw.get("budget", DEFAULT_BUDGET),
                               seed=kw.get("seed", 0), workers=kw.get("workers", 1), E=kw.get("E"))
    raise ValueError(f"unknown axiom {axiom!r}")
