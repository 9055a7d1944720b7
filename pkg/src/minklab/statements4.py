"""Verifiers for the statements of the base-circle calculus.

Permutations are the rows ``F[K]`` of a :class:`PermTable` over E, indexed
by position on E (the first coordinate).  ``F[L][F[K]]`` is ``f_L o f_K``.
A circle K, graph of ``g``, is ``P[K]``; ``Pi[K]`` is ``g^-1``.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from ._parallel import pmap
from .errors import MinklabError, UnknownStatementId
from .permalg import decompose_involutions, perm_table
from .plane import Plane
from .report import NOT_APPLICABLE, SKIPPED, CheckReport, failed, passed, timed_check
from .statements import conclude, _first
from .symmetry import cached, intersection_counts, orth_matrix, plane_char

EXHAUSTIVE_LIMIT = 10**8


class _Ctx:
    def __init__(self, plane: Plane, E, workers, seed, budget):
        self.plane = plane
        self.T = perm_table(plane, E)
        self.E = self.T.E
        self.F = self.T.F
        self.O = orth_matrix(plane)
        self.Ic = intersection_counts(plane)
        self.M = plane.mask
        self.P, self.Pi = plane.perms, plane.inv_perms
        self.n = plane.n
        self.m = plane.n_circles
        self.workers, self.seed, self.budget = workers, seed, budget
        self.perpE = np.nonzero(self.O[self.E])[0]
        self.Epts = plane.circles[self.E]

    def look(self, rows) -> np.ndarray:
        return self.T.lookup(np.atleast_2d(rows))

    def is_i(self, N: np.ndarray, identity: np.ndarray) -> np.ndarray:
        """N is orthogonal to E, or N = E for an identity product."""
        N = np.asarray(N)
        ok = N >= 0
        safe = np.maximum(N, 0)
        return ok & (self.O[self.E][safe] | ((safe == self.E) & identity))


def _ident(rows, n):
    return np.all(np.atleast_2d(rows) == np.arange(n), axis=1)


# -- the four-circle chain ---------------------------------------------------------


def _chain_scan(c: _Ctx, K: int, want):
    """Chain configurations with K fixed.

    (ii): K, M orthogonal to L, N.  For each (L, N, M) the callback ``want``
    gets vectors and returns (hypothesis mask, conclusion mask, extra info).
    Conclusion of the chain: ``K x = N(M^-1(L x))`` for every x.
    """
    O, P, Pi = c.O, c.P, c.Pi
    Ks = np.nonzero(O[K])[0]
    checked = 0
    total_extra = 0
    for L in Ks:
        Ms = np.nonzero(O[L])[0]
        sub = O[np.ix_(Ks, Ms)]
        ni, mi = np.nonzero(sub)
        if not len(ni):
            continue
        N, M = Ks[ni], Ms[mi]
        chain = np.take_along_axis(Pi[M], np.broadcast_to(P[L], (len(M), c.n)), axis=1)
        chain = np.take_along_axis(P[N], chain, axis=1)
        concl = np.all(chain == P[K], axis=1)
        hyp, extra = want(K, int(L), N, M)
        checked += int(hyp.sum())
        total_extra += extra
        bad = np.nonzero(hyp & ~concl)[0]
        if len(bad):
            i = int(bad[0])
            return checked, {"K": K, "L": int(L), "M": int(M[i]), "N": int(N[i])}, total_extra
    return checked, None, total_extra


def _hyp_i(c: _Ctx):
    """(i): p, q in one Sigma_2 generator, p != q, p in K and L, q in M and N."""
    Pi = c.Pi

    def want(K, L, N, M):
        ys = np.nonzero(Pi[K] == Pi[L])[0]
        hyp = np.zeros(len(N), dtype=bool)
        for y in ys:
            hyp |= (Pi[M, y] == Pi[N, y]) & (Pi[M, y] != Pi[K, y])
        return hyp, 0

    return want


def _hyp_i_prime(c: _Ctx):
    """(i'): some x = (a, M a) on M with N a != L a and N a = K(L^-1(M a))."""
    P, Pi = c.P, c.Pi

    def want(K, L, N, M):
        Ma = P[M]
        rhs = P[K][Pi[L][Ma]]
        hyp = np.any((P[N] == rhs) & (P[N] != P[L][None, :]), axis=1)
        return hyp, 0

    return want


def _l41(c: _Ctx) -> CheckReport:
    checked, w = _first((ch, w) for ch, w, _ in pmap(lambda K: _chain_scan(c, K, _hyp_i(c)), range(c.m), c.workers))
    return conclude("L4.1", checked, w)


def _c44(c: _Ctx) -> CheckReport:
    checked, w = _first((ch, w) for ch, w, _ in
                        pmap(lambda K: _chain_scan(c, K, _hyp_i_prime(c)), range(c.m), c.workers))
    return conclude("C4.4", checked, w)


def _r42(c: _Ctx) -> CheckReport:
    """Chain configurations with K orthogonal to M: none in char 2, and then N is orthogonal to L."""
    two = plane_char(c.plane) == "Two"
    base = _hyp_i(c)
    O = c.O

    def want(K, L, N, M):
        hyp, _ = base(K, L, N, M)
        km = hyp & O[K, M]
        return km, int(km.sum())

    def per(K):
        total, found = 0, None
        Ks = np.nonzero(O[K])[0]
        for L in Ks:
            Ms = np.nonzero(O[L])[0]
            ni, mi = np.nonzero(O[np.ix_(Ks, Ms)])
            if not len(ni):
                continue
            N, M = Ks[ni], Ms[mi]
            km, cnt = want(K, int(L), N, M)
            total += cnt
            bad = np.nonzero(km & (two | ~O[N, L]))[0]
            if len(bad) and found is None:
                i = int(bad[0])
                found = {"K": K, "L": int(L), "M": int(M[i]), "N": int(N[i]), "char": "Two" if two else "NotTwo"}
                break
        return total, found

    res = list(pmap(per, range(c.m), c.workers))
    count = sum(r[0] for r in res)
    w = next((r[1] for r in res if r[1] is not None), None)
    if w is not None:
        return failed("R4.2", w, checked=count)
    detail = f"{count} chain configurations with K orthogonal to M"
    if two:
        # absence is the claim: an exhaustive search over every chain configuration
        chain_total = sum(ch for ch, _, _ in pmap(lambda K: _chain_scan(c, K, base), range(c.m), c.workers))
        return passed("R4.2", chain_total, detail=detail + " (char 2, absence checked)")
    return conclude("R4.2", count, detail=detail)


# -- the eight-point configuration ----------------------------------------------------------------------


def _l42(c: _Ctx) -> CheckReport:
    plane, n, P, M = c.plane, c.n, c.P, c.M
    N_pts = plane.n_points
    xa, xc = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    pairs = [(p, r) for p in range(N_pts) for r in range(N_pts)
             if p // n != r // n and p % n != r % n]

    def per(pr):
        p, r = pr
        (px, py), (rx, ry) = divmod(p, n), divmod(r, n)
        s, q = px * n + ry, rx * n + py
        B1 = np.nonzero(M[:, p] & M[:, r])[0]
        B2 = np.nonzero(M[:, q] & M[:, s])[0]
        km = np.array([(a, b) for a, b in permutations(B1, 2)], dtype=np.int64).reshape(-1, 2)
        ln = np.array([(a, b) for a, b in permutations(B2, 2)], dtype=np.int64).reshape(-1, 2)
        if not len(km) or not len(ln):
            return 0, None
        K, Mc = km[:, 0], km[:, 1]
        L, Nc = ln[:, 0], ln[:, 1]
        La = P[L][:, xa]  # (ln, n, n): L x_a
        Nc_ = P[Nc][:, xc]  # N x_c
        Mk = P[Mc][:, xc]  # (km, n, n): M x_c
        Ka = P[K][:, xa]  # K x_a
        Acond = Mk[:, None] == La[None, :]  # b = c a on M
        Ccond = Ka[:, None] == Nc_[None, :]  # d = a c on K
        # eight different points
        a = xa * n + La
        b = xc * n + La
        cc = xc * n + Nc_
        d = xa * n + Nc_
        distinct = (xa != xc)[None] & (La != Nc_)
        for v in (p, r, s, q):
            distinct &= (a != v) & (b != v) & (cc != v) & (d != v)
        hyp = np.any(Acond & Ccond & distinct[None], axis=(2, 3))  # (km, ln)
        concl = np.all(~Acond | Ccond, axis=(2, 3))
        bad = np.argwhere(hyp & ~concl)
        if len(bad):
            i, j = bad[0]
            return int(hyp.sum()), {"p": p, "r": r, "K": int(K[i]), "M": int(Mc[i]), "L": int(L[j]),
                                    "N": int(Nc[j])}
        return int(hyp.sum()), None

    checked, w = _first(pmap(per, pairs, c.workers))
    return conclude("L4.2", checked, w)


# -- decompositions ------------------------------------------------------------------------------


def _c41(c: _Ctx) -> CheckReport:
    F, O, M, Pi, n, E = c.F, c.O, c.M, c.Pi, c.n, c.E
    checked = 0
    # (i)
    for L in c.perpE:
        for N in c.perpE:
            qs = c.Epts[M[N, c.Epts] & ~M[L, c.Epts]]
            if not len(qs):
                continue
            K = int(c.look(F[L][F[N]])[0])
            for q in qs:
                checked += 1
                Lq = int(Pi[L, q % n]) * n + q % n
                if K < 0 or not (M[K, Lq] and O[K, L] and O[K, N]):
                    return conclude("C4.1", checked, {"part": "i", "L": int(L), "N": int(N), "q": int(q), "K": K},
                                    c.plane, existential=True)
    two = plane_char(c.plane) == "Two"

    # (ii): an independent search, plus the constructive recipe
    def per(K):
        cnt = 0
        if K == E or (two and O[K, E]):
            return 0, None
        cand = O[E] & O[K]
        for q in c.Epts[~M[K, c.Epts]]:
            cnt += 1
            q = int(q)
            Kq = int(Pi[K, q % n]) * n + q % n
            Ns = np.nonzero(cand & M[:, q])[0]
            Ls = np.nonzero(cand & M[:, Kq])[0]
            comp = F[Ls][:, F[Ns]]  # [l, k] = f_L o f_N
            if not np.any(np.all(comp == F[K], axis=-1)):
                return cnt, {"part": "ii", "K": K, "q": q}
            try:
                decompose_involutions(c.plane, E, K, q)
            except MinklabError as exc:
                return cnt, {"part": "ii-construction", "K": K, "q": q, "error": str(exc)}
        return cnt, None

    ch, w = _first(pmap(per, range(c.m), c.workers))
    return conclude("C4.1", checked + ch, w, c.plane, existential=True)


def _c41a(c: _Ctx) -> CheckReport:
    """(i) ranges over non-parallel q, s not both on E."""
    plane, F, O, M, P, Pi, n, E = c.plane, c.F, c.O, c.M, c.P, c.Pi, c.n, c.E
    N_pts = plane.n_points

    def per_i(q):
        qx, qy = divmod(q, n)
        qE, Eq = qx * n + int(P[E, qx]), int(Pi[E, qy]) * n + qy
        cnt = 0
        for s in range(N_pts):
            sx, sy = divmod(s, n)
            if sx == qx or sy == qy or (M[E, q] and M[E, s]):
                continue
            B = c.perpE[M[c.perpE, q] & M[c.perpE, s]]
            if not len(B):
                continue
            comp = F[B][:, F[B]].reshape(-1, n)
            Ks = c.look(comp)
            cnt += len(comp)
            ok = (Ks >= 0) & M[np.maximum(Ks, 0), qE] & M[np.maximum(Ks, 0), Eq]
            if not ok.all():
                i = int(np.nonzero(~ok)[0][0])
                return cnt, {"part": "i", "q": q, "s": s, "L": int(B[i // len(B)]), "N": int(B[i % len(B)])}
        return cnt, None

    ch1, w = _first(pmap(per_i, range(N_pts), c.workers))
    if w is not None:
        return conclude("C4.1a", ch1, w, plane, existential=True)

    def per_ii(p):
        p = int(p)
        px, py = divmod(p, n)
        cnt = 0
        for r in c.Epts:
            r = int(r)
            rx, ry = divmod(r, n)
            if rx == px or ry == py:
                continue
            pr, rp = px * n + ry, rx * n + py
            bund = np.nonzero(M[:, pr] & M[:, rp] & O[E])[0]
            Ks = np.nonzero(M[:, p] & M[:, r])[0]
            for cpt in range(N_pts):
                cx, cy = divmod(cpt, n)
                if cx in (px, rx) or cy in (py, ry):
                    continue
                Ns = bund[M[bund, cpt]]
                comp = F[bund][:, F[Ns]]  # [l, k] = f_L o f_N
                for K in Ks:
                    cnt += 1
                    if not np.any(np.all(comp == F[K], axis=-1)):
                        return cnt, {"part": "ii", "p": p, "r": r, "c": cpt, "K": int(K)}
        return cnt, None

    ch2, w = _first(pmap(per_ii, c.Epts, c.workers))
    return conclude("C4.1a", ch1 + ch2, w, plane, existential=True)


def _p41(c: _Ctx) -> CheckReport:
    """L != N is required: for L = N the product is the identity."""
    F, M, E = c.F, c.M, c.E
    checked = 0
    for L in c.perpE:
        for N in c.perpE:
            if L == N:
                continue
            ps = c.Epts[M[L, c.Epts] & M[N, c.Epts]]
            if not len(ps):
                continue
            K = int(c.look(F[N][F[L]])[0])
            for p in ps:
                checked += 1
                if K < 0 or c.Ic[K, E] != 1 or not M[K, p]:
                    return conclude("P4.1", checked, {"L": int(L), "N": int(N), "p": int(p), "K": K},
                                    c.plane, existential=True)
    return conclude("P4.1", checked)


def _c42(c: _Ctx) -> CheckReport:
    F, M, E, n = c.F, c.M, c.E, c.n
    checked = 0
    for K in np.nonzero(c.Ic[E] == 1)[0]:
        if K == E:
            continue
        p = int(np.nonzero(M[K] & M[E])[0][0])
        Ls = c.perpE[M[c.perpE, p]]
        if not len(Ls):
            continue
        comp = F[Ls][:, F[K]]
        N = c.look(comp)
        checked += len(Ls)
        ok = c.is_i(N, _ident(comp, n)) & M[np.maximum(N, 0), p]
        if not ok.all():
            i = int(np.nonzero(~ok)[0][0])
            return conclude("C4.2", checked, {"K": int(K), "L": int(Ls[i]), "p": p, "N": int(N[i])},
                            c.plane, existential=True)
    return conclude("C4.2", checked)


def _c43(c: _Ctx) -> CheckReport:
    F, M, n = c.F, c.M, c.n
    checked = 0
    for p in c.Epts:
        C = c.perpE[M[c.perpE, p]]
        if not len(C):
            continue
        two = F[C][:, F[C]]  # [L, K] = i_L o i_K
        three = F[C][:, two].reshape(-1, n)  # [M, L, K]
        N = c.look(three)
        checked += len(three)
        ok = c.is_i(N, _ident(three, n)) & M[np.maximum(N, 0), p]
        if not ok.all():
            i = int(np.nonzero(~ok)[0][0])
            k = len(C)
            Mi, Li, Ki = i // (k * k), (i // k) % k, i % k
            return conclude("C4.3", checked, {"p": int(p), "K": int(C[Ki]), "L": int(C[Li]), "M": int(C[Mi]),
                                              "N": int(N[i])}, c.plane, existential=True)
    return conclude("C4.3", checked)


def _products(c: _Ctx, stmt: str, lefts, rights, order: str, check_rows=None) -> CheckReport:
    """Every composition of a left and right circle permutation is a circle permutation.

    ``order`` 'lr' composes ``f_left o f_right``; 'rl' composes ``f_right o f_left``.
    """
    F = c.F
    lefts, rights = np.asarray(lefts), np.asarray(rights)

    def per(L):
        comp = F[L][F[rights]] if order == "lr" else F[rights][:, F[L]]
        hit = c.look(comp)
        bad = np.nonzero(hit < 0)[0]
        if len(bad):
            return len(rights), {"left": int(L), "right": int(rights[bad[0]])}
        return len(rights), None

    checked, w = _first(pmap(per, lefts, c.workers))
    return conclude(stmt, checked, w, c.plane, existential=True)


def _p42(c: _Ctx) -> CheckReport:
    Ls = c.perpE[c.Ic[c.perpE, c.E] > 0]
    # f_K o i_L: compose K (outer) after L
    return _products(c, "P4.2", Ls, np.arange(c.m), "rl")


def _p43(c: _Ctx) -> CheckReport:
    F, checked = c.F, 0
    for L in c.perpE:
        Ks = np.nonzero(c.Ic[L] > 0)[0]
        comp = F[L][F[Ks]]
        hit = c.look(comp)
        checked += len(Ks)
        bad = np.nonzero(hit < 0)[0]
        if len(bad):
            return conclude("P4.3", checked, {"L": int(L), "K": int(Ks[bad[0]])}, c.plane, existential=True)
    return conclude("P4.3", checked)


def _p44(c: _Ctx) -> CheckReport:
    return _products(c, "P4.4", c.perpE, c.perpE, "lr")


def _p45(c: _Ctx) -> CheckReport:
    return _products(c, "P4.5", c.perpE, np.arange(c.m), "lr")


def _l43(c: _Ctx) -> CheckReport:
    return _products(c, "L4.3", np.arange(c.m), np.arange(c.m), "lr")


def _t41(c: _Ctx) -> CheckReport:
    from .axioms import check_rectangle

    closure = check_rectangle(c.plane, mode="closure", workers=c.workers, E=c.E)
    direct = check_rectangle(c.plane, mode="direct", budget=c.budget, seed=c.seed)
    closure.statement, direct.statement = "T4.1/closure", "T4.1/direct"
    parts = [closure, direct]
    bad = next((r for r in parts if r.failed), None)
    if bad is not None:
        return failed("T4.1", bad.witness, checked=bad.checked, sub=parts)
    return passed("T4.1", closure.checked, sub=parts,
                  detail=f"closure exhaustive; direct sampled (seed={c.seed}, n={c.budget})")


def _r41(c: _Ctx) -> CheckReport:
    """Each f_K (char 2: each non-involutory f_K) is i_L o i_N with i_L or i_N having a fixed point."""
    F, n, E = c.F, c.n, c.E
    two = plane_char(c.plane) == "Two"
    D = c.perpE
    has_fix = c.Ic[D, E] > 0
    comp = F[D][:, F[D]]  # [L, N]
    idx = c.look(comp.reshape(-1, n)).reshape(len(D), len(D))
    good = has_fix[:, None] | has_fix[None, :]
    covered = np.zeros(c.m, dtype=bool)
    sel = idx >= 0
    covered[idx[sel & good]] = True
    ident = np.arange(n)
    invol = np.all(np.take_along_axis(F, F, axis=1) == ident, axis=1)
    targets = np.arange(c.m) if not two else np.nonzero(~invol)[0]
    bad = targets[~covered[targets]]
    if len(bad):
        return conclude("R4.1", len(targets), {"K": int(bad[0])}, c.plane, existential=True)
    return conclude("R4.1", len(targets))


VERIFIERS = {
    "L4.1": _l41, "L4.2": _l42, "C4.1": _c41, "C4.1a": _c41a, "P4.1": _p41, "C4.2": _c42, "C4.3": _c43,
    "P4.2": _p42, "P4.3": _p43, "P4.4": _p44, "P4.5": _p45, "L4.3": _l43, "T4.1": _t41, "C4.4": _c44,
    "R4.1": _r41, "R4.2": _r42,
}
STATEMENT4_IDS = tuple(VERIFIERS)


@timed_check
def verify(plane: Plane, stmt: str, E: int | None = None, workers: int | None = 1, seed: int = 0,
           budget: int = 100_000) -> CheckReport:
    try:
        fn = VERIFIERS[stmt]
    except KeyError:
        raise UnknownStatementId(f"unknown statement id {stmt!r}") from None
    from .axioms import check_symmetry

    rep = fn(_Ctx(plane, E, workers, seed, budget))
    extra = f"base circle {perm_table(plane, E).E}"
    rep.detail = f"{rep.detail}; {extra}" if rep.detail else extra
    sym = cached(plane, "S-report", lambda: check_symmetry(plane, workers))
    if not sym.passed:
        # every statement here assumes (S); the unconditional outcome is kept as a sub-report
        rep.statement = f"{stmt}/unconditional"
        return CheckReport(stmt, SKIPPED, checked=rep.checked, reason=NOT_APPLICABLE,
                           detail=f"plane fails (S); {extra}", sub=[rep])
    return rep
