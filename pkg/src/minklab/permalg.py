"""Permutations of a base circle E induced by circles: ``f_K(x) = (Kx)E``.

Points of E are addressed by their position on E (E's points in index
order, which for a graph plane is the order of the first coordinate).  With
``E = graph(e)`` and ``K = graph(g)`` this gives ``f_K = g^-1 o e`` on
positions.  ``i_K`` is ``f_K`` for a circle orthogonal to E, an involution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import BadConfiguration, ClosureViolation, HypothesisViolated
from .permset import PermIndex, PermutationSet, sharp3_witness
from .plane import Plane, trace
from .report import CheckReport, failed, passed, timed_check
from .symmetry import cached, orth_matrix, plane_char, sym_table


def default_base_circle(plane: Plane) -> int:
    """The graph of the identity when the plane has it, else circle 0."""
    k = plane.circle_of_perm(np.arange(plane.n))
    return k if k >= 0 else 0


@dataclass(frozen=True)
class CirclePerm:
    """A permutation of the points of E, by position on E."""

    E: int
    images: np.ndarray
    tag: tuple = field(default=(), compare=False)

    def __post_init__(self):
        img = np.asarray(self.images, dtype=np.int64)
        if not np.array_equal(np.sort(img), np.arange(len(img))):
            raise ValueError("images do not form a permutation of E")
        object.__setattr__(self, "images", img)

    def __eq__(self, other):
        return isinstance(other, CirclePerm) and self.E == other.E and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash((self.E, self.images.tobytes()))

    def __matmul__(self, other: "CirclePerm") -> "CirclePerm":
        if other.E != self.E:
            raise ValueError("base circles differ")
        return CirclePerm(self.E, self.images[other.images], ("compose", self.tag, other.tag))

    def inverse(self) -> "CirclePerm":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(inv))
        return CirclePerm(self.E, inv, ("inverse", self.tag))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(len(self.images))))

    @property
    def fixed_positions(self) -> np.ndarray:
        return np.nonzero(self.images == np.arange(len(self.images)))[0]


def f_of_circle(plane: Plane, E: int, K: int) -> CirclePerm:
    """``f_K`` computed point by point from the incidence primitives."""
    pts = plane.circles[E]
    pos = {int(p): i for i, p in enumerate(pts)}
    img = np.empty(len(pts), dtype=np.int64)
    for i, x in enumerate(pts):
        y = trace(plane, int(x), K, "Kp")
        img[i] = pos[trace(plane, y, E, "pK")]
    return CirclePerm(E, img, ("circle", K))


class PermTable:
    """All ``f_K`` over one base circle, with lookup from permutation to circle."""

    def __init__(self, plane: Plane, E: int | None = None):
        self.plane = plane
        self.E = default_base_circle(plane) if E is None else int(E)
        P, Pi = plane.perms, plane.inv_perms
        # positions on E are x-coordinates: f_K(a) = g^-1(e(a))
        F = Pi[:, P[self.E]]
        F.setflags(write=False)
        self.F = F
        self.index = PermIndex(F)

    def __len__(self):
        return len(self.F)

    def perm(self, K: int) -> CirclePerm:
        return CirclePerm(self.E, self.F[K], ("circle", int(K)))

    def lookup(self, rows) -> np.ndarray:
        return self.index.lookup(np.asarray(rows))

    def circle_of(self, f) -> int:
        """Circle K with ``f_K == f``, or -1."""
        img = f.images if isinstance(f, CirclePerm) else f
        return int(self.index.lookup(np.asarray(img)))

    def i_mask(self) -> np.ndarray:
        """Circles orthogonal to E (whose ``f`` is an involution ``i``)."""
        return orth_matrix(self.plane)[self.E]

    def as_permutation_set(self) -> PermutationSet:
        return PermutationSet(self.F, name=f"f over E={self.E}")

    def first_closure_violation(self, workers: int | None = 1):
        """First (L, K) in row-major order with ``f_L o f_K`` missing from the table."""
        F, idx = self.F, self.index

        def scan(L):
            hit = idx.lookup(F[L][F])
            bad = np.nonzero(hit < 0)[0]
            return (L, int(bad[0])) if len(bad) else None

        for res in pmap(scan, range(len(F)), workers):
            if res is not None:
                return res
        return None


def perm_table(plane: Plane, E: int | None = None) -> PermTable:
    E = default_base_circle(plane) if E is None else int(E)
    return cached(plane, ("permtable", E), lambda: PermTable(plane, E))


def invert(plane: Plane, E: int, K: int) -> int:
    """The circle ``S_E(K)``, whose permutation is ``f_K^-1``."""
    S = sym_table(plane)[E]
    img = np.sort(S[plane.circles[K]])
    hits = np.nonzero(plane.mask[:, img].all(axis=1))[0]
    if len(hits) != 1:
        raise ClosureViolation(f"S_E(K) is not a circle for K={K}", pair=(E, K))
    return int(hits[0])


def compose_resolve(table: PermTable, L: int, K: int) -> int:
    """The circle M with ``f_M = f_L o f_K``."""
    comp = table.F[L][table.F[K]]
    M = table.circle_of(comp)
    if M < 0:
        raise ClosureViolation(f"f_{L} o f_{K} is not induced by a circle", pair=(int(L), int(K)),
                               composite=comp.tolist())
    return M


@timed_check
def check_closure(table: PermTable, workers: int | None = 1, statement: str = "closure") -> CheckReport:
    m = len(table)
    bad = table.first_closure_violation(workers)
    if bad is None:
        return passed(statement, m * m, detail=f"base circle {table.E}")
    L, K = bad
    comp = table.F[L][table.F[K]]
    return failed(statement, {"E": table.E, "L": L, "K": K, "composite": comp.tolist()},
                  checked=L * m + K, detail=f"base circle {table.E}")


@timed_check
def sharp3_certify(pset, statement: str = "sharp3") -> CheckReport:
    """Exhaustive sharp 3-transitivity check with a witness triple pair."""
    perms = pset.perms if isinstance(pset, PermutationSet) else np.asarray(pset)
    n = perms.shape[1]
    w = sharp3_witness(perms, n)
    checked = (n * (n - 1) * (n - 2)) ** 2
    if w is None:
        return passed(statement, checked)
    src, dst, cnt = w
    return failed(statement, {"source": list(src), "target": list(dst), "count": cnt})


def decompose_involutions(plane: Plane, E: int, K: int, anchor: int) -> tuple[int, int]:
    """Circles (L, N) orthogonal to E and K with ``f_K = i_L o i_N``, anchor on N, Kq on L.

    Built from explicit three-point and bundle constructions and then
    checked; any check failure raises.
    """
    from .plane import bundle, circle_through

    M, O, S = plane.mask, orth_matrix(plane), sym_table(plane)
    q = int(anchor)
    if not M[E, q]:
        raise HypothesisViolated(f"anchor {q} is not on the base circle")
    if K == E:
        cand = np.nonzero(O[E] & M[:, q])[0]
        if not len(cand):
            raise HypothesisViolated("no circle through the anchor is orthogonal to E")
        return int(cand[0]), int(cand[0])
    if M[K, q]:
        raise HypothesisViolated(f"anchor {q} lies on K")
    Kq = trace(plane, q, K, "Kp")
    if not O[K, E]:
        sq = int(S[K][q])
        N = circle_through(plane, q, sq, int(S[E][sq]))
        e = int(S[E][Kq])
        L = circle_through(plane, Kq, e, int(S[K][e]))
    elif plane_char(plane) != "Two":
        Ns = [int(c) for c in bundle(plane, q, int(S[K][q])) if O[c, E]]
        qK = trace(plane, q, K, "pK")
        Ls = [int(c) for c in bundle(plane, qK, int(S[E][qK])) if O[c, K]]
        if len(Ns) != 1 or len(Ls) != 1:
            raise BadConfiguration(f"expected one orthogonal circle per bundle, got {len(Ns)} and {len(Ls)}")
        N, L = Ns[0], Ls[0]
    else:
        raise HypothesisViolated("char 2 and K orthogonal to E")
    F = perm_table(plane, E).F
    ok = (np.array_equal(F[L][F[N]], F[K]) and M[N, q] and M[L, Kq]
          and O[L, K] and O[N, K] and O[L, E] and O[N, E])
    if not ok:
        raise BadConfiguration(f"construction for K={K}, q={q} fails its check (L={L}, N={N})")
    return L, N


def verify_statement4(plane: Plane, stmt: str, E: int | None = None, workers: int | None = 1, seed: int = 0,
                      budget: int = 100_000) -> CheckReport:
    """Check one base-circle statement on ``plane`` (E defaults to the identity graph)."""
    from .statements4 import verify

    return verify(plane, stmt, E=E, workers=workers, seed=seed, budget=budget)
