"""Finite hyperbola structures on the grid of symbol pairs.

Points are pairs ``(x, y)`` of symbols stored as the row-major index
``x * n + y``.  The first generator family consists of the sets with fixed
``x`` (so ``[p]_1`` is determined by the first coordinate), the second of the
sets with fixed ``y``.  A circle that meets every generator once is the graph
``{(x, g(x))}`` of a permutation ``g``; when all circles are graphs the plane
exposes them as the array ``perms``.
"""

from __future__ import annotations

import threading
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import (
    NotHyperbolaStructure,
    ParallelPoints,
    ParallelVertices,
    ParseError,
    PreconditionViolated,
    TouchingFailure,
    VertexNotOnCircle,
)
from .permset import PermIndex, PermutationSet, certify_sharply_3_transitive


class Plane:
    """Immutable incidence structure: ``n`` symbols, ``n*n`` points, circles as point lists."""

    def __init__(self, n: int, circles, name: str = "", source: PermutationSet | None = None):
        if n < 1:
            raise ValueError("need at least one symbol")
        self.n = n
        self.n_points = n * n
        rows = []
        for c in circles:
            arr = np.unique(np.asarray(c, dtype=np.int64))
            if len(arr) and (arr[0] < 0 or arr[-1] >= self.n_points):
                raise ValueError("circle contains a point index out of range")
            arr.setflags(write=False)
            rows.append(arr)
        self.circles = tuple(rows)
        self.n_circles = len(rows)
        self.name = name
        self.source = source
        self._lock = threading.RLock()

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Plane{label} n={self.n} points={self.n_points} circles={self.n_circles}>"

    # -- coordinates -----------------------------------------------------------

    def point(self, x: int, y: int) -> int:
        return x * self.n + y

    def coords(self, p: int) -> tuple[int, int]:
        return divmod(int(p), self.n)

    def gen_of(self, p: int, family: int) -> int:
        """Index of ``[p]_family`` inside its family (pure arithmetic)."""
        x, y = divmod(int(p), self.n)
        if family == 1:
            return x
        if family == 2:
            return y
        raise ValueError("family must be 1 or 2")

    def generator_points(self, family: int, index: int) -> np.ndarray:
        k = np.arange(self.n)
        return index * self.n + k if family == 1 else k * self.n + index

    def meet(self, gen1: int, gen2: int) -> int:
        """The point on Sigma_1 generator ``gen1`` and Sigma_2 generator ``gen2``."""
        return gen1 * self.n + gen2

    def parallel(self, p: int, q: int) -> bool:
        """True when ``p`` lies on ``[q]`` (shares a generator with ``q``)."""
        (a, b), (c, d) = self.coords(p), self.coords(q)
        return a == c or b == d

    # -- incidence indexes -------------------------------------------------

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership matrix, shape (circles, points)."""
        M = np.zeros((self.n_circles, self.n_points), dtype=bool)
        for i, c in enumerate(self.circles):
            M[i, c] = True
        M.setflags(write=False)
        return M

    @cached_property
    def is_graph_plane(self) -> bool:
        n = self.n
        for c in self.circles:
            if len(c) != n:
                return False
            xs, ys = np.divmod(c, n)
            if not (np.array_equal(np.sort(xs), np.arange(n)) and np.array_equal(np.sort(ys), np.arange(n))):
                return False
        return True

    @cached_property
    def perms(self) -> np.ndarray:
        """``perms[k, x]`` is the y-coordinate of the point of circle k on column x."""
        if not self.is_graph_plane:
            raise NotHyperbolaStructure("some circle is not the graph of a permutation (H3 fails)")
        P = np.empty((self.n_circles, self.n), dtype=np.int64)
        for i, c in enumerate(self.circles):
            xs, ys = np.divmod(c, self.n)
            P[i, xs] = ys
        P.setflags(write=False)
        return P

    @cached_property
    def inv_perms(self) -> np.ndarray:
        P = self.perms
        inv = np.empty_like(P)
        inv[np.arange(len(P))[:, None], P] = np.arange(self.n)
        inv.setflags(write=False)
        return inv

    @cached_property
    def perm_index(self) -> PermIndex:
        return PermIndex(self.perms)

    def circle_of_perm(self, g) -> int:
        """Circle whose graph is ``g``, or -1."""
        return int(self.perm_index.lookup(np.asarray(g)))

    def circles_of_perms(self, rows) -> np.ndarray:
        return self.perm_index.lookup(np.asarray(rows))

    @cached_property
    def circles_through(self) -> tuple[np.ndarray, ...]:
        return tuple(np.nonzero(self.mask[:, p])[0] for p in range(self.n_points))

    @cached_property
    def _triple_index(self):
        """Sorted codes of pairwise non-parallel triples on each circle.

        A triple of points with distinct x-coordinates is keyed by its sorted
        point indexes ``a < b < c`` as ``(a*N + b)*N + c``.
        """
        P = self.perms
        n, N = self.n, self.n_points
        xs = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
        if len(xs) == 0 or len(P) == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        pts = xs[None, :, :] * n + P[:, xs]  # (m, T, 3), already sorted since x ascending
        codes = (pts[..., 0] * N + pts[..., 1]) * N + pts[..., 2]
        ids = np.broadcast_to(np.arange(len(P))[:, None], codes.shape)
        codes, ids = codes.ravel(), ids.ravel()
        order = np.argsort(codes, kind="stable")
        return codes[order], ids[order]

    def triple_codes(self, a, b, c):
        N = self.n_points
        s = np.sort(np.stack([np.asarray(a), np.asarray(b), np.asarray(c)]), axis=0)
        return (s[0] * N + s[1]) * N + s[2]

    def lookup_triples(self, a, b, c) -> np.ndarray:
        """Vectorized circle through each triple; -1 when none (or when parallel)."""
        codes, ids = self._triple_index
        key = np.atleast_1d(self.triple_codes(a, b, c))
        if len(codes) == 0:
            return np.full(key.shape, -1, dtype=np.int64)
        pos = np.minimum(np.searchsorted(codes, key), len(codes) - 1)
        return np.where(codes[pos] == key, ids[pos], -1)

    # -- construction / io ---------------------------------------------------

    @classmethod
    def from_perms(cls, perms, name: str = "", source: PermutationSet | None = None) -> "Plane":
        P = np.asarray(perms, dtype=np.int64)
        n = P.shape[1]
        xs = np.arange(n)
        circles = [xs * n + row for row in P]
        return cls(n, circles, name=name, source=source)

    def dumps(self) -> str:
        n = self.n
        lines = [f"MINK v1 n={n}", "GEN1"]
        lines += [" ".join(map(str, self.generator_points(1, i))) for i in range(n)]
        lines.append("GEN2")
        lines += [" ".join(map(str, self.generator_points(2, i))) for i in range(n)]
        lines.append("CIRCLES")
        for c in sorted(tuple(c.tolist()) for c in self.circles):
            lines.append(" ".join(map(str, c)))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str, name: str = "") -> "Plane":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty MINK file")
        head = lines[0].split()
        if len(head) != 3 or head[:2] != ["MINK", "v1"] or not head[2].startswith("n="):
            raise ParseError(f"bad MINK header: {lines[0]!r}")
        try:
            n = int(head[2][2:])
        except ValueError:
            raise ParseError(f"bad MINK header: {lines[0]!r}") from None
        sections: dict[str, list[list[int]]] = {}
        current = None
        for lineno, ln in enumerate(lines[1:], start=2):
            if ln in ("GEN1", "GEN2", "CIRCLES"):
                if ln in sections:
                    raise ParseError(f"line {lineno}: duplicate section {ln}")
                current = ln
                sections[current] = []
                continue
            if current is None:
                raise ParseError(f"line {lineno}: data before any section")
            try:
                sections[current].append([int(t) for t in ln.split()])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer entry") from None
        for sec in ("GEN1", "GEN2", "CIRCLES"):
            if sec not in sections:
                raise ParseError(f"missing section {sec}")
        N = n * n
        for sec in ("GEN1", "GEN2", "CIRCLES"):
            for row in sections[sec]:
                if any(not 0 <= v < N for v in row):
                    raise ParseError(f"{sec}: point index out of range 0..{N - 1}")
        # Generators are not free data: the grid fixes them.  Accept any order.
        for fam, sec in ((1, "GEN1"), (2, "GEN2")):
            got = sorted(tuple(sorted(r)) for r in sections[sec])
            want = sorted(tuple(range(i * n, i * n + n)) if fam == 1 else tuple(range(i, N, n))
                          for i in range(n))
            if got != want:
                raise ParseError(f"{sec} does not match the grid generators of MINK v1 n={n}")
        circles = sorted(tuple(sorted(set(r))) for r in sections["CIRCLES"])
        return cls(n, circles, name=name)

    @classmethod
    def load(cls, path) -> "Plane":
        path = Path(path)
        return cls.loads(path.read_text(encoding="utf-8"), name=path.stem)


def build_from_permutation_set(S: PermutationSet, certify: bool = True) -> Plane:
    """The plane of graphs of a sharply 3-transitive permutation set."""
    if S.n < 3:
        raise ValueError("need at least three symbols")
    if certify:
        certify_sharply_3_transitive(S)
    return Plane.from_perms(S.perms, name=S.name, source=S)


# -- incidence primitives ---------------------------------------------------------


def pq(plane: Plane, p: int, q: int) -> int:
    """``[p]_1`` meet ``[q]_2``."""
    return plane.meet(plane.gen_of(p, 1), plane.gen_of(q, 2))


def trace(plane: Plane, p: int, K: int, side: str) -> int:
    """``pK = K n [p]_1`` (side ``"pK"``) or ``Kp = K n [p]_2`` (side ``"Kp"``)."""
    x, y = plane.coords(p)
    if side == "pK":
        return plane.point(x, int(plane.perms[K, x]))
    if side == "Kp":
        return plane.point(int(plane.inv_perms[K, y]), y)
    raise ValueError("side must be 'pK' or 'Kp'")


def _check_nonparallel(plane: Plane, pts, exc=ParallelPoints):
    for i, j in combinations(range(len(pts)), 2):
        (a, b), (c, d) = plane.coords(pts[i]), plane.coords(pts[j])
        if a == c:
            raise exc(f"points {pts[i]} and {pts[j]} share their Sigma_1 generator",
                      pair=(pts[i], pts[j]), family=1)
        if b == d:
            raise exc(f"points {pts[i]} and {pts[j]} share their Sigma_2 generator",
                      pair=(pts[i], pts[j]), family=2)


def circle_through(plane: Plane, a: int, b: int, c: int) -> int:
    """The circle ``(a, b, c)°`` through three pairwise non-parallel points."""
    _check_nonparallel(plane, (a, b, c))
    k = int(plane.lookup_triples(a, b, c)[0])
    if k < 0:
        raise NotHyperbolaStructure(f"no circle through {a}, {b}, {c} (H4 fails)")
    return k


def circle_through_scan(plane: Plane, a: int, b: int, c: int) -> list[int]:
    """All circles containing a, b and c, by a linear scan of the masks."""
    M = plane.mask
    return [int(k) for k in np.nonzero(M[:, a] & M[:, b] & M[:, c])[0]]


def bundle(plane: Plane, p: int, q: int) -> np.ndarray:
    """``<p, q>``: every circle through the non-parallel points p and q."""
    _check_nonparallel(plane, (p, q), exc=ParallelVertices)
    M = plane.mask
    return np.nonzero(M[:, p] & M[:, q])[0]


def pencil(plane: Plane, p: int, K: int) -> np.ndarray:
    """``(p, K)``: the circles through p meeting K only in p (K itself excluded)."""
    M = plane.mask
    if not M[K, p]:
        raise VertexNotOnCircle(f"point {p} is not on circle {K}")
    through = plane.circles_through[p]
    inter = (M[through] & M[K]).sum(axis=1)
    return through[inter == 1]


def tangent_circle(plane: Plane, C: int, a: int, b: int) -> int:
    """The unique circle through b touching C exactly at a."""
    M = plane.mask
    if not M[C, a]:
        raise PreconditionViolated(f"point {a} is not on circle {C}")
    if M[C, b] or plane.parallel(a, b):
        raise PreconditionViolated(f"point {b} lies on circle {C} or on a generator of {a}")
    cand = np.nonzero(M[:, a] & M[:, b])[0]
    inter = (M[cand] & M[C]).sum(axis=1)
    hits = cand[inter == 1]
    if len(hits) != 1:
        raise TouchingFailure(f"{len(hits)} circles through {b} touch circle {C} at {a}")
    return int(hits[0])
