"""Circle symmetries, orthogonality, derived affine planes and the involutory
automorphisms built from them (double homotheties, harmonic homologies,
involutory translations).

All maps are :class:`PointMap` image arrays over the point indexes of a
plane; equality of maps is always decided extensionally.
"""

from __future__ import annotations

from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import (
    BadConfiguration,
    CharNotTwo,
    CharTwo,
    MixedFamilies,
    NotSymmetricPlane,
    ParallelCenters,
    SameCircle,
)
from .plane import Plane, bundle, trace


class Generator(NamedTuple):
    family: int
    index: int


def _cache(plane: Plane) -> dict:
    c = plane.__dict__.get("_geom_cache")
    if c is None:
        c = plane.__dict__.setdefault("_geom_cache", {})
    return c


def cached(plane: Plane, key, build):
    c = _cache(plane)
    if key not in c:
        with plane._lock:
            if key not in c:
                c[key] = build()
    return c[key]


# -- point maps -------------------------------------------------------------------


class PointMap:
    """A bijection of the points of a plane, stored as an image array."""

    __slots__ = ("plane", "images")

    def __init__(self, plane: Plane, images):
        img = np.asarray(images, dtype=np.int64)
        if img.shape != (plane.n_points,):
            raise ValueError("image array has the wrong length")
        self.plane = plane
        self.images = img

    def __call__(self, p):
        return self.images[p]

    def __eq__(self, other):
        return isinstance(other, PointMap) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def compose(self, other: "PointMap") -> "PointMap":
        """``self o other``."""
        return PointMap(self.plane, self.images[other.images])

    __matmul__ = compose

    @classmethod
    def identity(cls, plane: Plane) -> "PointMap":
        return cls(plane, np.arange(plane.n_points))

    def is_bijective(self) -> bool:
        return np.array_equal(np.sort(self.images), np.arange(self.plane.n_points))

    def is_identity(self) -> bool:
        return np.array_equal(self.images, np.arange(self.plane.n_points))

    @property
    def is_involution(self) -> bool:
        return not self.is_identity() and np.array_equal(self.images[self.images], np.arange(len(self.images)))

    @property
    def fixes(self) -> frozenset[int]:
        return frozenset(np.nonzero(self.images == np.arange(len(self.images)))[0].tolist())

    def _gen_images(self, family: int):
        """Induced map on generators of ``family``: (target family, index map) or None."""
        n = self.plane.n
        pts = np.stack([self.plane.generator_points(family, i) for i in range(n)])
        img = self.images[pts]
        xs, ys = np.divmod(img, n)
        if np.all(xs == xs[:, :1]):
            return 1, xs[:, 0]
        if np.all(ys == ys[:, :1]):
            return 2, ys[:, 0]
        return None

    def generator_action(self, family: int) -> np.ndarray:
        """Index map on same-family generators; raises if the family is not preserved."""
        g = self._gen_images(family)
        if g is None or g[0] != family:
            raise ValueError(f"map does not preserve generator family {family}")
        return g[1]

    @property
    def exchanges_families(self) -> bool:
        g1, g2 = self._gen_images(1), self._gen_images(2)
        return g1 is not None and g2 is not None and g1[0] == 2 and g2[0] == 1

    @property
    def preserves_families(self) -> bool:
        g1, g2 = self._gen_images(1), self._gen_images(2)
        return g1 is not None and g2 is not None and g1[0] == 1 and g2[0] == 2

    def circle_images(self) -> np.ndarray:
        """Index of the image of every circle, -1 where the image is not a circle."""
        return circle_images(self.plane, self.images[None, :])[0]

    def is_automorphism(self) -> tuple[bool, dict | None]:
        if not self.is_bijective():
            return False, {"reason": "not bijective"}
        if not (self.preserves_families or self.exchanges_families):
            return False, {"reason": "generators not mapped onto generators"}
        imgs = self.circle_images()
        bad = np.nonzero(imgs < 0)[0]
        if len(bad):
            return False, {"circle": int(bad[0])}
        return True, None


def circle_images(plane: Plane, maps: np.ndarray) -> np.ndarray:
    """For point maps ``maps`` (r, N): image circle index of every circle, shape (r, m)."""
    P = plane.perms
    n = plane.n
    pts = np.arange(n)[None, :] * n + P  # (m, n) circle point lists in column order
    img = maps[:, pts]  # (r, m, n)
    xs, ys = np.divmod(img, n)
    r, m = img.shape[:2]
    out = np.full((r, m), -1, dtype=np.int64)
    graph = np.sort(xs, axis=2)
    is_perm = np.all(graph == np.arange(n), axis=2)
    if not np.any(is_perm):
        return out
    ri, ki = np.nonzero(is_perm)
    sub_x, sub_y = xs[ri, ki], ys[ri, ki]
    perm_rows = np.empty_like(sub_x)
    perm_rows[np.arange(len(sub_x))[:, None], sub_x] = sub_y
    out[ri, ki] = plane.circles_of_perms(perm_rows)
    return out


# -- circle symmetries ------------------------------------------------------------


def symmetric_point(plane: Plane, K: int, p: int) -> int:
    """The point q with pq and qp on K: ``[Kp]_1`` meet ``[pK]_2``."""
    a = trace(plane, p, K, "Kp")
    b = trace(plane, p, K, "pK")
    return plane.meet(plane.gen_of(a, 1), plane.gen_of(b, 2))


def sym_table(plane: Plane) -> np.ndarray:
    """``table[K, p] = S_K(p)`` for all circles and points, shape (m, N)."""

    def build():
        P, Pi, n = plane.perms, plane.inv_perms, plane.n
        xs, ys = np.divmod(np.arange(plane.n_points), n)
        t = Pi[:, ys] * n + P[:, xs]
        t.setflags(write=False)
        return t

    return cached(plane, "sym", build)


def circle_symmetry(plane: Plane, K: int) -> PointMap:
    return PointMap(plane, sym_table(plane)[K])


def sk_table(plane: Plane) -> np.ndarray:
    """``table[K, L]`` = index of the circle S_K(L), or -1 if S_K(L) is not a circle."""

    def build():
        S = sym_table(plane)
        t = np.stack([circle_images(plane, S[k:k + 1])[0] for k in range(plane.n_circles)])
        t.setflags(write=False)
        return t

    return cached(plane, "sk", build)


def orthogonal(plane: Plane, K: int, L: int) -> bool:
    """K is orthogonal to L when S_K maps L onto itself (setwise)."""
    if K == L:
        raise SameCircle("orthogonality is defined for two different circles")
    S = sym_table(plane)[K]
    pts = plane.circles[L]
    return bool(np.array_equal(np.sort(S[pts]), pts))


def orth_matrix(plane: Plane) -> np.ndarray:
    """Boolean matrix of orthogonal circle pairs (diagonal False).

    S_K(graph h) = graph(g h^-1 g) for K = graph g, so K is orthogonal to L
    exactly when ``h^-1 o g`` is an involution.
    """

    def build():
        P, Pi = plane.perms, plane.inv_perms
        m, n = P.shape
        O = np.zeros((m, m), dtype=bool)
        ident = np.arange(n)
        for k in range(m):
            U = Pi[:, P[k]]  # row l: h_l^-1 o g_k
            UU = np.take_along_axis(U, U, axis=1)
            O[k] = np.all(UU == ident, axis=1)
        np.fill_diagonal(O, False)
        O.setflags(write=False)
        return O

    return cached(plane, "orth", build)


def intersection_counts(plane: Plane) -> np.ndarray:
    def build():
        M = plane.mask.astype(np.int32)
        t = M @ M.T
        t.setflags(write=False)
        return t

    return cached(plane, "inter", build)


def tangent_matrix(plane: Plane) -> np.ndarray:
    def build():
        t = intersection_counts(plane) == 1
        t.setflags(write=False)
        return t

    return cached(plane, "tangent", build)


def plane_char(plane: Plane) -> str:
    """Characteristic by its definition, without requiring (S) first."""
    return cached(plane, "char-raw", lambda: "Two" if np.any(orth_matrix(plane) & tangent_matrix(plane)) else "NotTwo")


def characteristic(plane: Plane, check: bool = True) -> str:
    """``"Two"`` if some pair of tangent circles is orthogonal, else ``"NotTwo"``.

    With ``check`` the plane must pass the symmetry axiom first.
    """
    if check:
        from .axioms import check_symmetry

        if not check_symmetry(plane).passed:
            raise NotSymmetricPlane("characteristic is defined for symmetric planes")

    return plane_char(plane)


# -- derived planes ---------------------------------------------------------------


class DerivedPlane:
    """The residue of a plane at a point p: an incidence structure on P minus [p]."""

    def __init__(self, plane: Plane, p: int):
        self.plane = plane
        self.p = int(p)
        n = plane.n
        px, py = plane.coords(p)
        N = plane.n_points
        xs, ys = np.divmod(np.arange(N), n)
        self.point_mask = (xs != px) & (ys != py)
        self.points = np.nonzero(self.point_mask)[0]
        lines, kinds = [], []
        M = plane.mask
        for k in plane.circles_through[p]:
            pts = np.nonzero(M[k] & self.point_mask)[0]
            lines.append(pts)
            kinds.append(("circle", int(k)))
        for x in range(n):
            if x != px:
                lines.append(x * n + np.array([y for y in range(n) if y != py]))
                kinds.append(("gen1", x))
        for y in range(n):
            if y != py:
                lines.append(np.array([x for x in range(n) if x != px]) * n + y)
                kinds.append(("gen2", y))
        self.kinds = kinds
        self.line_list = lines
        self.line_mask = np.zeros((len(lines), N), dtype=bool)
        for i, ln in enumerate(lines):
            self.line_mask[i, ln] = True

    @property
    def order(self) -> int:
        return self.plane.n - 1

    @cached_property
    def line_through(self) -> np.ndarray:
        """``table[a, b]``: line through a and b; -1 none, -2 more than one."""
        N = self.plane.n_points
        t = np.full((N, N), -1, dtype=np.int64)
        for i, ln in enumerate(self.line_list):
            a, b = np.meshgrid(ln, ln, indexing="ij")
            sel = a != b
            a, b = a[sel], b[sel]
            cur = t[a, b]
            t[a, b] = np.where(cur == -1, i, -2)
        return t

    def is_affine(self) -> tuple[bool, str]:
        q = self.order
        if len(self.points) != q * q:
            return False, "wrong number of points"
        sizes = self.line_mask.sum(axis=1)
        if np.any(sizes != q):
            return False, f"line {int(np.nonzero(sizes != q)[0][0])} does not have {q} points"
        if len(self.line_list) != q * q + q:
            return False, "wrong number of lines"
        pts = self.points
        sub = self.line_through[np.ix_(pts, pts)]
        off = ~np.eye(len(pts), dtype=bool)
        if np.any(sub[off] < 0):
            return False, "two points not joined by exactly one line"
        Lm = self.line_mask.astype(np.int32)
        disjoint = (Lm @ Lm.T) == 0
        counts = Lm.T @ disjoint.astype(np.int32)  # [x, l] lines through x disjoint from l
        need = self.point_mask[:, None] & ~self.line_mask.T
        if np.any(counts[need] != 1):
            return False, "parallel postulate fails"
        return True, ""

    def parallel(self, i: int, j: int) -> bool:
        return i == j or not np.any(self.line_mask[i] & self.line_mask[j])

    def image_lines(self, images: np.ndarray) -> np.ndarray:
        """Line index of the image of every line under a point map; -1 if not a line."""
        out = np.full(len(self.line_list), -1, dtype=np.int64)
        for i, ln in enumerate(self.line_list):
            img = images[ln]
            if not np.all(self.point_mask[img]):
                continue
            j = self.line_through[img[0], img[1]]
            if j >= 0 and np.all(self.line_mask[j, img]):
                out[i] = j
        return out

    @cached_property
    def _rect(self):
        """Lines as a (lines, q) array plus their pairwise meeting counts; None if ragged."""
        sizes = {len(ln) for ln in self.line_list}
        if len(sizes) != 1:
            return None
        arr = np.stack(self.line_list)
        Lm = self.line_mask.astype(np.int32)
        return arr, (Lm @ Lm.T) > 0

    def is_dilatation(self, phi: PointMap) -> bool:
        """phi maps the point set onto itself and every line onto a parallel line."""
        img = phi.images
        if not np.all(self.point_mask[img[self.points]]):
            return False
        rect = self._rect
        if rect is None:
            targets = self.image_lines(img)
            if np.any(targets < 0):
                return False
            same = targets == np.arange(len(targets))
            meets = np.any(self.line_mask & self.line_mask[targets], axis=1)
            return bool(np.all(same | ~meets))
        arr, meets = rect
        im = img[arr]
        t = self.line_through[im[:, 0], im[:, 1]]
        if np.any(t < 0) or not np.all(self.line_mask[t[:, None], im]):
            return False
        idx = np.arange(len(arr))
        return bool(np.all((t == idx) | ~meets[idx, t]))

    def fixed_points(self, phi: PointMap) -> np.ndarray:
        pts = self.points
        return pts[phi.images[pts] == pts]

    def is_homothety(self, phi: PointMap) -> bool:
        """A dilatation with a fixed point (the identity included)."""
        return self.is_dilatation(phi) and len(self.fixed_points(phi)) > 0

    def is_translation(self, phi: PointMap) -> bool:
        """A dilatation without fixed points, or the identity."""
        if not self.is_dilatation(phi):
            return False
        fp = self.fixed_points(phi)
        return len(fp) == 0 or len(fp) == len(self.points)

    def pencil_parallel_class(self, K: int) -> np.ndarray:
        """Lines coming from circles tangent to K at p, together with K itself."""
        M = self.plane.mask
        out = []
        for i, (kind, k) in enumerate(self.kinds):
            if kind == "circle" and (k == K or (M[k] & M[K]).sum() == 1):
                out.append(i)
        return np.array(out, dtype=np.int64)


def derived_plane(plane: Plane, p: int) -> DerivedPlane:
    return cached(plane, ("derived", int(p)), lambda: DerivedPlane(plane, p))


# -- involutory automorphisms -------------------------------------------------------


def double_homothety(plane: Plane, a: int, b: int, K: int | None = None) -> PointMap:
    """The double homothety with centers a, b, as S_L o S_K for K, L in <a, b>, L orthogonal to K.

    K defaults to the first circle of the bundle.
    """
    if plane.parallel(a, b):
        raise ParallelCenters(f"centers {a}, {b} are parallel", pair=(a, b))
    B = bundle(plane, a, b)
    if len(B) == 0:
        raise BadConfiguration(f"empty bundle <{a},{b}>")
    if K is None:
        K = int(B[0])
    elif K not in B:
        raise BadConfiguration(f"circle {K} is not in the bundle <{a},{b}>")
    O = orth_matrix(plane)
    partners = B[O[K, B]]
    if len(partners) == 0:
        raise CharTwo("no orthogonal circle in the bundle (characteristic 2)")
    if len(partners) > 1:
        raise BadConfiguration(f"{len(partners)} circles of <{a},{b}> are orthogonal to {K}")
    S = sym_table(plane)
    L = int(partners[0])
    return PointMap(plane, S[L][S[K]])


def _centers_on(plane: Plane, A: Generator, B: Generator) -> tuple[int, int]:
    """A point a on A and a point b on B that are not parallel."""
    a = int(plane.generator_points(A.family, A.index)[0])
    for b in plane.generator_points(B.family, B.index):
        if not plane.parallel(a, int(b)):
            return a, int(b)
    raise BadConfiguration("no non-parallel centers")  # pragma: no cover


def harmonic_homology(plane: Plane, A: Generator, B: Generator, centers=None) -> PointMap:
    """The harmonic homology with axis A, B (same family, A != B).

    Generators X, Y of the family are harmonic conjugates when H_{a,b}(X) = Y
    for centers a on A, b on B; ``centers`` picks (a, b), default the first
    admissible pair.  Points of A and B are fixed; any other x moves along
    its generator of the other family.
    """
    A, B = Generator(*A), Generator(*B)
    if A.family != B.family:
        raise MixedFamilies("axis generators must belong to one family")
    if A.index == B.index:
        raise BadConfiguration("axis generators must differ")
    a, b = centers if centers is not None else _centers_on(plane, A, B)
    if plane.gen_of(a, A.family) != A.index or plane.gen_of(b, B.family) != B.index:
        raise BadConfiguration("centers are not on the axis generators")
    H = double_homothety(plane, a, b)
    act = H.generator_action(A.family)
    n = plane.n
    xs, ys = np.divmod(np.arange(plane.n_points), n)
    if A.family == 1:
        img = act[xs] * n + ys
        on_axis = (xs == A.index) | (xs == B.index)
    else:
        img = xs * n + act[ys]
        on_axis = (ys == A.index) | (ys == B.index)
    img = np.where(on_axis, np.arange(plane.n_points), img)
    return PointMap(plane, img)


def translations_at(plane: Plane, p: int) -> list[PointMap]:
    """Distinct maps S_L o S_K for circles K, L tangent and orthogonal at p."""

    def build():
        O = orth_matrix(plane)
        T = tangent_matrix(plane)
        S = sym_table(plane)
        through = plane.circles_through[p]
        seen, out = set(), []
        for K, L in np.argwhere(O[np.ix_(through, through)] & T[np.ix_(through, through)]):
            img = S[through[L]][S[through[K]]]
            key = img.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(PointMap(plane, img))
        return out

    return cached(plane, ("translations", int(p)), build)


def involutory_translation(plane: Plane, X: Generator, Y: Generator, p: int) -> PointMap:
    """An involutory automorphism exchanging X and Y and fixing ``[p]_i`` pointwise.

    Characteristic 2 only.  Built from products S_L o S_K of tangent orthogonal
    circles through p and, where one product does not suffice, compositions of
    two of them; the first candidate in enumeration order is returned.
    """
    X, Y = Generator(*X), Generator(*Y)
    if X.family != Y.family:
        raise MixedFamilies("X and Y must belong to one family")
    if X.index == Y.index:
        raise BadConfiguration("X and Y must differ")
    i = X.family
    if plane.gen_of(p, i) in (X.index, Y.index):
        raise BadConfiguration("p lies on X or Y")
    if not np.any(orth_matrix(plane) & tangent_matrix(plane)):
        raise CharNotTwo("plane has no orthogonal tangent circles")
    line = plane.generator_points(i, plane.gen_of(p, i))
    Xpts = np.sort(plane.generator_points(i, X.index))
    Ypts = np.sort(plane.generator_points(i, Y.index))

    def build():
        base = np.array([t.images for t in translations_at(plane, p)], dtype=np.int64).reshape(-1, plane.n_points)
        pairs = base[:, base].reshape(-1, plane.n_points)  # row i*t + j is t_i o t_j
        cand = np.concatenate([base, pairs])
        return cand[np.all(cand[:, line] == line, axis=1)]

    cand = cached(plane, ("translation-candidates", int(p), i), build)
    ok = np.all(np.isin(cand[:, Xpts], Ypts), axis=1) & np.all(np.isin(cand[:, Ypts], Xpts), axis=1)
    hits = np.nonzero(ok)[0]
    if len(hits):
        return PointMap(plane, cand[hits[0]])
    raise BadConfiguration(f"no involutory translation for {X}, {Y}, p={p}")
