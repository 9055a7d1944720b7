"""
Planes from permutation groups
==============================

A sharply 3-transitive set of permutations of n symbols gives an incidence
structure on the n x n grid: points are pairs (x, y), and each permutation g
contributes the circle {(x, g(x))}.  Here we build the planes of PGL(2, q)
and look at their shape.
"""

import numpy as np

from minklab import build_from_permutation_set, check_hyperbola, circle_through, enumerate_permutation_set

# PGL(2, 5) acts on the six points of the projective line over GF(5)
S = enumerate_permutation_set("pgl2", 5)
print(S.perms.shape)  # 120 permutations of 6 symbols

P = build_from_permutation_set(S)
print(P)

# every circle meets every row and every column exactly once
M = P.mask.reshape(P.n_circles, P.n, P.n)
print("rows hit once:", bool(np.all(M.sum(axis=1) == 1)), " columns hit once:", bool(np.all(M.sum(axis=2) == 1)))

# three points in different rows and columns lie on exactly one circle
a, b, c = P.point(0, 1), P.point(2, 4), P.point(3, 0)
K = circle_through(P, a, b, c)
print("circle through", [P.coords(p) for p in (a, b, c)], "is", K, "->", P.perms[K])

# the hyperbola axioms, checked exhaustively
print(check_hyperbola(P).render_text())

# the counts grow like q^3
for q in (3, 4, 5, 7, 8, 9):
    Pq = build_from_permutation_set(enumerate_permutation_set("pgl2", q))
    print(f"q={q}: {Pq.n_points:4d} points, {Pq.n_circles:4d} circles of {Pq.n} points")
