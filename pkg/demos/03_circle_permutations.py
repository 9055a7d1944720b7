"""
Circles as permutations of a base circle
========================================

Fix a circle E.  Each circle K moves the points of E: go from x along its
generator to K, then along the other generator back to E.  This is f_K.
Circles orthogonal to E give involutions, and every f_K is a product of two
of them.  Closure of {f_K} under composition is the rectangle axiom.
"""

import numpy as np

from minklab import build_from_permutation_set, decompose_involutions, enumerate_permutation_set, perm_table
from minklab.permset import cycle_type
from minklab.symmetry import orth_matrix

P = build_from_permutation_set(enumerate_permutation_set("pgl2", 7))
T = perm_table(P)  # E defaults to the graph of the identity
E = T.E
print("base circle", E, "points", [P.coords(p) for p in P.circles[E]])

O = orth_matrix(P)
inv = np.nonzero(O[E])[0]
print(len(inv), "circles orthogonal to E; their f are involutions:",
      all((T.perm(K) @ T.perm(K)).is_identity for K in inv))

# cycle types of all f_K
types = {}
for K in range(P.n_circles):
    ct = cycle_type(T.F[K])
    types[ct] = types.get(ct, 0) + 1
for ct, cnt in sorted(types.items()):
    print(f"  cycle type {ct}: {cnt}")

# write one f_K as i_L o i_N with a chosen point q of E on N
K = 200
q = next(int(x) for x in P.circles[E] if not P.mask[K, x])
L, N = decompose_involutions(P, E, K, q)
print(f"f_{K} = i_{L} o i_{N}:", np.array_equal(T.F[L][T.F[N]], T.F[K]))

# the composite of any two f is again some f_M
L, K = 17, 301
M = T.circle_of(T.F[L][T.F[K]])
print(f"f_{L} o f_{K} = f_{M}")
