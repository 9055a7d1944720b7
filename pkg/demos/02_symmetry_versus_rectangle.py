"""
Symmetry is stronger than the rectangle axiom
=============================================

The near-field of order 9 gives a Minkowski plane which satisfies the
rectangle axiom (G) but not the symmetry axiom (S).  PGL(2, 9) over the
field of the same order satisfies both.  The checkers below show the
difference and return a witness for the failure.
"""

from minklab import (
    build_from_permutation_set,
    check_rectangle,
    check_symmetry,
    check_touching,
    enumerate_permutation_set,
    replay_witness,
)

field_plane = build_from_permutation_set(enumerate_permutation_set("pgl2", 9))
near_plane = build_from_permutation_set(enumerate_permutation_set("nearfield9"))

for name, P in (("pgl2(9)", field_plane), ("nearfield9", near_plane)):
    print(f"--- {name}")
    for rep in (check_touching(P), check_symmetry(P), check_rectangle(P, mode="closure")):
        print(rep.render_text())

# the witness names circles K, L and a point p of L whose mirror image in K
# is again on L, although K and L are not orthogonal
w = check_symmetry(near_plane).witness
K, L, p = w["K"], w["L"], w["p"]
print("p =", near_plane.coords(p), " S_K(p) =", near_plane.coords(w["S_K(p)"]))
print("witness replays:", replay_witness(near_plane, w))

# a sampled direct check of (G) agrees with the closure check
print(check_rectangle(near_plane, mode="direct", budget=20000, seed=1).render_text())
