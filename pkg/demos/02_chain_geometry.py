"""
Geometry of the ITC metric on chains
====================================

Antipodal spins of a uniform chain are at distance zero, so the distance
lives on equivalence classes {n, N+1-n}. We look at the class metric for
Heisenberg chains: its distances, Euclidean embedding dimension, four-point
Gromov curvature and the inertia profile that exposes anti-gravity centers.
"""

import numpy as np

import spinitc as si

np.set_printoptions(precision=4, suppress=True)

for n in range(3, 11):
    itc = si.itc_matrix(si.build_chain(n, "heisenberg"))
    classes = si.equivalence_classes(itc)
    q = si.quotient_metric(itc, classes)
    labels = [{k + 1 for k in c} for c in classes]
    emb = si.embedding_dimension(si.gram_matrix(q.dist)) if len(classes) > 1 else None
    print(f"N={n:2d} classes={labels}")
    print("      dim =", emb.dim if emb else 0)
    print(q.dist)

##############################################################################
# Triangle inequality and Schoenberg's criterion on a longer chain.
q = si.quotient_metric(si.itc_matrix(si.build_chain(60, "xx")))
print("min triangle excess:", si.triangle_audit(q.dist).min_excess)
print("embedding dim:", si.embedding_dimension(si.gram_matrix(q.dist)).dim)

##############################################################################
# Gromov delta against chain length. The curve is bounded but oscillates
# with N; the running maximum flattens out.
ns = np.arange(10, 81)
delta = np.array([si.gromov_delta(si.quotient_metric(si.itc_matrix(si.build_chain(n, "heisenberg"))).dist).delta_max
                  for n in ns])
print("delta_max range:", delta.min(), delta.max())
print("running max at N=40, 60, 80:", np.maximum.accumulate(delta)[[30, 50, 70]])

##############################################################################
# Inertia: the central spin of an odd chain is hardest to reach.
rep = si.inertia(si.itc_matrix(si.build_chain(21, "heisenberg")), alpha=2)
print("inertia:", rep.inertia)
print("anti-gravity center (1-based):", [k + 1 for k in rep.anti_gravity_centers])
