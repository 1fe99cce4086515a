"""
Clustering a geometric spin network
===================================

Ten spins scattered in a unit square, XX-coupled with strength falling off
as the inverse cube of their separation. Physical neighbours are not
necessarily close in transfer capacity; the threshold hierarchy shows which
groups of spins exchange excitations best.
"""

import numpy as np

import spinitc as si

rng = np.random.default_rng(7)
pts = rng.uniform(size=(10, 2))
net = si.build_geometric_network(pts, "xx", exponent=3)
itc = si.itc_matrix(net)

tree = si.hierarchical_clusters(itc.dist)
for c in tree.clusters:
    if len(c.members) > 1:
        flag = "valid" if c.valid else "     "
        print(f"{flag} eps>{c.merge_distance:.4f}  {[m + 1 for m in c.members]}")

##############################################################################
# Compare with nearest physical neighbours.
r = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
np.fill_diagonal(r, np.inf)
D = itc.dist.copy()
np.fill_diagonal(D, np.inf)
for k in range(10):
    print(f"spin {k + 1:2d}: nearest in space {r[k].argmin() + 1:2d}, nearest in ITC {D[k].argmin() + 1:2d}")

print(tree.to_json(one_based=True)[:400], "...")
