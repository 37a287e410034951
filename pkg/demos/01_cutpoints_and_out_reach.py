"""Walk through how cutpoints turn into exact betweenness.

Run with ``python demos/01_cutpoints_and_out_reach.py``.
"""

import numpy as np

from bcrank import bc_aux, brandes_bc, decompose, from_edges, out_reach, weights

# Two triangles glued at node 2: the only shortest paths that pass
# *through* anything pass through the cutpoint 2.
g = from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
d = decompose(g)
r = out_reach(d)

for i, nodes in enumerate(d.components):
    print(f"component {i}: nodes {nodes.tolist()}  out-reach {r.values[i].tolist()}")
print("cutpoints:", d.cutpoints.tolist())

# Out-reach of a cutpoint counts what it reaches without re-entering the
# component; inside every component the values add up to n.
assert all(int(v.sum()) == g.n for v in r.values)

# gamma is the expected number of intra-component segments on a uniform
# random shortest path, so it is at least one.
w = weights(d, r, [2])
print(f"gamma = {w.gamma:.3f}, eta = {w.eta:.3f}")

# Betweenness earned purely by being a break point between segments.
print(f"bc_a(2) = {bc_aux(d, r, 2):.4f}   exact bc(2) = {brandes_bc(g)[2]:.4f}")

# A longer chain of blocks: the break-point term now covers only part of
# the betweenness, the rest comes from paths inside the 5-cycle.
g = from_edges([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5), (5, 6), (6, 2), (6, 7)])
d = decompose(g)
r = out_reach(d)
bc = brandes_bc(g)
aux = np.array([bc_aux(d, r, v) for v in range(g.n)])
print("\nnode  bc_a     bc")
for v in range(g.n):
    print(f"{v:>4}  {aux[v]:.4f}  {bc[v]:.4f}")
