"""The sixty 4x4 MDS matrices at 67 XOR (word length 8) / 35 XOR (length 4).

Scans every scalar assignment of the eight simplest trees whose reuse-aware
cost stays within the bound, then groups survivors into row/column
permutation classes.
"""

from mdsforge import catalogs, ring
from mdsforge.instantiate import assign_parameters, conjugate_slp, CatalogEntry

r8 = ring("x^8+x^2+1")
trees = catalogs.simplest_trees_4x4()

classes = {}
for i, tree in enumerate(trees, start=1):
    found = assign_parameters(tree, r8, cost_bound=67)
    print(f"tree {i}: {len(found)} assignments at cost 67")
    for e in found:
        classes.setdefault(e.canonical, e)
        classes.setdefault(CatalogEntry.from_slp(conjugate_slp(e.slp)).canonical, e)
print("distinct classes including a->a^-1 partners:", len(classes))

print("\nnothing exists below 67:",
      all(not assign_parameters(t, r8, cost_bound=66) for t in trees))

r4 = ring("x^4+x+1")
cheap = assign_parameters(trees[0], r4, cost_bound=35)
print("same programs at word length 4 cost:", sorted({e.cost for e in cheap}))
