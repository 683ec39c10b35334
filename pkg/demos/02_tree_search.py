"""Exhaustive search for the simplest implementation trees.

An implementation tree is the skeleton of a normal straight-line program:
nodes XOR two earlier terms, each output row must pass the symbolic MDS
pre-check against all previous rows, and capacity (node count) is minimized.
Runs k = 2 and k = 3 instantly; k = 4 takes a few seconds per capacity.
"""

from mdsforge.treesearch import search_at_capacity, search_simplest, tree_to_text

for k in (2, 3):
    cap, trees = search_simplest(k)
    types = sorted({t.type_vector for t in trees})
    print(f"k={k}: minimum capacity {cap}, {len(trees)} tree classes, types {types}")

print("\nk=4 at capacity 7:", len(search_at_capacity(4, 7)), "classes (none exist)")
trees = search_at_capacity(4, 8)
print("k=4 at capacity 8:", len(trees), "classes")
for t in trees[:2]:
    print()
    print(tree_to_text(t).rstrip())
print("\n(the remaining classes follow the same format)")
