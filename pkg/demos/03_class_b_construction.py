"""
Building the Class B nodes
==========================

Three addition-only nodes are added to the (7,5) code to make a (10,5)
code. The greedy construction is steered by a matrix of read costs: the
number of extra symbols needed to rebuild each data symbol, given that
its row has already been read during Class A repair.
"""

import numpy as np

from lowrepair import CodeParams, build_class_b

np.set_printoptions(linewidth=100)

plan = build_class_b(CodeParams(10, 5, 7, 1))

# inf marks symbols Class A repair does not cover
for name, a in plan.history:
    if " itr" not in name:
        print(f"-- {name}")
        print(a)

# each node is one equation in row 0, shifted down the wrapped diagonals
for node in plan.nodes:
    terms = " + ".join(repr(p) for p in node.terms(0, 5))
    print(f"P{node.index}: row 0 = {terms}" + ("   (seed and mirror)" if node.mirror else ""))

# at repair time each symbol uses the highest-indexed parity that contains it
for pos in sorted(plan.designated)[:5]:
    print(pos, "->", plan.designated[pos])
