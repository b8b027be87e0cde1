"""
The Class A code
================

A (7,5) Reed-Solomon code with one piggyback per row. Node 6 carries,
in row i, the MDS parity plus the bare data symbol d[i+1, i].
"""

import numpy as np

from lowrepair import CodeParams, build_code, verify_fault_tolerance
from lowrepair.class_a import piggyback_submatrix
from lowrepair.linalg import rank

params = CodeParams(n=7, k=5, n_a=7, tau=1)
code = build_code(params)

print("MDS coefficients (column c feeds parity node 5 + c):")
print(code.coeffs)

for eq in code.node_equations(6)[:2]:
    print(eq.target, "=", " + ".join(f"{c}*{pos}" if c != 1 else repr(pos) for pos, c in eq.terms))

# encode one block of random bytes
rng = np.random.default_rng(0)
data = rng.integers(0, 256, (5, 5), dtype=np.uint8)
array = code.encode(data)
print("code array (columns are nodes):")
print(array)

# the piggybacks cost one erasure of fault tolerance: 7 - 5 - 1 + 1 = 2
report = verify_fault_tolerance(code, params.fault_tolerance)
print(report.summary())
print(verify_fault_tolerance(code, 3).summary())

# why it still works: the piggybacked parities restricted to a failed node are full rank
for r in range(5):
    G = piggyback_submatrix(params, code.coeffs, 6, r)
    print(f"node {r}: rank of G' =", rank(code.field, G))
