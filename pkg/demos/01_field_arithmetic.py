"""
Arithmetic in GF(2^8)
=====================

Every symbol stored by the codes is an element of GF(2^8): one byte.
Addition is XOR, multiplication goes through log/antilog tables.
"""

import numpy as np

from lowrepair.gf import GF, clmul_mod
from lowrepair.linalg import rank, solve, vandermonde

F = GF(8)
print(F, "generator", F.generator)

# addition is XOR, so every element is its own negative
print("0x53 + 0xCA =", hex(F.add(0x53, 0xCA)))
print("0x5A + 0x5A =", hex(F.add(0x5A, 0x5A)))

# multiplying by x shifts left and reduces by the modulus when bit 8 spills over
print("0x02 * 0x80 =", hex(F.mul(0x02, 0x80)), "(reference:", hex(clmul_mod(0x02, 0x80, 0x11D)) + ")")
print("inverse of 0x02 =", hex(F.inv(0x02)))

# the same calls work elementwise on arrays, which is how whole files get encoded
a = np.arange(8, dtype=np.uint8)
print("3 * [0..7] =", F.mul(3, a))

# linear algebra runs on top: a Vandermonde matrix on distinct points is invertible
V = vandermonde(F, [1, 2, 3, 4, 5], 5)
print("rank of 5x5 Vandermonde:", rank(F, V))
b = np.array([10, 20, 30, 40, 50], dtype=np.uint8)
x = solve(F, V, b)
print("solution of V x = b:", x)
