"""
How many failures can the code take?
====================================

Every erasure pattern is checked by building the linear system of the
surviving parities over the missing data symbols and testing its rank.
"""

from lowrepair import CodeParams, build_code, verify_fault_tolerance

code = build_code(CodeParams(10, 5, 7, 1))
print("guaranteed:", code.params.fault_tolerance)

for f in range(1, 6):
    rep = verify_fault_tolerance(code, f)
    print(f"up to {f} erasures: {rep.summary()}")

# the first pattern that cannot be decoded
rep = verify_fault_tolerance(code, 3)
print("first undecodable pattern:", rep.failing[0])

# larger Class A codes tolerate more
for n_a, tau in [(8, 1), (8, 2), (9, 1)]:
    c = build_code(CodeParams(n_a, 5, n_a, tau))
    f = c.params.fault_tolerance
    print(f"({n_a},5) tau={tau}: f={f}:", verify_fault_tolerance(c, f).summary())
