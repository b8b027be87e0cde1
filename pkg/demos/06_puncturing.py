"""
Trading storage for repair bandwidth
====================================

Removing Class B nodes, last one first, saves storage but makes repair
read more. Symbols no longer covered by any Class B parity are rebuilt
from their row through the first Class A parity.
"""

from lowrepair import CodeParams, build_code
from lowrepair.metrics import normalized_bandwidth
from lowrepair.storage import measured_repair

full = build_code(CodeParams(10, 5, 7, 1))

for removed in range(4):
    code = full if removed == 0 else full.punctured(removed)
    reports = measured_repair(code)
    lam = max(normalized_bandwidth(r, code.params) for r in reports)
    fallback = sum(len(r.fallback) for r in reports)
    overhead = code.n / code.k
    print(f"n={code.n:2d}  storage x{overhead:.1f}  lambda={float(lam):.2f}  fallback symbols={fallback}")
