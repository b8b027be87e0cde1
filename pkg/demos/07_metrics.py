"""
Comparing against other repair-friendly codes
=============================================

Closed-form bandwidth and complexity figures for a few (n, k) codes,
next to what the simulator actually measures for ours.
"""

import sys

from lowrepair import CodeParams, build_code
from lowrepair.metrics import (
    baseline_csv_rows,
    baseline_table,
    encoding_complexity,
    measured_complexity,
    metrics_csv,
    repair_complexity,
)
from lowrepair.storage import measured_repair

p = CodeParams(10, 5, 7, 1)
for row in baseline_table(p, {"r": 2, "t": 1, "t_r": 2, "l": 3}):
    print(f"{row.scheme:10s} f={row.fault_tolerance!s:3s} lambda={float(row.repair_bandwidth):.3g}")

c_r = repair_complexity(p)
rep = measured_repair(build_code(p))[0]
meas = measured_complexity(rep.muls, rep.adds, p.width)
print(f"repair complexity: formula {c_r.total}, measured {meas.total} ({rep.muls} muls, {rep.adds} adds)")

e = encoding_complexity(p)
print(f"encoding per row: C_A={e.class_a.total} C_B={e.class_b.total}")

# CSV for plotting elsewhere, over a range of code lengths
rows = []
for n, k, n_a, tau in [(10, 5, 8, 2), (10, 5, 7, 1), (12, 6, 9, 2), (14, 7, 10, 2)]:
    q = CodeParams(n, k, n_a, tau)
    rows += baseline_csv_rows(q, baseline_table(q, schemes=["MDS", "Zigzag", "Proposed"]))
sys.stdout.write(metrics_csv(rows))
