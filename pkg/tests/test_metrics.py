import csv
import io
from fractions import Fraction

import numpy as np
import pytest

from lowrepair import CodeParams, build_code
from lowrepair.gf import CountingField
from lowrepair.metrics import (
    CSV_HEADER,
    NOT_SPECIFIED,
    MissingParameter,
    baseline_csv_rows,
    baseline_table,
    encoding_complexity,
    lambda_upper_bound,
    measured_complexity,
    metrics_csv,
    normalized_bandwidth,
    repair_complexity,
)
from lowrepair.model import SymbolPos
from lowrepair.repair import RepairReport
from lowrepair.storage import measured_repair

P = CodeParams(10, 5, 7, 1)


def test_normalized_bandwidth():
    nine = RepairReport(0, reads=[SymbolPos(0, j) for j in range(9)])
    assert normalized_bandwidth(nine, P) == Fraction(9, 5)
    assert normalized_bandwidth(RepairReport(0), P) == 0
    # MDS repair reads k symbols in each of k rows
    mds = RepairReport(0, reads=[SymbolPos(i, j) for i in range(5) for j in range(1, 6)])
    assert normalized_bandwidth(mds, P) == 5


def test_lambda_bound():
    assert lambda_upper_bound(P) == 3
    assert lambda_upper_bound(CodeParams(9, 5, 9, 3)) == Fraction(9, 5)


def full_params():
    for k in range(3, 11):
        for tau in range(1, k - 1):
            n_a = k + tau + 1
            if n_a < 2 * k:
                yield CodeParams(n_a + k - tau - 1, k, n_a, tau)


@pytest.mark.parametrize("p", list(full_params()), ids=str)
def test_measured_lambda_with_full_class_b(p):
    lams = {normalized_bandwidth(r, p) for r in measured_repair(build_code(p))}
    assert lams == {Fraction(2 * p.k - 1, p.k)}
    if p.k - p.tau - 1 >= 2:
        assert Fraction(2 * p.k - 1, p.k) < lambda_upper_bound(p)


def test_repair_complexity_formula():
    c = repair_complexity(P)
    # (k-1)nu + k nu^2 + tau k (nu + nu^2) + (k-tau-2)^2 nu with k=5, tau=1, nu=8
    assert c.bit_additions == 4 * 8 + 5 * 8 + 4 * 8
    assert c.bit_mult_units == 5 * 64 + 5 * 64
    assert c.total == 32 + 320 + 360 + 32 == 744
    assert repair_complexity(P, nu=4).total == 4 * 4 + 5 * 16 + 5 * (4 + 16) + 4 * 4


def test_measured_repair_ops_within_formula():
    for p in [P, *full_params()]:
        reps = measured_repair(build_code(p))
        for r in reps:
            m = measured_complexity(r.muls, r.adds, p.width)
            assert m.total <= repair_complexity(p).total
    r = measured_repair(build_code(P))[0]
    assert (r.muls, r.adds) == (10, 12)


def test_encoding_complexity():
    e = encoding_complexity(P)
    assert e.class_a.total == 2 * (5 * 64 + 4 * 8) + 8 == 712
    assert e.class_b.bit_additions == 3 * 8 == 24
    assert e.total.total == 736
    assert encoding_complexity(CodeParams(7, 5, 7, 1)).class_b.total == 0


def test_measured_class_b_adds():
    code = build_code(P)
    cf = CountingField(code.field)
    data = np.zeros((5, 5), dtype=np.uint8)
    for node in code.plan.nodes:
        node.equation(0, 5).evaluate(cf, data)
    assert cf.adds == 3 and cf.muls == 0


def test_baseline_rows():
    extras = dict(r=2, t=1, t_r=2, l=3)
    rows = {r.scheme: r for r in baseline_table(P, extras)}
    assert rows["MDS"].fault_tolerance == 5 and rows["MDS"].repair_bandwidth == 5
    assert rows["Zigzag"].repair_bandwidth == Fraction(9, 5)
    assert rows["Zigzag"].beta == 5**4
    assert rows["Proposed"].fault_tolerance == 10 - 8 - 1 + 1 == 2
    assert rows["Proposed"].repair_bandwidth == 3 and rows["Proposed"].beta == 5
    assert rows["Proposed"].repair_complexity == Fraction(744, 5)
    assert rows["Piggyback"].repair_complexity == NOT_SPECIFIED
    assert rows["Piggyback"].repair_bandwidth == Fraction(3 * 6 + 2 * (5 + 2 + 3 - 2), 10)
    # LRC with r=2: three local groups of ceil(5/3) symbols
    assert rows["LRC"].fault_tolerance == 3
    assert rows["LRC"].repair_bandwidth == Fraction(5, 3)
    assert rows["LRC"].repair_complexity == 8
    assert rows["MDR"].beta == 32 and "n = k + 2" in rows["MDR"].note
    assert baseline_table(CodeParams(7, 5, 7, 1), schemes=["MDR"])[0].note == ""


def test_missing_parameter():
    with pytest.raises(MissingParameter) as exc:
        baseline_table(P, {"t": 1}, schemes=["Piggyback"])
    assert "t_r" in str(exc.value)
    with pytest.raises(MissingParameter):
        baseline_table(P, {}, schemes=["LRC"])
    with pytest.raises(ValueError):
        baseline_table(P, schemes=["RAID"])


def test_csv():
    text = metrics_csv(baseline_csv_rows(P, baseline_table(P, schemes=["MDS", "Zigzag", "Proposed"])))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == CSV_HEADER == ["scheme", "n", "k", "f", "lambda", "repair_complexity", "encoding_complexity"]
    assert [r[0] for r in rows[1:]] == ["MDS", "Zigzag", "Proposed"]
    assert rows[1][4] == "5" and rows[2][4] == "1.8" and rows[3][4] == "3"
