"""Repair bandwidth, closed-form complexity bounds and the baseline comparison table.

Complexity formulas are evaluated as exact expressions with unit constants
and reported in "formula units": an addition costs nu bit operations and a
multiplication nu^2, where nu is the symbol width in bits.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .model import CodeParams

NOT_SPECIFIED = "not specified"
CSV_HEADER = ["scheme", "n", "k", "f", "lambda", "repair_complexity", "encoding_complexity"]


class MissingParameter(KeyError):
    pass


@dataclass(frozen=True)
class ComplexityEstimate:
    bit_additions: int
    bit_mult_units: int
    formula_label: str = ""

    @property
    def total(self) -> int:
        return self.bit_additions + self.bit_mult_units

    def __add__(self, other: ComplexityEstimate) -> ComplexityEstimate:
        label = " + ".join(x for x in (self.formula_label, other.formula_label) if x)
        return ComplexityEstimate(
            self.bit_additions + other.bit_additions,
            self.bit_mult_units + other.bit_mult_units,
            label,
        )


def normalized_bandwidth(report, params: CodeParams) -> Fraction:
    """Symbols read per stripe over symbols per node (beta = k)."""
    return Fraction(len(report.reads), params.k)


def lambda_upper_bound(params: CodeParams) -> Fraction:
    k, tau = params.k, params.tau
    return Fraction(k + tau + (k - tau - 1) ** 2, k)


def repair_complexity(params: CodeParams, nu: int | None = None) -> ComplexityEstimate:
    """Cost of repairing one data node; the last summand is the Class B part.

    Uses the printed Class B term (k-tau-2)^2 nu verbatim, although the
    surrounding argument would suggest (k-tau-1)(k-tau-2) nu.
    """
    k, tau = params.k, params.tau
    nu = params.width if nu is None else nu
    adds = (k - 1) * nu + tau * k * nu + (k - tau - 2) ** 2 * nu
    muls = k * nu**2 + tau * k * nu**2
    return ComplexityEstimate(
        adds, muls, "(k-1)nu + k nu^2 + tau k (nu + nu^2) + (k-tau-2)^2 nu"
    )


@dataclass(frozen=True)
class EncodingComplexity:
    class_a: ComplexityEstimate
    class_b: ComplexityEstimate

    @property
    def total(self) -> ComplexityEstimate:
        return self.class_a + self.class_b


def encoding_complexity(params: CodeParams, nu: int | None = None) -> EncodingComplexity:
    """Per-row encoding cost of the Class A code, the Class B code, and their sum."""
    k, tau, n_a = params.k, params.tau, params.n_a
    nu = params.width if nu is None else nu
    c_a = ComplexityEstimate(
        (n_a - k) * (k - 1) * nu + tau * nu,
        (n_a - k) * k * nu**2,
        "(n_A-k)(k nu^2 + (k-1) nu) + tau nu",
    )
    b_adds = sum(k - tau - 1 - i for i in range(1, params.n - n_a + 1))
    c_b = ComplexityEstimate(b_adds * nu, 0, "sum_i (k-tau-1-i) nu")
    return EncodingComplexity(c_a, c_b)


def measured_complexity(muls: int, adds: int, nu: int) -> ComplexityEstimate:
    """Weight counted field operations the same way as the formulas."""
    return ComplexityEstimate(adds * nu, muls * nu**2, "measured")


@dataclass(frozen=True)
class BaselineRow:
    scheme: str
    beta: object
    fault_tolerance: object
    repair_bandwidth: object
    repair_complexity: object
    encoding_complexity: object
    note: str = ""


def _need(extras: dict, name: str):
    if extras.get(name) is None:
        raise MissingParameter(name)
    return extras[name]


def _mds_repair(k, nu):
    return (k - 1) * nu + k * nu**2


def _mds_encode(n, k, nu):
    # printed as O((n-k)((k-1)nu) + k nu^2)
    return (n - k) * ((k - 1) * nu) + k * nu**2


def baseline_table(
    params: CodeParams,
    extras: dict | None = None,
    schemes=("MDS", "LRC", "MDR", "Zigzag", "Piggyback", "Proposed"),
    nu: int | None = None,
) -> list[BaselineRow]:
    """Evaluate the comparison formulas for an (n, k) code.

    ``extras`` supplies the parameters of the other constructions:
    ``r`` (LRC), and ``t``, ``t_r``, ``l`` (Piggyback).
    """
    extras = extras or {}
    n, k, tau = params.n, params.k, params.tau
    nu = params.width if nu is None else nu
    rows = []
    for scheme in schemes:
        if scheme == "MDS":
            rows.append(BaselineRow("MDS", 1, n - k, Fraction(k), _mds_repair(k, nu), _mds_encode(n, k, nu)))
        elif scheme == "LRC":
            r = _need(extras, "r")
            groups = n - k - r
            local = ceil(Fraction(k, groups)) - 1
            rows.append(
                BaselineRow(
                    "LRC",
                    1,
                    r + 1,
                    Fraction(k, groups),
                    local * nu,
                    r * _mds_repair(k, nu) + groups * local * nu,
                )
            )
        elif scheme == "MDR":
            note = "" if n == k + 2 else "MDR codes require n = k + 2"
            rows.append(
                BaselineRow("MDR", 2**k, 2, Fraction(k + 1, 2), (k - 1) * nu, (k - 1) * nu, note)
            )
        elif scheme == "Zigzag":
            rows.append(
                BaselineRow(
                    "Zigzag",
                    (n - k) ** (k - 1),
                    n - k,
                    Fraction(n - 1, n - k),
                    _mds_repair(k, nu),
                    _mds_encode(n, k, nu),
                )
            )
        elif scheme == "Piggyback":
            t, t_r, l = _need(extras, "t"), _need(extras, "t_r"), _need(extras, "l")
            lam = Fraction((k - t_r) * (k + t) + t_r * (k + t_r + l - 2), 2 * k)
            rows.append(BaselineRow("Piggyback", 2, 1, lam, NOT_SPECIFIED, NOT_SPECIFIED))
        elif scheme == "Proposed":
            rows.append(
                BaselineRow(
                    "Proposed",
                    k,
                    params.n - params.n_b - tau + 1,
                    lambda_upper_bound(params),
                    Fraction(repair_complexity(params, nu).total, k),
                    encoding_complexity(params, nu).total.total,
                    "fault tolerance is a lower bound; bandwidth is a strict upper bound",
                )
            )
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
    return rows


def _num(x):
    if isinstance(x, Fraction):
        return f"{float(x):.6g}"
    return str(x)


def metrics_csv(rows: list[dict]) -> str:
    """CSV text with the fixed column order of CSV_HEADER."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_num(row[h]) for h in CSV_HEADER])
    return buf.getvalue()


def baseline_csv_rows(params: CodeParams, table: list[BaselineRow]) -> list[dict]:
    return [
        {
            "scheme": row.scheme,
            "n": params.n,
            "k": params.k,
            "f": row.fault_tolerance,
            "lambda": row.repair_bandwidth,
            "repair_complexity": row.repair_complexity,
            "encoding_complexity": row.encoding_complexity,
        }
        for row in table
    ]
