"""Node repair with metered reads, generic erasure decoding, fault-tolerance sweeps.

Every symbol access goes through a reader object so reads are counted where
they happen. Symbols read once are cached for the rest of the repair and are
never fetched (or counted) again. Read schedules are data-independent, so a
reader may hand back whole vectors of stripes and the arithmetic runs on all
of them at once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .class_a import piggyback_columns, piggyback_source
from .class_b import Uncovered, designated_parity
from .code import Code
from .gf import CountingField
from .linalg import Singular, rank, solve_system
from .model import SymbolPos, set_Q, set_R

# Above this many nodes verify_fault_tolerance samples patterns instead.
EXHAUSTIVE_MAX_N = 16


class RepairError(ValueError):
    pass


class NotSingleDataFailure(RepairError):
    pass


class NotParityNode(RepairError):
    pass


class Undecodable(RepairError):
    def __init__(self, erased, unknowns: int, rank_: int):
        self.erased = tuple(sorted(erased))
        super().__init__(
            f"erasure pattern {list(self.erased)} is undecodable (rank {rank_} < {unknowns})"
        )


class ErasedRead(LookupError):
    pass


class ArrayReader:
    """Reads symbols out of an in-memory code array, refusing erased nodes."""

    def __init__(self, symbols: np.ndarray, erased=()):
        self.symbols = symbols
        self.erased = frozenset(erased)
        self.count = 0

    def read(self, pos: SymbolPos):
        if pos.col in self.erased:
            raise ErasedRead(f"node {pos.col} is erased")
        self.count += 1
        return self.symbols[pos.row, pos.col]


@dataclass
class RepairReport:
    failed_node: int | tuple[int, ...]
    reads: list[SymbolPos] = field(default_factory=list)
    recovered: list[tuple[SymbolPos, object]] = field(default_factory=list)
    muls: int = 0
    adds: int = 0
    mode: str = "data node"
    fallback: list[SymbolPos] = field(default_factory=list)
    stripes: int = 1

    @property
    def read_count(self) -> int:
        return len(self.reads)

    @property
    def total_reads(self) -> int:
        return len(self.reads) * self.stripes

    def to_json(self) -> dict:
        out = {
            "failed_node": self.failed_node,
            "mode": self.mode,
            "stripes": self.stripes,
            "reads_per_stripe": len(self.reads),
            "total_reads": self.total_reads,
            "reads": [list(p) for p in self.reads],
            "muls_per_stripe": self.muls,
            "adds_per_stripe": self.adds,
            "fallback": [list(p) for p in self.fallback],
        }
        if self.stripes == 1:
            out["recovered"] = [[p.row, p.col, int(v)] for p, v in self.recovered]
        return out


class _Session:
    """Read cache plus op counter for one repair."""

    def __init__(self, code: Code, reader, report: RepairReport):
        self.code = code
        self.reader = reader
        self.report = report
        self.cache: dict[SymbolPos, object] = {}
        self.f = CountingField(code.field)

    def get(self, pos: SymbolPos):
        if pos not in self.cache:
            self.cache[pos] = self.reader.read(pos)
            self.report.reads.append(pos)
        return self.cache[pos]

    def recovered(self, pos: SymbolPos, value):
        self.cache[pos] = value
        self.report.recovered.append((pos, value))

    def finish(self):
        self.report.muls = self.f.muls
        self.report.adds = self.f.adds


def _solve_from_parity(s: _Session, unknown: SymbolPos, parity: SymbolPos):
    """Recover the single unknown term of a parity equation from cached or read terms."""
    eq = s.code.equation(parity)
    f = s.f
    acc = s.get(parity)
    coef = None
    for pos, c in eq.terms:
        if pos == unknown:
            coef = c
            continue
        v = s.get(pos)
        acc = f.add(acc, v if c == 1 else f.mul(c, v))
    return acc if coef == 1 else f.div(acc, coef)


def repair_data_node(code: Code, reader, j: int) -> tuple[np.ndarray, RepairReport]:
    """Rebuild data node j: Class A for tau+1 symbols, then Class B for the rest.

    Q symbols not covered by any remaining Class B parity fall back to a
    decode of their own row through the first pure MDS parity.
    """
    p = code.params
    k = p.k
    if not 0 <= j < k:
        raise NotSingleDataFailure(f"node {j} is not a data node")
    report = RepairReport(j, mode="data node")
    s = _Session(code, reader, report)
    f = s.f
    alpha = code.coeffs

    # d[j,j] from the row and the first (pure MDS) parity
    acc = s.get(SymbolPos(j, k))
    for pos in set_R(j, p):
        acc = f.add(acc, f.mul(int(alpha[pos.col, 0]), s.get(pos)))
    s.recovered(SymbolPos(j, j), f.div(acc, int(alpha[j, 0])))

    # piggybacked parities: row j is fully cached, strip the MDS part
    for u in piggyback_columns(p):
        mds = None
        for l in range(k):
            t = f.mul(int(alpha[l, u - k]), s.cache[SymbolPos(j, l)])
            mds = t if mds is None else f.add(mds, t)
        src = piggyback_source(p, j, u)
        s.recovered(src, f.add(s.get(SymbolPos(j, u)), mds))

    for d in set_Q(j, p):
        try:
            if code.plan is None:
                raise Uncovered(d)
            target = designated_parity(d, code.plan)
        except Uncovered:
            report.fallback.append(d)
            target = SymbolPos(d.row, k)
        s.recovered(d, _solve_from_parity(s, d, target))

    s.finish()
    column = np.stack([s.cache[SymbolPos(i, j)] for i in range(k)])
    return column, report


def repair_parity_node(code: Code, reader, j: int) -> tuple[np.ndarray, RepairReport]:
    """Re-encode parity node j from the data block."""
    if not code.k <= j < code.n:
        raise NotParityNode(f"node {j} is not a parity node")
    report = RepairReport(j, mode="parity re-encode")
    s = _Session(code, reader, report)
    out = []
    for eq in code.node_equations(j):
        acc = None
        for pos, c in eq.terms:
            v = s.get(pos)
            v = v if c == 1 else s.f.mul(c, v)
            acc = v if acc is None else s.f.add(acc, v)
        out.append(acc)
        report.recovered.append((eq.target, acc))
    s.finish()
    return np.stack(out), report


def _unknowns(code: Code, erased) -> list[SymbolPos]:
    return [SymbolPos(i, j) for j in sorted(erased) if j < code.k for i in range(code.k)]


def erasure_system(code: Code, erased) -> tuple[np.ndarray, list, list[SymbolPos]]:
    """Coefficient matrix of the surviving parities over the erased data symbols.

    Surviving data symbols are known, so their identity rows are eliminated
    up front; the full system over all k^2 data symbols has full rank exactly
    when this reduced one does.
    """
    unknowns = _unknowns(code, erased)
    index = {pos: c for c, pos in enumerate(unknowns)}
    rows, eqs = [], []
    for eq in code.equations:
        if eq.target.col in erased:
            continue
        row = np.zeros(len(unknowns), dtype=code.field.dtype)
        hit = False
        for pos, c in eq.terms:
            if pos in index:
                row[index[pos]] = c
                hit = True
        if hit:
            rows.append(row)
            eqs.append(eq)
    a = np.array(rows, dtype=code.field.dtype).reshape(len(rows), len(unknowns))
    return a, eqs, unknowns


def is_decodable(code: Code, erased) -> bool:
    erased = frozenset(erased)
    a, _, unknowns = erasure_system(code, erased)
    return not unknowns or rank(code.field, a) == len(unknowns)


def decode_erasures(code: Code, reader, erased) -> tuple[np.ndarray, RepairReport]:
    """Recover the whole k x k data block with the nodes in ``erased`` missing."""
    erased = frozenset(erased)
    if not erased:
        raise ValueError("no erased nodes given")
    report = RepairReport(tuple(sorted(erased)), mode="erasure decode")
    s = _Session(code, reader, report)
    f = s.f
    k = code.k
    a, eqs, unknowns = erasure_system(code, erased)
    if unknowns:
        r = rank(code.field, a)
        if r < len(unknowns):
            raise Undecodable(erased, len(unknowns), r)
        index = set(unknowns)
        rhs = []
        for eq in eqs:
            acc = s.get(eq.target)
            for pos, c in eq.terms:
                if pos not in index:
                    v = s.get(pos)
                    acc = f.add(acc, v if c == 1 else f.mul(c, v))
            rhs.append(acc)
        rhs = np.stack(rhs)
        shape = rhs.shape[1:]
        try:
            x = solve_system(code.field, a, rhs.reshape(len(eqs), -1))
        except Singular:
            raise Undecodable(erased, len(unknowns), rank(code.field, a)) from None
        for pos, v in zip(unknowns, x):
            s.recovered(pos, v.reshape(shape)[()])
    data = np.stack(
        [np.stack([s.get(SymbolPos(i, l)) for l in range(k)]) for i in range(k)]
    )
    s.finish()
    return data, report


def repair(code: Code, reader, erased) -> tuple[dict[int, np.ndarray], RepairReport]:
    """Restore every erased node, choosing the cheapest applicable route."""
    erased = sorted(set(erased))
    if len(erased) == 1:
        j = erased[0]
        if j < code.k:
            col, report = repair_data_node(code, reader, j)
        else:
            col, report = repair_parity_node(code, reader, j)
        return {j: col}, report
    data, report = decode_erasures(code, reader, erased)
    out = {}
    for j in erased:
        out[j] = data[:, j] if j < code.k else code.encode_parity_node(data, j)
    return out, report


@dataclass
class FaultToleranceReport:
    max_erasures: int
    checked: int
    failing: list[tuple[int, ...]]
    exhaustive: bool = True
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failing

    def summary(self) -> str:
        how = "exhaustive" if self.exhaustive else f"sampled (seed {self.seed})"
        verdict = "PASS" if self.passed else f"FAIL ({len(self.failing)} undecodable)"
        return f"{verdict}: {self.checked} patterns of up to {self.max_erasures} erasures, {how}"


def erasure_patterns(n: int, f: int, sample: int | None = None, seed: int = 0):
    rng = random.Random(seed)
    for e in range(1, f + 1):
        if sample is None or comb(n, e) <= sample:
            yield from combinations(range(n), e)
        else:
            seen = set()
            while len(seen) < sample:
                seen.add(tuple(sorted(rng.sample(range(n), e))))
            yield from sorted(seen)


def verify_fault_tolerance(
    code: Code, f: int, sample: int = 2000, seed: int = 0
) -> FaultToleranceReport:
    """Try every erasure pattern of 1..f nodes.

    Codes with more than EXHAUSTIVE_MAX_N nodes are checked on up to
    ``sample`` random patterns per erasure count instead.
    """
    if not 0 <= f <= code.n:
        raise ValueError(f"erasure count must be in 0..{code.n}, got {f}")
    exhaustive = code.n <= EXHAUSTIVE_MAX_N
    failing, checked = [], 0
    for pattern in erasure_patterns(code.n, f, None if exhaustive else sample, seed):
        checked += 1
        if not is_decodable(code, pattern):
            failing.append(pattern)
    return FaultToleranceReport(f, checked, failing, exhaustive, None if exhaustive else seed)
