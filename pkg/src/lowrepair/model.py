"""Code parameters, array layout and the index sets used by both parity classes.

All index arithmetic is modulo k. Sets are returned as lists ordered by
increasing offset from their anchor so that every greedy choice made on top
of them is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .gf import DEFAULT_MODULI, GF


class ParamError(ValueError):
    pass


class SymbolPos(NamedTuple):
    row: int
    col: int

    def __repr__(self):
        return f"d[{self.row},{self.col}]"


@dataclass(frozen=True)
class CodeParams:
    """An (n, k) code made of an (n_a, k) Class A code and an (n_b, k) Class B code.

    ``n_b`` is implied by ``n = n_a + n_b - k`` and is checked when given.
    Construction validates every constraint and raises ParamError naming the
    first one violated.
    """

    n: int
    k: int
    n_a: int
    tau: int
    width: int = 8
    modulus: int | None = None
    n_b: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_b is None:
            object.__setattr__(self, "n_b", self.n - self.n_a + self.k)
        validate(self)
        if self.modulus is None:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.width])

    @property
    def n_class_b(self) -> int:
        return self.n - self.n_a

    @property
    def fault_tolerance(self) -> int:
        """Guaranteed number of correctable node erasures."""
        return self.n_a - self.k - self.tau + 1

    def field(self) -> GF:
        return make_field(self.width, self.modulus)

    def node_kind(self, j: int) -> str:
        if not 0 <= j < self.n:
            raise IndexError(f"node {j} outside 0..{self.n - 1}")
        if j < self.k:
            return "data"
        return "A" if j < self.n_a else "B"

    def with_n(self, n: int) -> CodeParams:
        return CodeParams(n, self.k, self.n_a, self.tau, self.width, self.modulus)


_FIELDS: dict[tuple[int, int | None], GF] = {}


def make_field(width: int, modulus: int | None = None) -> GF:
    key = (width, modulus)
    if key not in _FIELDS:
        _FIELDS[key] = GF(width, modulus)
    return _FIELDS[key]


def validate(p: CodeParams) -> None:
    k, n, n_a, tau = p.k, p.n, p.n_a, p.tau
    if k < 1:
        raise ParamError(f"k must be positive, got {k}")
    if not (k + 2 <= n_a < 2 * k):
        raise ParamError(f"need k+2 <= n_A < 2k, got k={k}, n_A={n_a}")
    if not (1 <= tau <= n_a - k - 1):
        raise ParamError(f"need 1 <= tau <= n_A-k-1 = {n_a - k - 1}, got tau={tau}")
    if p.n_b is not None and n != n_a + p.n_b - k:
        raise ParamError(f"need n = n_A + n_B - k, got n={n}, n_A={n_a}, n_B={p.n_b}, k={k}")
    if not (0 <= n - n_a <= k - tau - 1):
        raise ParamError(
            f"need 0 <= n - n_A <= k - tau - 1 = {k - tau - 1} Class B nodes, got {n - n_a}"
        )
    if not 1 <= p.width <= 16:
        raise ParamError(f"field width must be in 1..16, got {p.width}")
    if (1 << p.width) <= n_a:
        raise ParamError(f"field GF(2^{p.width}) too small for n_A={n_a} evaluation points")


def _check(j: int, k: int, name: str = "index"):
    if not 0 <= j < k:
        raise IndexError(f"{name} {j} outside 0..{k - 1}")


def set_R(j: int, p: CodeParams) -> list[SymbolPos]:
    """Row j without its diagonal symbol: the data read during Class A repair of node j."""
    k = p.k
    _check(j, k)
    return [SymbolPos(j, (j + s) % k) for s in range(1, k)]


def set_Q(j: int, p: CodeParams) -> list[SymbolPos]:
    """Symbols of node j that Class A repair does not recover."""
    k = p.k
    _check(j, k)
    return [SymbolPos((j + s) % k, j) for s in range(p.tau + 1, k)]


def set_X(j: int, p: CodeParams) -> list[SymbolPos]:
    """Cached row-j symbols that also belong to some Q set."""
    k = p.k
    _check(j, k)
    return [SymbolPos(j, (j + s) % k) for s in range(1, k - p.tau)]


def set_Dtilde(i: int, j: int, p: CodeParams) -> list[SymbolPos]:
    """The wrapped diagonal through (i, j)."""
    k = p.k
    _check(i, k, "row")
    _check(j, k, "col")
    return [SymbolPos((i + s) % k, (j + s) % k) for s in range(k)]


def offset(pos: SymbolPos, k: int) -> int:
    """Diagonal offset (row - col) mod k; Q symbols have offsets tau+1..k-1."""
    return (pos.row - pos.col) % k


def in_Q(pos: SymbolPos, p: CodeParams) -> bool:
    return offset(pos, p.k) > p.tau


@dataclass(frozen=True)
class ParityEquation:
    """A parity symbol as a weighted sum of data symbols."""

    target: SymbolPos
    terms: tuple[tuple[SymbolPos, int], ...]

    def __post_init__(self):
        positions = [t[0] for t in self.terms]
        if len(set(positions)) != len(positions):
            raise ValueError(f"duplicate term positions in equation for {self.target}")

    @property
    def positions(self) -> list[SymbolPos]:
        return [t[0] for t in self.terms]

    def coefficient(self, pos: SymbolPos) -> int:
        for q, c in self.terms:
            if q == pos:
                return c
        return 0

    def __contains__(self, pos) -> bool:
        return any(q == pos for q, _ in self.terms)

    def evaluate(self, field, data):
        """Evaluate over ``data`` (k x k, optionally with trailing stripe axes)."""
        acc = None
        for pos, c in self.terms:
            v = data[pos.row, pos.col]
            if c != 1:
                v = field.mul(c, v)
            acc = v if acc is None else field.add(acc, v)
        if acc is None:
            return np.zeros(np.shape(data)[2:], dtype=field.dtype)[()]
        return acc

    def to_json(self) -> dict:
        return {
            "target": list(self.target),
            "terms": [[pos.row, pos.col, c] for pos, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> ParityEquation:
        return cls(
            SymbolPos(*obj["target"]),
            tuple((SymbolPos(r, c), coef) for r, c, coef in obj["terms"]),
        )


@dataclass
class CodeArray:
    """A k x n array of symbols: data block, then Class A, then Class B parities.

    Extra trailing axes index independent stripes.
    """

    params: CodeParams
    symbols: np.ndarray

    @property
    def data(self) -> np.ndarray:
        return self.symbols[:, : self.params.k]

    def column(self, j: int) -> np.ndarray:
        return self.symbols[:, j]
