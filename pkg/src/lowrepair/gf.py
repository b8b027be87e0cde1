"""Arithmetic in GF(2^w) backed by log/antilog tables.

Every binary operation accepts plain ints or numpy arrays (broadcasting), so
the same code path handles one stripe or a whole file's worth of stripes.
"""

from __future__ import annotations

import numpy as np

# Conventional primitive polynomials, bit w set.
DEFAULT_MODULI = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


class FieldError(ValueError):
    pass


class ZeroInverse(ZeroDivisionError):
    pass


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def clmul_mod(a: int, b: int, modulus: int) -> int:
    """Reference multiply: carry-less product reduced by ``modulus``."""
    return poly_mod(clmul(a, b), modulus)


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            if poly_mod(poly, (1 << d) | low) == 0:
                return False
    return True


class GF:
    """The field GF(2^width) with a fixed reduction polynomial.

    Instances are immutable once built and can be shared freely.
    """

    def __init__(self, width: int = 8, modulus: int | None = None):
        if not 1 <= width <= 16:
            raise FieldError(f"width must be in 1..16, got {width}")
        if modulus is None:
            modulus = DEFAULT_MODULI[width]
        if modulus.bit_length() - 1 != width:
            raise FieldError(f"modulus {modulus:#x} does not have degree {width}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.width = width
        self.modulus = modulus
        self.order = 1 << width
        self.dtype = np.uint8 if width <= 8 else np.uint16
        self.generator = self._find_generator()
        self._build_tables()

    def __repr__(self):
        return f"GF(2^{self.width}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.width, self.modulus) == (other.width, other.modulus)

    def __hash__(self):
        return hash((self.width, self.modulus))

    def _find_generator(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        for g in range(2, self.order):
            x, period = g, 1
            while x != 1:
                x = clmul_mod(x, g, self.modulus)
                period += 1
            if period == n:
                return g
        raise FieldError("no generator found")  # unreachable for irreducible moduli

    def _build_tables(self):
        n = self.order - 1
        exp = np.zeros(2 * n + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = clmul_mod(x, self.generator, self.modulus)
        exp[n : 2 * n] = exp[:n]
        exp[2 * n] = exp[0]
        self._exp = exp
        self._log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        # full product table when it is small (64 KiB at w=8)
        self._table = None
        if self.width <= 8:
            e = np.arange(self.order)
            t = exp[log[e][:, None] + log[e][None, :]]
            t[0, :] = 0
            t[:, 0] = 0
            self._table = t.astype(self.dtype)

    # -- scalar / vector arithmetic -------------------------------------

    def add(self, a, b):
        return a ^ b

    sub = add

    def mul(self, a, b):
        if _is_scalar(a) and _is_scalar(b):
            a, b = int(a), int(b)
            if a == 0 or b == 0:
                return 0
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        a = np.asarray(a)
        b = np.asarray(b)
        if self._table is not None:
            return self._table[a, b]
        out = self._exp[self._log[a] + self._log[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out.astype(self.dtype)

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        n = self.order - 1
        return self._exp_list[(n - self._log_list[a]) % n]

    def inv_array(self, a) -> np.ndarray:
        """Elementwise inverse; zeros map to zero."""
        a = np.asarray(a)
        n = self.order - 1
        out = self._exp[(n - self._log[a]) % n]
        return np.where(a == 0, 0, out).astype(self.dtype)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = int(a)
        if e == 0:
            return 1
        if a == 0:
            return 0
        n = self.order - 1
        return self._exp_list[(self._log_list[a] * e) % n]

    def scale(self, c: int, v: np.ndarray) -> np.ndarray:
        """Multiply array ``v`` by scalar ``c`` (fast path for row operations)."""
        c = int(c)
        v = np.asarray(v)
        if c == 0:
            return np.zeros_like(v, dtype=self.dtype)
        if c == 1:
            return v.astype(self.dtype, copy=True)
        out = self._exp[self._log[v] + self._log_list[c]]
        return np.where(v == 0, 0, out).astype(self.dtype)

    def elements(self) -> range:
        return range(self.order)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, np.integer))


class CountingField:
    """Wraps a field and tallies additions and multiplications.

    Division counts as one multiplication (by a precomputed inverse).
    """

    def __init__(self, field: GF):
        self.field = field
        self.adds = 0
        self.muls = 0

    def __getattr__(self, name):
        return getattr(self.field, name)

    def add(self, a, b):
        self.adds += 1
        return self.field.add(a, b)

    sub = add

    def mul(self, a, b):
        self.muls += 1
        return self.field.mul(a, b)

    def div(self, a, b):
        self.muls += 1
        return self.field.div(a, b)

    def reset(self):
        self.adds = self.muls = 0
