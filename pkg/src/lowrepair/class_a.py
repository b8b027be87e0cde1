"""Class A parity: a systematic Reed-Solomon code with piggybacks added.

Row i of the data block is encoded with the (n_a, k) MDS code. The last tau
parity columns then get one extra data symbol each, always taken from
column i of the data block, so that a node-i repair that has cached row i
can peel those symbols off one parity read at a time.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from .gf import GF
from .linalg import batch_invertible, inverse, matmul, vandermonde
from .model import CodeParams, ParityEquation, SymbolPos


class FieldTooSmall(ValueError):
    pass


class NotPiggybacked(ValueError):
    pass


# Above this many k-subsets the MDS check relies on the Vandermonde argument.
MDS_ENUMERATION_LIMIT = 20000


def systematic_generator(field: GF, n_a: int, k: int) -> np.ndarray:
    """n_a x k generator whose top k rows are the identity.

    Built as V @ inv(V[:k]) for the Vandermonde matrix V on points 0..n_a-1,
    so any k rows are invertible whenever the points are distinct.
    """
    if field.order < n_a:
        raise FieldTooSmall(f"GF(2^{field.width}) has fewer than {n_a} elements")
    v = vandermonde(field, range(n_a), k)
    return matmul(field, v, inverse(field, v[:k]))


def is_mds(field: GF, coeffs: np.ndarray) -> bool:
    """Exhaustively check that every k columns of [I | coeffs] are independent."""
    k = coeffs.shape[0]
    full = np.hstack([np.eye(k, dtype=field.dtype), coeffs])
    subsets = np.array(list(combinations(range(full.shape[1]), k)))
    return bool(batch_invertible(field, full[:, subsets].transpose(1, 0, 2)).all())


def mds_coefficients(params: CodeParams, field: GF | None = None, check: bool = True) -> np.ndarray:
    """The k x (n_a - k) matrix of alpha[l, j - k] coefficients.

    Column c holds the weights of parity node k + c.
    """
    field = field or params.field()
    if field.order <= params.n_a:
        raise FieldTooSmall(f"GF(2^{field.width}) too small for n_A={params.n_a}")
    gen = systematic_generator(field, params.n_a, params.k)
    coeffs = np.ascontiguousarray(gen[params.k :].T)
    if check and comb(params.n_a, params.k) <= MDS_ENUMERATION_LIMIT:
        if not is_mds(field, coeffs):
            raise AssertionError("generated coefficients are not MDS")
    return coeffs


def piggyback_source(params: CodeParams, i: int, u: int) -> SymbolPos:
    """The data symbol piggybacked onto parity (i, u)."""
    k = params.k
    return SymbolPos((i + u - params.n_a + params.tau + 1) % k, i)


def piggyback_columns(params: CodeParams) -> range:
    return range(params.n_a - params.tau, params.n_a)


def class_a_equations(params: CodeParams, coeffs: np.ndarray) -> list[ParityEquation]:
    """All k * (n_a - k) Class A parity equations, node by node."""
    k = params.k
    eqs = []
    for u in range(k, params.n_a):
        for i in range(k):
            terms = [(SymbolPos(i, l), int(coeffs[l, u - k])) for l in range(k)]
            if u >= params.n_a - params.tau:
                terms.append((piggyback_source(params, i, u), 1))
            eqs.append(ParityEquation(SymbolPos(i, u), tuple(terms)))
    return eqs


def encode_class_a(field, params: CodeParams, coeffs: np.ndarray, data: np.ndarray) -> np.ndarray:
    """Class A parity block of shape (k, n_a - k, *stripes).

    Computes the plain MDS sums first and then adds the piggybacks, so a
    CountingField sees exactly k multiplications and k-1 additions per parity
    plus one addition per piggyback.
    """
    k = params.k
    out = np.zeros((k, params.n_a - k) + data.shape[2:], dtype=field.dtype)
    for u in range(k, params.n_a):
        for i in range(k):
            acc = field.mul(int(coeffs[0, u - k]), data[i, 0])
            for l in range(1, k):
                acc = field.add(acc, field.mul(int(coeffs[l, u - k]), data[i, l]))
            if u >= params.n_a - params.tau:
                src = piggyback_source(params, i, u)
                acc = field.add(acc, data[src.row, src.col])
            out[i, u - k] = acc
    return out


def piggyback_system_matrix(params: CodeParams, coeffs: np.ndarray, u: int) -> np.ndarray:
    """k x k^2 matrix mapping the row-major data vector to parity node u.

    Row i carries the coefficient vector in block i and a unit vector at
    position i of the block holding the piggybacked symbol.
    """
    if not (params.n_a - params.tau <= u < params.n_a):
        raise NotPiggybacked(f"node {u} carries no piggyback")
    k = params.k
    g = np.zeros((k, k * k), dtype=coeffs.dtype)
    for i in range(k):
        g[i, i * k : (i + 1) * k] = coeffs[:, u - k]
        src = piggyback_source(params, i, u)
        g[i, src.row * k + src.col] ^= 1
    return g


def piggyback_submatrix(params: CodeParams, coeffs: np.ndarray, u: int, r: int) -> np.ndarray:
    """Columns of the system matrix that multiply the symbols of failed node r."""
    g = piggyback_system_matrix(params, coeffs, u)
    k = params.k
    return g[:, [b * k + r for b in range(k)]]
