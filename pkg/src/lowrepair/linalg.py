"""Dense linear algebra over GF(2^w).

Matrices are plain 2-D numpy arrays holding field elements. Elimination
always pivots on the first nonzero entry of a column, so results (and test
failures) are reproducible.
"""

from __future__ import annotations

import numpy as np

from .gf import GF


class Singular(ValueError):
    """The system does not determine a unique solution."""


class Inconsistent(ValueError):
    """The system has no solution at all."""


def as_matrix(field: GF, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.size and (m.min() < 0 or m.max() >= field.order):
        raise ValueError("matrix entries outside the field")
    return m.astype(field.dtype)


def identity(field: GF, n: int) -> np.ndarray:
    return np.eye(n, dtype=field.dtype)


def matmul(field: GF, a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    out = np.zeros((a.shape[0], b.shape[1]), dtype=field.dtype)
    for l in range(a.shape[1]):
        out ^= field.mul(a[:, l][:, None], b[l][None, :])
    return out[:, 0] if vec else out


def row_reduce(field: GF, m, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination on the first ``ncols`` columns.

    Columns past ``ncols`` (an augmented right-hand side) are carried along.
    Returns the reduced matrix and the pivot columns.
    """
    m = np.array(m, dtype=field.dtype, copy=True)
    rows, cols = m.shape
    if ncols is None:
        ncols = cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = field.scale(field.inv(m[r, c]), m[r])
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] ^= field.mul(col[hit][:, None], m[r][None, :])
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: GF, m) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(row_reduce(field, m)[1])


def solve_system(field: GF, a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for an m x n system of full column rank.

    ``b`` may be a vector or an m x s matrix of right-hand sides; the
    solution has the matching shape. Raises Singular when rank(a) < n and
    Inconsistent when the equations contradict each other.
    """
    a = np.asarray(a, dtype=field.dtype)
    b = np.asarray(b, dtype=field.dtype)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError("right-hand side has the wrong number of rows")
    reduced, pivots = row_reduce(field, np.hstack([a, b]), ncols=n)
    if len(pivots) < n:
        raise Singular(f"rank {len(pivots)} < {n} unknowns")
    if np.any(reduced[n:, n:]):
        raise Inconsistent("overdetermined system is inconsistent")
    x = reduced[:n, n:]
    return x[:, 0] if vec else x


def solve(field: GF, a, b) -> np.ndarray:
    """Solve a square system; Singular if ``a`` is rank deficient."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("solve needs a square matrix")
    return solve_system(field, a, b)


def inverse(field: GF, m) -> np.ndarray:
    m = np.asarray(m)
    return solve(field, m, identity(field, m.shape[0]))


def vandermonde(field: GF, points, ncols: int) -> np.ndarray:
    """Rows (1, x, x^2, ..., x^(ncols-1)) for each evaluation point x."""
    return np.array(
        [[field.pow(x, e) for e in range(ncols)] for x in points], dtype=field.dtype
    )


def batch_invertible(field: GF, mats) -> np.ndarray:
    """Invertibility of each square matrix in a (batch, n, n) stack.

    Runs one elimination step per column across the whole batch at once.
    """
    m = np.array(mats, dtype=field.dtype, copy=True)
    b, n, _ = m.shape
    ok = np.ones(b, dtype=bool)
    rows = np.arange(b)
    for c in range(n):
        nz = m[:, c:, c] != 0
        has = nz.any(axis=1)
        ok &= has
        p = c + np.argmax(nz, axis=1)
        top = m[rows, p].copy()
        m[rows, p] = m[:, c]
        m[:, c] = top
        # singular members keep a zero pivot and are already marked
        m[:, c] = field.mul(field.inv_array(m[:, c, c])[:, None], m[:, c])
        factors = m[:, :, c].copy()
        factors[:, c] = 0
        m ^= field.mul(factors[:, :, None], m[:, c][:, None, :])
    return ok
