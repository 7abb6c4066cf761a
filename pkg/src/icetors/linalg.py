"""Dense linear algebra over GF(p).

Matrices are plain ``numpy`` int64 arrays whose entries lie in ``[0, p)``.
Every routine reduces its output mod p, so callers may pass unreduced input.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError


def fmat(data, p: int, shape=None) -> np.ndarray:
    m = np.asarray(data, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    return np.mod(m, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ContractError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.mod(a @ b, p)


def _rref(m: np.ndarray, p: int):
    r = np.mod(np.array(m, dtype=np.int64), p)
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        r[row] = np.mod(r[row] * inv, p)
        factors = r[:, col].copy()
        factors[row] = 0
        if factors.any():
            r = np.mod(r - np.outer(factors, r[row]), p)
        pivots.append(col)
        row += 1
    return r, pivots


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """Reduced row echelon form and rank."""
    r, pivots = _rref(m, p)
    return r, len(pivots)


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(_rref(m, p)[1])


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of ``{x : m @ x = 0}``."""
    rows, cols = m.shape
    if rows == 0 or m.size == 0:
        return identity(cols)
    r, pivots = _rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = (-r[j, f]) % p
    return basis


def solve(m: np.ndarray, b, p: int):
    """Some x with ``m @ x == b``, or None.

    The returned solution sets every free variable to zero, so it is
    deterministic.
    """
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise ContractError(f"right-hand side has length {b.shape[0]}, expected {rows}")
    if rows == 0:
        return zeros(1, cols)[0]
    aug = np.concatenate([np.mod(m, p), np.mod(b, p).reshape(-1, 1)], axis=1)
    r, pivots = _rref(aug, p)
    if cols in pivots:
        return None
    x = zeros(1, cols)[0]
    for j, pc in enumerate(pivots):
        x[pc] = r[j, cols]
    return x


def solve_matrix(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """X with ``a @ X == b`` (column by column), or None."""
    if a.shape[0] != b.shape[0]:
        raise ContractError(f"shape mismatch {a.shape} vs {b.shape}")
    out = zeros(a.shape[1], b.shape[1])
    for j in range(b.shape[1]):
        x = solve(a, b[:, j], p)
        if x is None:
            return None
        out[:, j] = x
    return out


def colspace(m: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``m`` forming a basis of its column space."""
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, pivots = _rref(m, p)
    return m[:, pivots] % p


def complement_columns(basis: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis columns completing ``basis`` (n x k) to a basis of GF(p)^n."""
    basis = basis if basis.size else zeros(n, 0)
    k = basis.shape[1]
    _, pivots = _rref(np.concatenate([basis, identity(n)], axis=1), p)
    chosen = [c - k for c in pivots if c >= k]
    out = zeros(n, len(chosen))
    for j, i in enumerate(chosen):
        out[i, j] = 1
    return out


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ContractError(f"cannot invert non-square {m.shape}")
    if n == 0:
        return zeros(0, 0)
    r, pivots = _rref(np.concatenate([m, identity(n)], axis=1), p)
    if pivots[:n] != list(range(n)):
        raise ContractError("matrix is singular")
    return r[:, n:]


def is_invertible(m: np.ndarray, p: int) -> bool:
    n = m.shape[0]
    return m.shape == (n, n) and (n == 0 or rank(m, p) == n)


def canonical_rowspace(m: np.ndarray, p: int) -> bytes:
    """Hashable key of the row space of ``m``."""
    if m.size == 0:
        return b""
    r, pivots = _rref(m, p)
    return r[: len(pivots)].tobytes() + bytes([m.shape[1] % 256])
