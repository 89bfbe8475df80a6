"""Dense linear algebra over a prime field F_p on int64 numpy arrays.

All routines are deterministic: bases are read off reduced row-echelon
pivots, so repeated runs produce identical matrices.
"""

from __future__ import annotations

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(int(a), p - 2, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries stay below p, so products fit comfortably in int64 for desk-scale sizes
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and the list of pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        if m[r, c] != 1:
            m[r] = (m[r] * inverse(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def null_space(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as columns) of ``{x | a x = 0}``."""
    rows, cols = a.shape
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def column_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Independent columns of ``a`` spanning its column space (pivot columns)."""
    if a.shape[1] == 0:
        return a.copy()
    _, pivots = rref(a, p)
    return a[:, pivots] % p


def extend_basis(lower: np.ndarray, upper: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``upper`` completing the independent columns of ``lower`` to a basis of their span."""
    k = lower.shape[1]
    both = np.concatenate([lower, upper], axis=1) if k else upper
    if both.shape[1] == 0:
        return upper[:, :0].copy()
    _, pivots = rref(both, p)
    if pivots[:k] != list(range(k)):
        raise ValueError("lower basis is not linearly independent")
    return upper[:, [c - k for c in pivots[k:]]] % p


def solve(basis: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Coordinates ``x`` with ``basis @ x == y``; ``basis`` must have independent columns."""
    n, k = basis.shape
    if y.shape[1] == 0:
        return zeros(k, 0)
    if k == 0:
        if np.any(y % p):
            raise ValueError("vector outside the span of the basis")
        return zeros(0, y.shape[1])
    r, pivots = rref(np.concatenate([basis, y], axis=1), p)
    if pivots[:k] != list(range(k)) or (len(pivots) > k):
        raise ValueError("vector outside the span of the basis")
    return r[:k, k:] % p


def intersect(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``span(u) & span(v)``; ``u`` and ``v`` have independent columns."""
    if u.shape[1] == 0 or v.shape[1] == 0:
        return zeros(u.shape[0], 0)
    ns = null_space(np.concatenate([u, (-v) % p], axis=1), p)
    return column_basis(matmul(u, ns[: u.shape[1]], p), p)


def span_sum(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    return column_basis(np.concatenate([u, v], axis=1), p)


def preimage(a: np.ndarray, sub: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{x | a x in span(sub)}``."""
    n = a.shape[1]
    if sub.shape[1] == 0:
        return null_space(a, p)
    ns = null_space(np.concatenate([a, (-sub) % p], axis=1), p)
    return column_basis(ns[:n], p)


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        m = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank(m, p) == n:
            return m


def invert(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    return solve(a, eye(n), p)
