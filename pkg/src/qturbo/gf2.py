"""Dense linear algebra over GF(2) on uint8 numpy arrays."""

import numpy as np


def as_bits(a):
    return np.asarray(a, dtype=np.uint8) & 1


def matmul(a, b):
    """Matrix product mod 2."""
    return (as_bits(a).astype(np.int64) @ as_bits(b).astype(np.int64) & 1).astype(np.uint8)


def row_reduce(a):
    """Return (reduced echelon form, pivot columns) of ``a`` over GF(2)."""
    m = as_bits(a).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        hit = np.nonzero(m[:, c])[0]
        hit = hit[hit != r]
        m[hit] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a):
    a = as_bits(a)
    if a.size == 0:
        return 0
    return len(row_reduce(a)[1])


def inverse(a):
    """Inverse of a square GF(2) matrix; raises ``np.linalg.LinAlgError`` if singular."""
    a = as_bits(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got {a.shape}")
    red, piv = row_reduce(np.hstack([a, np.eye(n, dtype=np.uint8)]))
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return red[:, n:].copy()


def first_dependent_row(a):
    """Index of the first row lying in the span of the rows before it, or None."""
    a = as_bits(a)
    basis = np.zeros((0, a.shape[1]), dtype=np.uint8)
    for i, row in enumerate(a):
        candidate = np.vstack([basis, row])
        if rank(candidate) == basis.shape[0]:
            return i
        basis = candidate
    return None


def symplectic_form(n):
    """The 2n x 2n form [[0, I], [I, 0]] for the (z|x) layout."""
    omega = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    omega[:n, n:] = np.eye(n, dtype=np.uint8)
    omega[n:, :n] = np.eye(n, dtype=np.uint8)
    return omega


def is_symplectic(u):
    u = as_bits(u)
    w = u.shape[0]
    if u.shape != (w, w) or w % 2:
        return False
    omega = symplectic_form(w // 2)
    return np.array_equal(matmul(matmul(u, omega), u.T), omega)
