"""Dense Gaussian elimination over F_q.

Matrices are int64 numpy arrays of canonical field elements. Pivoting picks
the first nonzero entry in each column, so every result is deterministic.
"""

from __future__ import annotations

import numpy as np

from .field import GF


class SingularMatrixError(ArithmeticError):
    pass


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = F.asarray(M).copy()
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        inv = F.inv(int(A[r, c]))
        if inv != 1:
            A[r] = F.vmul(A[r], inv)
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            A[mask] = F.vsub(A[mask], F.vmul(col[mask, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: GF, M) -> int:
    M = F.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def row_basis(F: GF, M) -> np.ndarray:
    """Rows of the RREF spanning the row space of ``M``."""
    M = F.asarray(M)
    if M.size == 0:
        return M.reshape(0, M.shape[-1] if M.ndim == 2 else 0)
    R, piv = rref(F, M)
    return R[: len(piv)]


def inverse(F: GF, M) -> np.ndarray:
    A = F.asarray(M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R[:, n:]


def solve_left(F: GF, G, v) -> np.ndarray:
    """Return c with ``c @ G == v``; raise ValueError if v is not in the row space."""
    G = F.asarray(G)
    v = F.asarray(v)
    k = G.shape[0]
    aug = np.hstack([G.T, v[:, None]])
    R, piv = rref(F, aug)
    if k in piv:
        raise ValueError("vector is not in the row space")
    if len(piv) < k:
        raise SingularMatrixError("generator rows are linearly dependent")
    return R[:k, k].copy()


def nullspace(F: GF, M) -> np.ndarray:
    """Basis (as rows) of {v : M @ v = 0}."""
    M = F.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(F, M)
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(piv):
            basis[i, p] = F.neg(int(R[r, f]))
    return basis


def in_row_space(F: GF, basis, vectors) -> bool:
    """True if every row of ``vectors`` lies in the row space of ``basis``."""
    basis = F.asarray(basis)
    vectors = F.asarray(vectors)
    if vectors.size == 0:
        return True
    if basis.size == 0:
        return not vectors.any()
    return rank(F, np.vstack([basis, vectors])) == rank(F, basis)


def same_row_space(F: GF, A, B) -> bool:
    return in_row_space(F, A, B) and in_row_space(F, B, A)
