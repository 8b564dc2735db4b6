"""Gaussian elimination over F_q.

Matrices are numpy integer arrays of F_q indices (see
:class:`~multisidon.field.Extension`); arithmetic goes through the small
q x q index tables, so the same code serves prime and non-prime q.
"""

from __future__ import annotations

import numpy as np

from .field import Extension


def rref(M, ext: Extension) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    add, mul, neg, inv = ext.qtables
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        A = A.reshape(-1, ext.n if A.size else 0)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = mul[inv[A[r, c]], A[r]]
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = add[A[i], mul[neg[A[i, c]], A[r]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, ext: Extension) -> int:
    return len(rref(M, ext)[1])


def nullspace(M, ext: Extension) -> np.ndarray:
    """Basis (as rows) of the right kernel ``{x : M x = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, piv = rref(M, ext)
    _, _, neg, _ = ext.qtables
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = neg[R[r, f]]
    return out


def matmul(A, B, ext: Extension) -> np.ndarray:
    add, mul, _, _ = ext.qtables
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out


def inverse(M, ext: Extension) -> np.ndarray:
    """Inverse of a square matrix; ``ValueError`` if singular."""
    M = np.asarray(M, dtype=np.int64)
    k = M.shape[0]
    aug = np.concatenate([M, np.eye(k, dtype=np.int64)], axis=1)
    R, piv = rref(aug, ext)
    if piv[:k] != list(range(k)):
        raise ValueError("matrix is singular")
    return R[:, k:]
