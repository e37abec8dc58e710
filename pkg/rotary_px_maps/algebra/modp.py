"""Dense linear algebra over F_p on numpy int64 arrays.

Conventions:
- matrices act on column vectors (v -> M @ v);
- a subspace is stored as a matrix whose ROWS form a basis, kept in reduced row echelon form,
  so that the coordinates of a vector of the subspace are its entries at the pivot columns.
"""
from __future__ import annotations
from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import InternalArithmeticError

INT = np.int64


def as_modp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=INT) % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=INT)


def empty_basis(n: int) -> np.ndarray:
    return np.zeros((0, n), dtype=INT)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=INT) @ np.asarray(b, dtype=INT)) % p


def matpow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    a = as_modp(a, p)
    n = a.shape[0]
    if k < 0:
        a = inverse(a, p)
        k = -k
    out = identity(n)
    while k:
        if k & 1:
            out = matmul(out, a, p)
        a = matmul(a, a, p)
        k >>= 1
    return out


def rref(a, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form with zero rows dropped, plus the pivot columns."""
    A = as_modp(np.atleast_2d(a), p).copy()
    m, n = A.shape
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(A[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        A[row] = (A[row] * pow(int(A[row, col]), -1, p)) % p
        factors = A[:, col].copy()
        factors[row] = 0
        if factors.any():
            A = (A - np.outer(factors, A[row])) % p
        pivots.append(col)
        row += 1
    return A[:row], pivots


def rank(a, p: int) -> int:
    return len(rref(a, p)[1])


def span(vectors, p: int, n: int = None) -> np.ndarray:
    """Echelon basis (rows) of the span of the given row vectors."""
    vectors = np.asarray(vectors, dtype=INT)
    if vectors.size == 0:
        return empty_basis(n if n is not None else vectors.shape[-1])
    return rref(vectors.reshape(-1, vectors.shape[-1]), p)[0]


def pivots_of(basis: np.ndarray) -> List[int]:
    out = []
    for row in basis:
        nz = np.nonzero(row)[0]
        out.append(int(nz[0]))
    return out


def nullspace(a, p: int) -> np.ndarray:
    """Echelon basis (rows) of {x : a @ x = 0}."""
    a = np.atleast_2d(np.asarray(a, dtype=INT))
    n = a.shape[1]
    R, pivots = rref(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    if not free:
        return empty_basis(n)
    basis = np.zeros((len(free), n), dtype=INT)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-R[row, f]) % p
    return rref(basis, p)[0]


def inverse(a, p: int) -> np.ndarray:
    a = as_modp(a, p)
    n = a.shape[0]
    R, pivots = rref(np.hstack([a, identity(n)]), p)
    if pivots[:n] != list(range(n)) or R.shape[0] < n:
        raise InternalArithmeticError("matrix is singular over F_%d" % p)
    return R[:n, n:] % p


def is_invertible(a, p: int) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def coordinates(basis: np.ndarray, vectors, p: int) -> np.ndarray:
    """Coordinates X with X @ basis = vectors, for vectors inside an echelon subspace."""
    vectors = np.atleast_2d(as_modp(vectors, p))
    piv = pivots_of(basis)
    X = vectors[:, piv]
    if not np.array_equal(matmul(X, basis, p), vectors):
        raise InternalArithmeticError("vector does not lie in the subspace")
    return X


def restrict(mat: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Matrix of an invariant subspace's restriction in the given echelon basis."""
    images = matmul(basis, np.asarray(mat, dtype=INT).T, p)
    return coordinates(basis, images, p).T % p


def spin(seeds, mats: Sequence[np.ndarray], p: int, n: int = None) -> np.ndarray:
    """Smallest subspace containing the seeds and invariant under every matrix."""
    seeds = np.atleast_2d(np.asarray(seeds, dtype=INT))
    basis = span(seeds, p, n)
    frontier = basis
    while frontier.shape[0]:
        images = np.vstack([matmul(frontier, np.asarray(m, dtype=INT).T, p) for m in mats])
        grown = span(np.vstack([basis, images]), p)
        if grown.shape[0] == basis.shape[0]:
            break
        frontier = grown
        basis = grown
    return basis


def block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=INT)
    k = 0
    for m in mats:
        d = m.shape[0]
        out[k:k + d, k:k + d] = m
        k += d
    return out


def int_vector_code(vectors: np.ndarray, p: int) -> np.ndarray:
    """Base-p integer code sum_j v_j p^j for each row."""
    vectors = np.atleast_2d(vectors)
    weights = p ** np.arange(vectors.shape[1], dtype=INT)
    return vectors @ weights
