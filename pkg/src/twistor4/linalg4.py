"""Small exact linear algebra for Euclidean 4-space.

Vectors are numpy arrays of shape (4,), matrices of shape (4, 4).  The wedge
product of two vectors is stored as a full alternating 4x4 matrix; the space
of such matrices is 6-dimensional and carries the quarter-trace inner product
<A, B> = tr(A^T B) / 4, under which the six basis bivectors I[eps, k]
(eps = +1/-1, k = 1..3) are orthonormal.  The +1 triple spans a 3-space
orthogonal to the -1 triple.

Everything here is a pure function of its arguments; tolerances default to
1e-10 because inputs come from exact formulas.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "E4",
    "CHIRALITIES",
    "basis_vector",
    "inner4",
    "wedge",
    "mat_inner",
    "basis_I",
    "basis_I_stack",
    "bivector_coords",
    "bivector_from_coords",
    "det4",
    "is_orthogonal",
    "is_special_orthogonal",
]

E4 = np.eye(4)

CHIRALITIES = (1, -1)

_I_PLUS = np.array([
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
], dtype=float)

_I_MINUS = np.array([
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
], dtype=float)


def _check_chirality(eps: int) -> int:
    if eps not in (1, -1):
        raise ValueError(f"chirality must be +1 or -1, got {eps!r}")
    return eps


def basis_vector(i: int) -> np.ndarray:
    """Standard basis vector e_i, i in 1..4."""
    if not 1 <= i <= 4:
        raise ValueError("basis index must be in 1..4")
    e = np.zeros(4)
    e[i - 1] = 1.0
    return e


def inner4(a, b) -> float:
    """Euclidean inner product a^1 b^1 + ... + a^4 b^4."""
    return float(np.dot(np.asarray(a, float), np.asarray(b, float)))


def wedge(a, b) -> np.ndarray:
    """Wedge product a ^ b = b a^T - a b^T (an alternating matrix)."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return np.outer(b, a) - np.outer(a, b)


def mat_inner(A, B) -> float:
    """Quarter-trace inner product tr(A^T B) / 4 on 4x4 matrices."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    return float(np.trace(A.T @ B)) / 4.0


def basis_I(eps: int, k: int) -> np.ndarray:
    """Basis bivector I[eps, k] with eps = +1/-1 and k in 1..3.

    I[eps, 1] = e1 ^ e2 + eps e3 ^ e4,
    I[eps, 2] = e1 ^ e3 + eps e4 ^ e2,
    I[eps, 3] = e1 ^ e4 + eps e2 ^ e3.
    """
    _check_chirality(eps)
    if not 1 <= k <= 3:
        raise ValueError("basis index k must be in 1..3")
    table = _I_PLUS if eps == 1 else _I_MINUS
    return table[k - 1].copy()


def basis_I_stack(eps: int) -> np.ndarray:
    """The three I[eps, k] stacked into shape (3, 4, 4)."""
    _check_chirality(eps)
    return (_I_PLUS if eps == 1 else _I_MINUS).copy()


def bivector_coords(m, tol: float = 1e-10):
    """Coordinates of an alternating matrix in the orthonormal basis
    {I[+,k]} u {I[-,k]}.

    Returns (cplus, cminus), each of shape (3,), with
    m = sum_k cplus[k] I[+,k] + sum_k cminus[k] I[-,k].
    """
    m = np.asarray(m, float)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if np.max(np.abs(m + m.T)) > tol:
        raise ValueError("matrix is not alternating")
    cplus = np.array([mat_inner(_I_PLUS[k], m) for k in range(3)])
    cminus = np.array([mat_inner(_I_MINUS[k], m) for k in range(3)])
    return cplus, cminus


def bivector_from_coords(cplus, cminus) -> np.ndarray:
    """Inverse of :func:`bivector_coords`."""
    cplus = np.asarray(cplus, float)
    cminus = np.asarray(cminus, float)
    return np.einsum("k,kij->ij", cplus, _I_PLUS) + np.einsum(
        "k,kij->ij", cminus, _I_MINUS)


def det4(A) -> float:
    return float(np.linalg.det(np.asarray(A, float)))


def is_orthogonal(A, tol: float = 1e-10) -> bool:
    A = np.asarray(A, float)
    return bool(np.max(np.abs(A.T @ A - E4)) <= tol)


def is_special_orthogonal(A, tol: float = 1e-10) -> bool:
    return is_orthogonal(A, tol) and abs(det4(A) - 1.0) <= max(tol, 1e-8)
