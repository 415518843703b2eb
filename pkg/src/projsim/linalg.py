"""Vector primitives and orthogonal projection onto the span of a vector group.

Vectors are 1-D float64 numpy arrays and groups are 2-D arrays whose rows are
the group members. Two routes to the projection are provided:

* the basis route, ``orthonormalize`` + ``project_onto_basis``, which is total
  and tolerates linearly dependent or zero rows;
* the normal-equation route, ``project_via_gram``, which solves
  ``lam @ (A @ A.T) = b @ A.T`` and refuses numerically singular Gram matrices.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteVector, SingularGram, ZeroVector

DEFAULT_TOL = 1e-10


class CallCounter:
    """Thread-safe monotonically increasing counter used for instrumentation."""

    def __init__(self):
        self._value = 0
        self._lock = threading.Lock()

    def increment(self) -> None:
        with self._lock:
            self._value += 1

    @property
    def value(self) -> int:
        return self._value


#: Number of ``orthonormalize`` calls made in this process.
ORTHONORMALIZE_CALLS = CallCounter()


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a nonempty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteVector(f"{name} has non-finite components")
    return arr


def as_group(rows, name: str = "group") -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array of rows, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteVector(f"{name} has non-finite components")
    return arr


def _check_same_dim(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"dimension {u.shape[-1]} != {v.shape[-1]}")


def dot(u, v) -> float:
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    _check_same_dim(u, v)
    return float(np.dot(u, v))


def norm(v) -> float:
    v = as_vector(v)
    return float(np.sqrt(np.dot(v, v)))


def cosine(u, v) -> float:
    """Cosine of the angle between two nonzero vectors, clamped to [-1, 1]."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    _check_same_dim(u, v)
    nu = norm(u)
    nv = norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine is undefined for a zero vector")
    c = float(np.dot(u, v)) / (nu * nv)
    return min(1.0, max(-1.0, c))


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal rows spanning the same space as a source group.

    ``vectors`` has shape ``(rank, dim)``; a rank-0 basis has shape ``(0, dim)``.
    """

    vectors: np.ndarray
    tolerance_used: float

    def __post_init__(self):
        self.vectors.setflags(write=False)

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def orthonormalize(group, tol: float = DEFAULT_TOL) -> OrthonormalBasis:
    """Rank-revealing modified Gram-Schmidt with one re-orthogonalization pass.

    A row enters the basis only when its residual, after removing its
    components along the already accepted vectors, is longer than
    ``tol`` times its original length. Zero rows are never accepted.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    A = as_group(group)
    ORTHONORMALIZE_CALLS.increment()
    n, d = A.shape
    Q = np.empty((min(n, d), d))
    r = 0
    for row in A:
        original = np.sqrt(np.dot(row, row))
        if original == 0.0:
            continue
        v = row.copy()
        for _ in range(2):
            for k in range(r):
                v -= np.dot(Q[k], v) * Q[k]
        residual = np.sqrt(np.dot(v, v))
        if residual > tol * original:
            Q[r] = v / residual
            r += 1
            if r == d:
                break
    return OrthonormalBasis(vectors=Q[:r].copy(), tolerance_used=tol)


def project_onto_basis(b, basis: OrthonormalBasis) -> np.ndarray:
    """Orthogonal projection ``sum_k (b . q_k) q_k``; zero for a rank-0 basis."""
    b = as_vector(b, "b")
    if b.shape[0] != basis.dim:
        raise DimensionMismatch(f"dimension {b.shape[0]} != basis dimension {basis.dim}")
    if basis.rank == 0:
        return np.zeros_like(b)
    Q = basis.vectors
    return (Q @ b) @ Q


def _lu_solve_extended(G: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting, carried out in ``G``'s dtype."""
    M = G.copy()
    x = rhs.copy()
    r = M.shape[0]
    for k in range(r):
        pivot = k + int(np.argmax(np.abs(M[k:, k])))
        if pivot != k:
            M[[k, pivot]] = M[[pivot, k]]
            x[[k, pivot]] = x[[pivot, k]]
        factors = M[k + 1 :, k] / M[k, k]
        M[k + 1 :, k:] -= np.outer(factors, M[k, k:])
        x[k + 1 :] -= factors * x[k]
    for k in range(r - 1, -1, -1):
        x[k] = (x[k] - np.dot(M[k, k + 1 :], x[k + 1 :])) / M[k, k]
    return x


def gram_solve(b, group, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Solve the normal equations for the combination coefficients.

    Returns ``(lam, A @ b)`` with ``lam @ (A @ A.T) = b @ A.T``, both in extended
    precision (``np.longdouble``). Forming ``A @ A.T`` squares the condition
    number of the group, so the r-by-r system is assembled and solved by pivoted
    LU in extended precision. ``SingularGram`` is raised when the 2-norm
    condition number of the Gram matrix exceeds ``1 / tol``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    b = as_vector(b, "b")
    A = as_group(group)
    _check_same_dim(b, A)
    limit = 1.0 / tol
    with np.errstate(all="ignore"):
        condition = float(np.linalg.cond(A @ A.T))
    if not np.isfinite(condition) or condition > limit:
        raise SingularGram(condition, limit)
    Ax = A.astype(np.longdouble)
    G = Ax @ Ax.T
    rhs = Ax @ b.astype(np.longdouble)
    # G is symmetric, so lam @ G = rhs is the same system as G @ lam = rhs.
    lam = _lu_solve_extended(G, rhs)
    return lam, rhs


def project_via_gram(b, group, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Projection ``b A^T (A A^T)^{-1} A`` through the normal equations."""
    lam, _ = gram_solve(b, group, tol)
    return (lam @ as_group(group).astype(np.longdouble)).astype(np.float64)
