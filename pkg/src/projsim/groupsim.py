"""Similarity between a vector and a group, and between two groups of vectors.

The cosine of a vector ``b`` against a group ``A`` is the cosine of the angle
between ``b`` and its orthogonal projection ``p`` onto ``span(A)``, i.e.
``|p| / |b|``. Group-to-group cosine averages that over the rows of one group;
``sim_symmetric`` averages both directions.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, ZeroVector
from .linalg import DEFAULT_TOL, OrthonormalBasis

#: Number of vector-versus-group cosine evaluations made in this process.
COS_EVALUATIONS = linalg.CallCounter()

MEAN = "mean"
SUM = "sum"
BASIS = "basis"
GRAM = "gram"


def fingerprint(group) -> str:
    """Content hash of a group, stable under sub-1e-12 perturbations and signed zeros."""
    A = linalg.as_group(group)
    rounded = np.round(A, 12) + 0.0
    h = hashlib.sha256()
    h.update(np.asarray(A.shape, dtype=np.int64).tobytes())
    h.update(np.ascontiguousarray(rounded).tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class Projector:
    """Reusable projection onto the span of a group.

    Holds an orthonormal basis so that each query costs ``O(rank * dim)`` and no
    Gram system is solved per query.
    """

    basis: OrthonormalBasis
    source_fingerprint: str

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class SimilarityValue:
    value: float
    evaluations: int
    b_to_a: float
    a_to_b: float
    rank_a: int | None = None
    rank_b: int | None = None

    @property
    def degenerate(self) -> bool:
        """True when either group spans only the zero vector."""
        return self.rank_a == 0 or self.rank_b == 0


def build_projector(group, tol: float = DEFAULT_TOL) -> Projector:
    A = linalg.as_group(group)
    return Projector(basis=linalg.orthonormalize(A, tol), source_fingerprint=fingerprint(A))


def _query_norm(b: np.ndarray) -> float:
    nb = float(np.sqrt(np.dot(b, b)))
    if nb == 0.0:
        raise ZeroVector("query vector has zero length")
    return nb


def cos_to_group(b, projector: Projector) -> float:
    """``|p| / |b|`` for the projection ``p`` of ``b`` onto the projector's span.

    Returns 0 for a rank-0 projector.
    """
    b = linalg.as_vector(b, "b")
    if b.shape[0] != projector.dim:
        raise DimensionMismatch(f"dimension {b.shape[0]} != projector dimension {projector.dim}")
    nb = _query_norm(b)
    COS_EVALUATIONS.increment()
    p = linalg.project_onto_basis(b, projector.basis)
    c = float(np.sqrt(np.dot(p, p))) / nb
    return min(1.0, max(0.0, c))


def cos_to_group_gram(b, group, tol: float = DEFAULT_TOL) -> float:
    """The closed form ``sqrt(b A^T (A A^T)^{-1} A b^T) / |b|``.

    Raises SingularGram when the rows of ``group`` are numerically dependent.
    """
    b = linalg.as_vector(b, "b")
    A = linalg.as_group(group)
    if b.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"dimension {b.shape[0]} != group dimension {A.shape[1]}")
    nb = _query_norm(b)
    COS_EVALUATIONS.increment()
    lam, rhs = linalg.gram_solve(b, A, tol)
    sq = float(np.dot(lam, rhs))
    c = np.sqrt(max(sq, 0.0)) / nb
    return min(1.0, max(0.0, float(c)))


def _directional_sum(X: np.ndarray, other: np.ndarray | Projector, method: str, tol: float) -> tuple[float, int]:
    total = 0.0
    count = 0
    for x in X:
        if method == BASIS:
            total += cos_to_group(x, other)
        else:
            total += cos_to_group_gram(x, other, tol)
        count += 1
    return total, count


def _check_rows(X: np.ndarray, name: str) -> None:
    zero = np.flatnonzero(~np.any(X != 0.0, axis=1))
    if zero.size:
        raise ZeroVector(f"{name} has zero rows at positions {zero.tolist()}")


def cos_group_to_group(X, projector: Projector) -> float:
    """Mean over the rows of ``X`` of their cosine against the projector's group.

    Not symmetric: ``cos_group_to_group(A, proj(B))`` generally differs from
    ``cos_group_to_group(B, proj(A))``.
    """
    X = linalg.as_group(X, "X")
    _check_rows(X, "X")
    total, count = _directional_sum(X, projector, BASIS, DEFAULT_TOL)
    return total / count


def sim_symmetric(
    A,
    B,
    tol: float = DEFAULT_TOL,
    variant: str = MEAN,
    method: str = BASIS,
) -> SimilarityValue:
    """Symmetrized group similarity.

    With ``variant="mean"`` (default) each direction is the mean row cosine and
    the result is the average of the two directions, so it lies in [0, 1].
    ``variant="sum"`` halves the sum of the raw per-row cosine sums instead and
    can exceed 1 when the groups have more than one row.

    ``method="gram"`` evaluates each row cosine through the normal equations
    rather than an orthonormal basis.
    """
    if variant not in (MEAN, SUM):
        raise ValueError(f"unknown variant {variant!r}")
    if method not in (BASIS, GRAM):
        raise ValueError(f"unknown method {method!r}")
    A = linalg.as_group(A, "A")
    B = linalg.as_group(B, "B")
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"group dimensions differ: {A.shape[1]} != {B.shape[1]}")
    _check_rows(A, "A")
    _check_rows(B, "B")

    if method == BASIS:
        span_a, span_b = build_projector(A, tol), build_projector(B, tol)
        rank_a, rank_b = span_a.rank, span_b.rank
    else:
        span_a, span_b = A, B
        rank_a = rank_b = None

    # B -> A first, then A -> B, each in row order.
    sum_b_to_a, count_b = _directional_sum(B, span_a, method, tol)
    sum_a_to_b, count_a = _directional_sum(A, span_b, method, tol)
    n, m = A.shape[0], B.shape[0]
    if variant == MEAN:
        b_to_a, a_to_b = sum_b_to_a / m, sum_a_to_b / n
    else:
        b_to_a, a_to_b = sum_b_to_a, sum_a_to_b
    return SimilarityValue(
        value=(b_to_a + a_to_b) / 2.0,
        evaluations=count_a + count_b,
        b_to_a=b_to_a,
        a_to_b=a_to_b,
        rank_a=rank_a,
        rank_b=rank_b,
    )


def pairwise_mean_cosine(A, B) -> float:
    """Mean of the ``n * m`` ordinary cosines between rows of A and rows of B.

    Range is [-1, 1], unlike the projection measures.
    """
    A = linalg.as_group(A, "A")
    B = linalg.as_group(B, "B")
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"group dimensions differ: {A.shape[1]} != {B.shape[1]}")
    _check_rows(A, "A")
    _check_rows(B, "B")
    total = 0.0
    for a in A:
        for b in B:
            total += linalg.cosine(a, b)
    return total / (A.shape[0] * B.shape[0])
