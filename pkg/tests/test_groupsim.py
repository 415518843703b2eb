import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from projsim import groupsim, linalg
from projsim.errors import DimensionMismatch, SingularGram, ZeroVector
from projsim.groupsim import (
    build_projector,
    cos_group_to_group,
    cos_to_group,
    cos_to_group_gram,
    pairwise_mean_cosine,
    sim_symmetric,
)

from conftest import group_and_query, groups, naive_group_cosine, random_rotation, unit_floats


def nonzero_rows(A):
    return A[np.any(A != 0, axis=1)]


class TestCosToGroup:
    def test_closed_form_anchor(self):
        P = build_projector([[1, 0, 0], [0, 1, 0]])
        assert cos_to_group([1, 1, 1], P) == pytest.approx(math.sqrt(2 / 3), abs=1e-12)

    def test_member_scores_one(self):
        P = build_projector([[1, 2, 0], [0, 1, 1]])
        assert cos_to_group([1, 3, 1], P) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_scores_zero(self):
        assert cos_to_group([0, 0, 5], build_projector([[1, 0, 0], [0, 1, 0]])) == 0.0

    def test_zero_query_rejected(self):
        with pytest.raises(ZeroVector):
            cos_to_group([0, 0], build_projector([[1, 0]]))
        with pytest.raises(ZeroVector):
            cos_to_group_gram([0, 0], [[1, 0]])

    def test_rank_zero_projector_scores_zero(self):
        P = build_projector(np.zeros((2, 3)))
        assert P.rank == 0
        assert cos_to_group([1, 2, 3], P) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cos_to_group([1, 2, 3], build_projector([[1, 0]]))

    def test_gram_route_singular(self):
        with pytest.raises(SingularGram):
            cos_to_group_gram([1, 0], [[1, 0], [3, 0]])

    @settings(max_examples=200, deadline=None)
    @given(group_and_query())
    def test_range(self, case):
        A, b = case
        assume(np.any(b))
        assert 0.0 <= cos_to_group(b, build_projector(A)) <= 1.0

    @settings(max_examples=200, deadline=None)
    @given(group_and_query(), st.floats(1e-3, 1e3))
    def test_scale_invariance(self, case, c):
        A, b = case
        assume(np.any(b))
        P = build_projector(A)
        assert cos_to_group(c * b, P) == pytest.approx(cos_to_group(b, P), abs=1e-10)

    def test_rotation_invariance(self, rng):
        for _ in range(200):
            d = int(rng.integers(2, 12))
            A = rng.uniform(-1, 1, size=(int(rng.integers(1, d + 2)), d))
            b = rng.uniform(-1, 1, size=d)
            R = random_rotation(rng, d)
            before = cos_to_group(b, build_projector(A))
            after = cos_to_group(R @ b, build_projector(A @ R.T))
            assert after == pytest.approx(before, abs=1e-8)

    def test_matches_naive_gram_inverse(self, rng):
        for _ in range(300):
            d = int(rng.integers(1, 11))
            n = int(rng.integers(1, min(d, 6) + 1))
            A = rng.uniform(-1, 1, size=(n, d))
            b = rng.uniform(-1, 1, size=d)
            if np.linalg.cond(A @ A.T) > 1e8:
                continue
            expected = naive_group_cosine(b, A)
            assert cos_to_group(b, build_projector(A)) == pytest.approx(expected, abs=1e-8)
            assert cos_to_group_gram(b, A) == pytest.approx(expected, abs=1e-8)


class TestBasisInvariance:
    def test_redundant_rows_do_not_matter(self):
        redundant = build_projector([[1, 0], [2, 0], [3, 0]])
        single = build_projector([[1, 0]])
        assert redundant.rank == 1
        for b in ([1, 1], [0.3, -2], [5, 0], [0, 1]):
            assert cos_to_group(b, redundant) == cos_to_group(b, single)

    @settings(max_examples=200, deadline=None)
    @given(group_and_query(max_dim=8, max_rows=5), hnp.arrays(np.float64, 5, elements=unit_floats))
    def test_appending_combination(self, case, coef):
        A, b = case
        assume(np.any(b))
        extended = np.vstack([A, coef[: A.shape[0]] @ A])
        before = cos_to_group(b, build_projector(A))
        after = cos_to_group(b, build_projector(extended))
        assert after == pytest.approx(before, abs=1e-8)

    def test_independent_row_changes_score(self):
        A = np.array([[1.0, 0.0, 0.0]])
        b = np.array([1.0, 1.0, 0.0])
        before = cos_to_group(b, build_projector(A))
        after = cos_to_group(b, build_projector(np.vstack([A, [0.0, 1.0, 0.0]])))
        assert after - before > 0.1

    def test_sim_unchanged_by_combination(self, rng):
        for _ in range(100):
            A = rng.uniform(-1, 1, size=(3, 6))
            B = rng.uniform(-1, 1, size=(4, 6))
            B2 = np.vstack([B, rng.uniform(-1, 1, 4) @ B])
            # appended row enters the B->A mean, so compare the A->B direction
            assert sim_symmetric(A, B2).a_to_b == pytest.approx(sim_symmetric(A, B).a_to_b, abs=1e-8)


class TestGroupToGroup:
    def test_half(self):
        assert cos_group_to_group([[1, 0], [0, 1]], build_projector([[1, 0]])) == 0.5

    def test_same_group(self, rng):
        A = rng.uniform(-1, 1, size=(4, 7))
        assert cos_group_to_group(A, build_projector(A)) == pytest.approx(1.0, abs=1e-12)

    def test_full_span(self, rng):
        X = rng.uniform(-1, 1, size=(5, 4))
        P = build_projector(rng.uniform(-1, 1, size=(6, 4)))
        assert P.rank == 4
        assert cos_group_to_group(X, P) == pytest.approx(1.0, abs=1e-10)

    def test_zero_row_rejected(self):
        with pytest.raises(ZeroVector):
            cos_group_to_group([[1, 0], [0, 0]], build_projector([[1, 0]]))

    def test_noncommutative(self):
        A = [[1, 0]]
        B = [[1, 0], [0, 1]]
        a_to_b = cos_group_to_group(A, build_projector(B))
        b_to_a = cos_group_to_group(B, build_projector(A))
        assert a_to_b == 1.0
        assert b_to_a == 0.5
        assert a_to_b != b_to_a


class TestSimSymmetric:
    def test_examples(self):
        assert sim_symmetric([[1, 0]], [[0, 1]]).value == 0.0
        assert sim_symmetric([[1, 0]], [[1, 0], [0, 1]]).value == pytest.approx(0.75, abs=1e-12)

    def test_self_similarity(self, rng):
        for _ in range(50):
            A = rng.uniform(-1, 1, size=(int(rng.integers(1, 8)), int(rng.integers(1, 10))))
            assert sim_symmetric(A, A).value == pytest.approx(1.0, abs=1e-12)

    def test_components(self):
        r = sim_symmetric([[1, 0]], [[1, 0], [0, 1]])
        assert r.b_to_a == 0.5
        assert r.a_to_b == 1.0
        assert r.rank_a == 1 and r.rank_b == 2
        assert not r.degenerate

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_symmetry_is_bit_exact(self, data):
        d = data.draw(st.integers(1, 8))
        A = nonzero_rows(data.draw(groups(dim=d)))
        B = nonzero_rows(data.draw(groups(dim=d)))
        assume(len(A) and len(B))
        ab = sim_symmetric(A, B)
        ba = sim_symmetric(B, A)
        assert ab.value == ba.value
        assert 0.0 <= ab.value <= 1.0
        assert ab.evaluations == len(A) + len(B)

    def test_evaluation_count(self, rng):
        A = rng.uniform(-1, 1, size=(30, 40))
        B = rng.uniform(-1, 1, size=(50, 40))
        evals = groupsim.COS_EVALUATIONS.value
        orth = linalg.ORTHONORMALIZE_CALLS.value
        r = sim_symmetric(A, B)
        assert r.evaluations == 80
        assert groupsim.COS_EVALUATIONS.value - evals == 80
        assert linalg.ORTHONORMALIZE_CALLS.value - orth == 2

    def test_sum_variant(self):
        r = sim_symmetric([[1, 0]], [[1, 0], [0, 1]], variant="sum")
        # raw sums: B->A is 1 + 0, A->B is 1
        assert r.value == 1.0
        big = sim_symmetric(np.eye(3), np.eye(3), variant="sum")
        assert big.value == 3.0

    def test_gram_method_agrees(self, rng):
        for _ in range(50):
            A = rng.uniform(-1, 1, size=(3, 8))
            B = rng.uniform(-1, 1, size=(4, 8))
            basis = sim_symmetric(A, B)
            gram = sim_symmetric(A, B, method="gram")
            assert gram.value == pytest.approx(basis.value, abs=1e-8)
            assert gram.evaluations == 7

    def test_gram_method_refuses_dependent_rows(self):
        with pytest.raises(SingularGram):
            sim_symmetric([[1, 0], [2, 0]], [[1, 1]], method="gram")

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            sim_symmetric([[1, 0]], [[1, 0, 0]])
        with pytest.raises(ZeroVector):
            sim_symmetric([[1, 0], [0, 0]], [[1, 0]])
        with pytest.raises(ValueError):
            sim_symmetric([[1, 0]], [[1, 0]], variant="median")


class TestPairwiseMean:
    def test_examples(self):
        assert pairwise_mean_cosine([[1, 0]], [[1, 0]]) == 1.0
        assert pairwise_mean_cosine([[1, 0], [0, 1]], [[1, 0], [0, 1]]) == 0.5
        assert pairwise_mean_cosine([[1, 0]], [[-1, 0]]) == -1.0

    def test_contrast_with_projection(self):
        I = np.eye(2)
        assert sim_symmetric(I, I).value == 1.0
        assert pairwise_mean_cosine(I, I) == 0.5


class TestProjector:
    def test_rank(self):
        assert build_projector([[1, 0, 0], [0, 1, 0]]).rank == 2

    def test_single_factorization_for_many_queries(self, rng):
        orth = linalg.ORTHONORMALIZE_CALLS.value
        P = build_projector(rng.uniform(-1, 1, size=(5, 20)))
        for b in rng.uniform(-1, 1, size=(1000, 20)):
            cos_to_group(b, P)
        assert linalg.ORTHONORMALIZE_CALLS.value - orth == 1

    def test_fingerprint(self):
        A = np.array([[1.0, -0.0], [0.5, 2.0]])
        assert groupsim.fingerprint(A) == groupsim.fingerprint(A + 1e-15)
        assert groupsim.fingerprint(A) == groupsim.fingerprint([[1.0, 0.0], [0.5, 2.0]])
        assert groupsim.fingerprint(A) != groupsim.fingerprint(A[::-1])
        assert build_projector(A).source_fingerprint == groupsim.fingerprint(A)

    def test_shared_projector_across_threads(self, rng):
        from concurrent.futures import ThreadPoolExecutor

        P = build_projector(rng.uniform(-1, 1, size=(4, 10)))
        queries = rng.uniform(-1, 1, size=(200, 10))
        sequential = [cos_to_group(q, P) for q in queries]
        with ThreadPoolExecutor(8) as pool:
            assert list(pool.map(lambda q: cos_to_group(q, P), queries)) == sequential
