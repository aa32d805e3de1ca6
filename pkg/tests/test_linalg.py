import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glattice import linalg
from support import det_fraction, invariant_factors_by_minors


def matrices(max_rows=4, max_cols=4, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def square(max_n=4, bound=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n)
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_matches_minors(A):
    S, U, V = linalg.smith_normal_form(A)
    assert np.array_equal(np.array(U) @ np.array(A) @ np.array(V), np.array(S))
    assert abs(linalg.det(U)) == 1 and abs(linalg.det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0]))) if S[i][i]]
    assert diag == invariant_factors_by_minors(A)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0


@settings(max_examples=100, deadline=None)
@given(square())
def test_det_matches_fraction_elimination(A):
    assert linalg.det(A) == det_fraction(A)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_hnf_spans_same_lattice(A):
    H = linalg.hnf(A)
    assert len(H) == linalg.rank(A)
    # each row of A is an integer combination of H and vice versa
    for row in A:
        assert linalg.solve_integer(linalg.transpose(H, len(A[0])), row) is not None
    for row in H:
        assert linalg.solve_integer(linalg.transpose(A, len(A[0])), row) is not None


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_hnf_transform(A):
    H, T, r = linalg.hnf_with_transform(A)
    assert abs(linalg.det(T)) == 1
    assert np.array_equal((np.array(T) @ np.array(A))[:r], np.array(H[:r]).reshape(r, len(A[0])))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_saturated_and_complete(A):
    n = len(A[0])
    K = linalg.kernel(A, n)
    for v in K:
        assert not np.any(np.array(A) @ np.array(v))
    assert len(K) == n - linalg.rank(A)
    assert linalg.is_saturated(K)


@settings(max_examples=80, deadline=None)
@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_least_multiple_solution(A, x):
    n = len(A[0])
    b = (np.array(A) @ np.array(x[:n])).tolist()
    e, y = linalg.least_multiple_solution(A, b)
    assert e == 1
    assert np.array_equal(np.array(A) @ np.array(y), np.array(b))


def test_least_multiple_needs_a_multiple():
    e, y = linalg.least_multiple_solution([[2, 0], [0, 3]], [1, 1])
    assert e == 6 and y == [3, 2]
    assert linalg.least_multiple_solution([[1, 0]], [0]) == (1, [0, 0])
    assert linalg.least_multiple_solution([[1], [1]], [1, 2]) is None


@settings(max_examples=60, deadline=None)
@given(square())
def test_unimodular_inverse(A):
    A = np.array(A)
    if abs(linalg.det(A.tolist())) != 1:
        return
    B = np.array(linalg.inverse_unimodular(A.tolist()))
    assert np.array_equal(A @ B, np.eye(len(A), dtype=np.int64))


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        linalg.inverse_unimodular([[2, 0], [0, 1]])


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=3, max_cols=5))
def test_unimodular_completion(B):
    # columns of B as a primitive set
    cols = [list(c) for c in zip(*B)]
    basis = linalg.hnf(cols)
    if not basis or not linalg.is_saturated(basis):
        return
    Bm = np.array(basis).T
    W, Wi = linalg.unimodular_completion(Bm.tolist())
    W, Wi = np.array(W), np.array(Wi)
    k = Bm.shape[1]
    assert np.array_equal(W @ Wi, np.eye(len(W), dtype=np.int64))
    assert np.array_equal(W @ Bm, np.vstack([np.eye(k, dtype=np.int64), np.zeros((len(W) - k, k), dtype=np.int64)]))


def test_smith_torsion_and_class_of():
    A = [[2, 0], [0, 0], [0, 6]]
    sf = linalg.SmithForm(A)
    assert sf.torsion() == [2, 6]
    assert sf.free_rank() == 1
    # the middle coordinate lies outside the rational span of the columns
    assert sf.class_of([1, 1, 0]) is None
    c = sf.class_of([1, 0, 3])
    assert c is not None


def test_quotient_structure():
    tors, free = linalg.quotient_structure([[2, 0, 0], [0, 3, 0]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert tors == [6] and free == 1


def test_order_mod():
    assert linalg.order_mod([1, 2], [2, 6]) == 6
    assert linalg.order_mod([0, 2], [2, 6]) == 3
    assert linalg.order_mod([0, 0], [2, 6]) == 1
