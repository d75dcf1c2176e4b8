from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2tango import exactlin as el


def int_matrices(max_rows=6, max_cols=6, lo=-5, hi=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def square(k_max=5):
    return st.integers(1, k_max).flatmap(
        lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k))


@pytest.mark.parametrize("M, r", [
    (el.identity(3), 3),
    ([[0, 0], [0, 0]], 0),
    ([[1, 2], [2, 4]], 1),
])
def test_rank_examples(M, r):
    assert el.rank(M) == r


@pytest.mark.parametrize("M, d", [
    (el.identity(4), 1),
    ([[1, 2], [3, 4]], -2),
    ([[1, 2, 3], [4, 5, 6], [1, 2, 3]], 0),
    ([[Fraction(1, 2), 0], [0, Fraction(2, 3)]], Fraction(1, 3)),
])
def test_det_examples(M, d):
    assert el.det(M) == d


def test_det_non_square():
    with pytest.raises(el.DimensionError):
        el.det([[1, 2, 3]])


def test_kernel_examples():
    assert el.kernel_basis(el.identity(3)) == []
    assert el.kernel_basis([[1, -1]]) == [[1, 1]]
    assert el.kernel_basis([[0, 0, 0], [0, 0, 0]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_kernel_normalisation():
    # free column 2; rational solution (-1/2, -1/3, 1) clears to (3, 2, -6) then sign flips
    assert el.kernel_basis([[2, 0, 1], [0, 3, 1]]) == [[3, 2, -6]]


def test_member_examples():
    e0, e1 = [1, 0], [0, 1]
    assert el.member([e0], e0)
    assert not el.member([e0], e1)
    assert el.member([[1, 1], e1], e0)
    with pytest.raises(el.DimensionError):
        el.member([[1, 0, 0]], [1, 0])


@given(int_matrices())
def test_rank_transpose(M):
    assert el.rank(M) == el.rank(el.transpose(M))


@given(int_matrices())
def test_bareiss_rank_matches_rref(M):
    _, pivots = el.rref(M)
    assert el.rank_exact(M) == len(pivots)


@given(int_matrices(4, 8))
def test_modular_rank_agrees(M):
    assert el.rank_modular(M) == el.rank_exact(M)


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k),
    st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k))))
def test_det_multiplicative(AB):
    A, B = AB
    assert el.det(el.matmul(A, B)) == el.det(A) * el.det(B)


@given(int_matrices())
def test_kernel_is_kernel(M):
    K = el.kernel_basis(M)
    assert len(K) == len(M[0]) - el.rank(M)
    for v in K:
        assert all(x == 0 for x in el.matvec(M, v))
        assert next(x for x in v if x) > 0


def _leibniz(M):
    from itertools import permutations

    k = len(M)
    total = 0
    for perm in permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        prod = 1
        for i in range(k):
            prod *= M[i][perm[i]]
        total += (-1) ** inv * prod
    return total


@settings(max_examples=50)
@given(st.lists(square(4), min_size=1, max_size=8).filter(lambda ms: len({len(m) for m in ms}) == 1))
def test_batch_det_against_leibniz(ms):
    A = np.array(ms, dtype=np.int64)
    got = el.batch_det(A)
    assert [int(x) for x in got] == [_leibniz(m) for m in ms]
    assert [int(x) for x in el.batch_det(A.astype(object), safe_int64=False)] == [_leibniz(m) for m in ms]


def test_batch_det_big_entries_use_python_ints():
    big = 10**12
    M = [[big, 1, 0], [1, big, 1], [0, 1, big]]
    assert int(el.batch_det(np.array([M], dtype=object))[0]) == el.det(M)


def test_wide_matrix_uses_modular_route():
    rng = np.random.default_rng(0)
    M = rng.integers(-3, 4, size=(5, 1200)).tolist()
    M.append([a + b for a, b in zip(M[0], M[1])])
    assert el.rank(M) == 5
    assert el.rank(M, exact=True) == 5
