from math import comb

import pytest

from sl2tango import exactlin as el
from sl2tango.sl2rep import (action_on_symn, construct_tango_subspace, decompose_irreducibles,
                             induced_wedge2_action, weight_spaces, wedge2_symn)
from sl2tango.wedge import pair_index


def monomial_lowering(n, k):
    """Y = y d/dx on x^(n-k) y^k, returned as {exponent of y: coefficient}."""
    a = n - k
    return {k + 1: a} if a else {}


def test_action_n1_matches_displayed_matrices():
    A = action_on_symn(1)
    assert A.Y == ((0, 0), (1, 0))
    assert A.H == ((1, 0), (0, -1))


def test_action_n3():
    A = action_on_symn(3)
    assert A.weights() == [3, 1, -1, -3]
    for k in range(4):
        col = [A.Y[r][k] for r in range(4)]
        expect = [0] * 4
        for j, c in monomial_lowering(3, k).items():
            expect[j] = c
        assert col == expect
    assert [A.Y[r][0] for r in range(4)] == [0, 3, 0, 0]


def test_n0_rejected():
    with pytest.raises(ValueError):
        action_on_symn(0)


@pytest.mark.parametrize("n", range(1, 9))
def test_brackets(n):
    assert action_on_symn(n).bracket_ok()
    assert wedge2_symn(n).bracket_ok()


def test_wedge_lowering_examples():
    Y = wedge2_symn(3).Y
    idx = pair_index(4)

    def apply(pair):
        v = [0] * 6
        v[idx[pair]] = 1
        return el.matvec(Y, v)

    expect = [0] * 6
    expect[idx[(0, 2)]] = 2
    assert apply((0, 1)) == expect
    assert apply((2, 3)) == [0] * 6


@pytest.mark.parametrize("n", range(2, 9))
def test_wedge_lowering_matches_displayed_rule(n):
    Y = wedge2_symn(n).Y
    idx = pair_index(n + 1)
    for (i, j), col in idx.items():
        expect = [0] * len(idx)
        for (a, b, c) in ((i + 1, j, n - i), (i, j + 1, n - j)):
            if b > n or a > n or a == b:
                continue
            if a < b:
                expect[idx[(a, b)]] += c
            else:
                expect[idx[(b, a)]] -= c
        assert [Y[r][col] for r in range(len(idx))] == expect


@pytest.mark.parametrize("n", range(2, 9))
def test_bottom_weight(n):
    A = wedge2_symn(n)
    k = pair_index(n + 1)[(n - 1, n)]
    assert A.H[k][k] == -2 * (n - 1)


def test_weight_spaces_examples():
    ws = weight_spaces(wedge2_symn(3))
    idx = pair_index(4)
    assert ws[4] == [idx[(0, 1)]]
    assert ws[0] == [idx[(0, 3)], idx[(1, 2)]]
    for i in range(4):
        for j in range(i + 1, 4):
            assert idx[(i, j)] in ws[(3 - 2 * i) + (3 - 2 * j)]
    assert weight_spaces(action_on_symn(1)) == {1: [0], -1: [1]}
    assert sum(len(v) for v in ws.values()) == comb(4, 2)


@pytest.mark.parametrize("n, weights", [(2, [2]), (3, [4, 0]), (5, [8, 4, 0])])
def test_decompose_examples(n, weights):
    comps = decompose_irreducibles(wedge2_symn(n))
    assert [c.highest_weight for c in comps] == weights
    assert sum(c.dim for c in comps) == comb(n + 1, 2)


@pytest.mark.parametrize("n", range(2, 11))
def test_highest_weight_vectors(n):
    A = wedge2_symn(n)
    for c in decompose_irreducibles(A):
        v = list(c.highest_weight_vector)
        assert not any(el.matvec(A.X, v))
        assert el.matvec(A.H, v) == [c.highest_weight * x for x in v]
        assert len(c.basis) == c.dim
        assert el.rank(c.basis) == c.dim


def test_decompose_rejects_bad_action():
    A = action_on_symn(2)
    bad = type(A)(A.dim, A.Y, A.X, A.H)
    with pytest.raises(ValueError):
        decompose_irreducibles(bad)


def test_tango_n3():
    W = construct_tango_subspace(3)
    idx = pair_index(4)
    row = [0] * 6
    row[idx[(0, 3)]] = 1
    row[idx[(1, 2)]] = -3
    assert W.rows == (tuple(row),)


def test_tango_n3_oracle_two_variable_solve():
    # Y(a v03 + b v12) = (3a + b) v13, so the invariant line is (1, -3)
    sols = [(a, b) for a in range(-5, 6) for b in range(-5, 6) if 3 * a + b == 0 and (a, b) != (0, 0)]
    assert (1, -3) in sols


@pytest.mark.parametrize("n, m", [(4, 3), (5, 6), (6, 10), (7, 15)])
def test_tango_dimension(n, m):
    assert construct_tango_subspace(n).m == m


@pytest.mark.parametrize("n", range(3, 9))
def test_tango_invariant_and_transverse_to_top(n):
    W = construct_tango_subspace(n)
    A = wedge2_symn(n)
    for op in (A.X, A.Y, A.H):
        assert el.span_contains(W.rows, [el.matvec(op, r) for r in W.rows])
    top = decompose_irreducibles(A)[0]
    assert el.rank(list(W.rows) + list(top.basis)) == W.m + 2 * n - 1


def test_tango_small_n_rejected():
    with pytest.raises(ValueError):
        construct_tango_subspace(2)


def test_induced_action_consistency():
    A = action_on_symn(4)
    assert induced_wedge2_action(A) == wedge2_symn(4)
