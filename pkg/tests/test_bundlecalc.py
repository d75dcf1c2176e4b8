import random
from functools import lru_cache
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sl2tango import bundlecalc as bc


def grid():
    for n in range(3, 9):
        for a in range(3):
            for g in range(n * a + 1, 2 * (n - 1) * a + 4):
                yield n, a, g


# --- independent Hirzebruch-Riemann-Roch oracle ------------------------------

_h = sp.Symbol("h")


def hrr_chi(n, rank, chern, t):
    """chi(E(t)) on P^n from rank and Chern classes, via Newton's identities and the Todd class."""
    e = [1] + list(chern) + [0] * (n + 1)
    p = [0] * (n + 1)
    for k in range(1, n + 1):
        s = (-1) ** (k - 1) * k * e[k]
        for i in range(1, k):
            s += (-1) ** (k - 1 + i) * e[k - i] * p[i]
        p[k] = s
    ch = rank + sum(sp.Rational(p[k], sp.factorial(k)) * _h**k for k in range(1, n + 1))
    twist = sum(sp.Rational(t**k, sp.factorial(k)) * _h**k for k in range(n + 1))
    expr = sp.expand(ch * twist * _todd(n))
    return sp.Poly(expr, _h).coeff_monomial(_h**n)


@lru_cache(maxsize=None)
def _todd(n):
    return sp.series((_h / (1 - sp.exp(-_h))) ** (n + 1), _h, 0, n + 1).removeO()


def test_hrr_oracle_on_lines():
    for n in (2, 3, 4):
        for t in (-6, -1, 0, 3):
            assert hrr_chi(n, 1, [0] * n, t) == bc.line_cohomology(n, t).chi


@pytest.mark.parametrize("n, a, g", [(4, 1, 5), (4, 0, 1), (3, 1, 4), (5, 1, 7)])
def test_chi_of_tango_matches_hrr(n, a, g):
    c = bc.chern_weighted_tango(n, a, g)
    F = bc.weighted_tango(n, a, g)
    for t in range(-3, 4):
        assert bc.chi(F.bundle(t)) == hrr_chi(n, n - 1, c, t)


# --- Chern classes -----------------------------------------------------------

@pytest.mark.parametrize("n, a, g, c", [
    (4, 0, 1, (0, 2, 2)),
    (3, 0, 1, (0, 1)),
    (4, 1, 5, (0, 14, 90)),
])
def test_chern_examples(n, a, g, c):
    assert bc.chern_weighted_tango(n, a, g) == c


def test_chern_twisted_n4():
    assert bc.chern_weighted_tango_twisted(4, 0, 1).coeffs == (1, 3, 5, 5, 0)


def test_sym_power_examples():
    U = bc.SplitBundle(4, (1, -1))
    assert bc.sym_power(U, 4).twists == (4, 2, 0, -2, -4)
    assert bc.v_bundle(4, 1).twists == (6, 4, 2, 0, -2, -4, -6)
    assert bc.v_bundle(4, 0) == bc.trivial(4, 7)


def test_wedge_power_examples():
    V = bc.v_bundle(4, 1)
    W2 = bc.wedge_power(V, 2)
    assert W2.rank == 21 and max(W2.twists) == 10
    with pytest.raises(ValueError):
        bc.wedge_power(V, 8)


@pytest.mark.parametrize("n, a, g", list(grid()))
def test_grid_chern_consistency(n, a, g):
    cF = bc.chern_weighted_tango_twisted(n, a, g)
    assert all(cF[q] == 0 for q in range(n, n + 1))
    assert bc.chern_weighted_tango(n, a, g)[0] == 0


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(-5, 5), max_size=5), st.lists(st.integers(-5, 5), max_size=5))))
def test_whitney_multiplicative(args):
    n, a, b = args
    A, B = bc.SplitBundle(n, a), bc.SplitBundle(n, b)
    assert bc.chern_total(A + B) == bc.chern_total(A) * bc.chern_total(B)
    assert bc.chern(bc.Coker(A, A + B)) == bc.chern_total(B)


@given(st.integers(2, 6), st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.integers(-4, 4))
def test_chern_twist_matches_split(n, twists, t):
    B = bc.SplitBundle(n, twists)
    assert bc.chern_twist(bc.chern_total(B), B.rank, t) == bc.chern_total(B.twist(t))


# --- line bundle cohomology --------------------------------------------------

@pytest.mark.parametrize("n, t, dims", [
    (4, 0, [1, 0, 0, 0, 0]),
    (4, -5, [0, 0, 0, 0, 1]),
    (4, -10, [0, 0, 0, 0, 126]),
    (4, -3, [0, 0, 0, 0, 0]),
    (2, 2, [6, 0, 0]),
])
def test_line_cohomology_examples(n, t, dims):
    assert bc.line_cohomology(n, t).dims() == dims


@pytest.mark.parametrize("n", range(2, 9))
def test_serre_duality(n):
    for t in range(-12, 13):
        a, b = bc.line_cohomology(n, t).dims(), bc.line_cohomology(n, -t - n - 1).dims()
        assert a == b[::-1]


@given(st.integers(1, 8), st.integers(-20, 20))
def test_chi_polynomial(n, t):
    x = sp.Symbol("x")
    poly = sp.expand(sp.binomial(x + n, n).expand(func=True))
    assert bc.line_cohomology(n, t).chi == poly.subs(x, t)


def test_binom_extension():
    assert bc.binom(-1, 3) == -1
    assert bc.binom(5, 2) == comb(5, 2)
    assert bc.binom(3, -1) == 0


# --- chase engine ------------------------------------------------------------

def test_euler_sequence():
    for n in (2, 3, 4):
        T = bc.Coker(bc.line(n, -1), bc.trivial(n, n + 1))
        assert bc.cohomology(T).dims() == [n + 1] + [0] * n
        assert bc.cohomology(bc.twist(T, 1)).dims() == [(n + 1) ** 2 - 1] + [0] * n


def test_chase_undetermined_gives_interval():
    # 0 -> O(-3) -> O(0)+O(0) -> C -> 0 on P^2: h^1(O(-3)) = 0, h^2(O(-3)) = 1
    A = bc.line_cohomology(2, -3)
    B = bc.split_cohomology(bc.trivial(2, 2))
    C = bc.chase_sequence(A=A, B=B)
    assert C.dims() == [2, 1, 0]
    # on P^1, 0 -> O(-2) -> B -> O -> 0 allows B = O(-1)^2 or O(-2) + O, so the
    # connecting map H^0(O) -> H^1(O(-2)) is undetermined
    B2 = bc.chase_sequence(A=bc.line_cohomology(1, -2), C=bc.line_cohomology(1, 0))
    assert B2.h == (bc.Interval(0, 1), bc.Interval(0, 1))
    assert B2.chi == 0


def test_chase_inconsistent():
    A = bc.CohProfile.from_dims([5, 0, 0])
    B = bc.CohProfile.from_dims([1, 0, 0])
    with pytest.raises(bc.InconsistentSequence):
        bc.chase_sequence(A=A, B=B)


def test_chase_argument_check():
    with pytest.raises(ValueError):
        bc.chase_sequence(A=bc.CohProfile.zero(2))


def random_split(n, rng):
    return bc.SplitBundle(n, tuple(rng.randint(-2 * n - 2, 3) for _ in range(rng.randint(0, 4))))


def test_chi_additivity_random_sequences():
    rng = random.Random(2026)
    for _ in range(100):
        n = rng.randint(1, 5)
        A, C = random_split(n, rng), random_split(n, rng)
        B = A + C
        truth = bc.split_cohomology(C)
        for got in (bc.chase_sequence(A=bc.split_cohomology(A), B=bc.split_cohomology(B)),):
            assert got.chi == bc.split_cohomology(B).chi - bc.split_cohomology(A).chi
            assert all(iv.lo <= d <= iv.hi for iv, d in zip(got.h, truth.dims()))
        mid = bc.chase_sequence(A=bc.split_cohomology(A), C=truth)
        assert all(iv.lo <= d <= iv.hi for iv, d in zip(mid.h, bc.split_cohomology(B).dims()))
        left = bc.chase_sequence(B=bc.split_cohomology(B), C=truth)
        assert all(iv.lo <= d <= iv.hi for iv, d in zip(left.h, bc.split_cohomology(A).dims()))


# --- stability ---------------------------------------------------------------

@pytest.mark.parametrize("n, a, g", list(grid()))
def test_stability_grid(n, a, g):
    rep = bc.is_stable(n, a, g)
    assert rep.stable == (g > 2 * (n - 1) * a)
    for q, formula, t, h0 in rep.witnesses:
        assert formula == q * ((2 * n - q - 1) * a - g) == t
    if not rep.stable:
        assert rep.h0_F.lo > 0
    else:
        assert rep.h0_F.hi == 0 or rep.h0_F.lo == 0


def test_stability_report_text():
    rep = bc.is_stable(4, 1, 6)
    assert not rep.stable and rep.reason == "gamma = 2(n-1)alpha"
    assert rep.to_text().splitlines()[0].endswith("UNSTABLE (gamma <= 2(n-1)alpha)")
    assert bc.is_stable(4, 1, 7).stable
    assert bc.is_stable(4, 1, 5).reason == "gamma < 2(n-1)alpha"


def test_classical_tango_stable():
    rep = bc.is_stable(4, 0, 1)
    assert rep.stable and rep.h0_F == bc.Interval.exact(0)


@pytest.mark.parametrize("n, a, g", list(grid()))
def test_lemma_vanishing(n, a, g):
    assert bc.lemma_vanishing_profile(n, a, g).h[1] == bc.Interval.exact(0)


@pytest.mark.parametrize("n, a, g", [(1, 0, 1), (3, -1, 2), (3, 1, 3)])
def test_validate_weights(n, a, g):
    with pytest.raises(ValueError):
        bc.validate_weights(n, a, g)


def test_resolution_shapes():
    F = bc.weighted_tango(4, 1, 5)
    terms = F.resolution()
    assert [t.rank for t in terms] == [7, 5, 1]
    assert F.rank == 3
    assert bc.weighted_quotient(4, 1, 5).rank == 4


def test_coker_rank_check():
    with pytest.raises(ValueError):
        bc.Coker(bc.trivial(3, 3), bc.trivial(3, 2))
