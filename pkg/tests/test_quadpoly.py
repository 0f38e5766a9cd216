from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vmlab.f2core import F2Vector
from vmlab.quadpoly import (
    AffineForm,
    CapExceeded,
    QuadPoly,
    all_polynomials,
    evaluate,
    evaluate_many,
    lemma21_bound,
    multilinearize_product,
    sign_expectation_exact,
    sign_expectation_mc,
)


@st.composite
def polys(draw, max_m=9):
    m = draw(st.integers(0, max_m))
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m) if draw(st.booleans())]
    lin = [i for i in range(m) if draw(st.booleans())]
    return QuadPoly.from_terms(m, pairs, lin, draw(st.integers(0, 1)))


def naive_eval(f: QuadPoly, x) -> int:
    acc = f.constant
    acc += sum(x[i] for i in f.linear.support())
    acc += sum(x[i] * x[j] for i, j in f.pairs())
    return acc % 2


def brute_expectation(f: QuadPoly, p: float) -> float:
    total = 0.0
    for x in product((0, 1), repeat=f.m):
        w = sum(x)
        total += (-1) ** naive_eval(f, x) * p**w * (1 - p) ** (f.m - w)
    return total


def test_zero_poly():
    f = QuadPoly.zero(3)
    assert all(evaluate(f, x) == 0 for x in product((0, 1), repeat=3))
    assert sign_expectation_exact(f, 0.3) == 1.0
    est = sign_expectation_mc(f, 0.3, 100, seed=1)
    assert est.mean == 1.0 and est.stderr == 0.0


def test_single_monomial_values():
    f = QuadPoly.from_terms(2, [(0, 1)])
    assert evaluate(f, [1, 1]) == 1
    assert evaluate(f, [1, 0]) == 0


@pytest.mark.parametrize("p", [0.0, 0.1, 0.37, 0.5, 0.9, 1.0])
def test_single_monomial_expectation(p):
    f = QuadPoly.from_terms(2, [(0, 1)])
    assert sign_expectation_exact(f, p) == pytest.approx(1 - 2 * p * p, abs=1e-15)


def test_three_disjoint_pairs_at_half():
    f = QuadPoly.from_terms(6, [(0, 1), (2, 3), (4, 5)])
    assert sign_expectation_exact(f, 0.5) == pytest.approx(0.125, abs=1e-15)


def test_mc_agrees_with_exact():
    f = QuadPoly.from_terms(2, [(0, 1)])
    est = sign_expectation_mc(f, 0.5, 10**6, seed=11)
    assert abs(est.mean - 0.5) <= 3e-3
    assert sign_expectation_mc(f, 0.5, 5000, seed=3) == sign_expectation_mc(f, 0.5, 5000, seed=3)


def test_bound_examples():
    assert lemma21_bound(QuadPoly.zero(4), 0.3) == 1.0
    six = QuadPoly.from_terms(6, [(0, 1), (2, 3), (4, 5)])
    assert six.rank() == 6
    assert lemma21_bound(six, 0.5) == 0.5
    four = QuadPoly.from_terms(4, [(0, 1), (2, 3)])
    assert lemma21_bound(four, 0.2) == 1.0


def test_multilinearize_examples():
    x1 = AffineForm.from_terms(3, [0])
    x2 = AffineForm.from_terms(3, [1])
    sq = multilinearize_product(x1, x1)
    assert sq.pairs() == [] and sq.linear.support() == [0]
    prod = multilinearize_product(x1, x2)
    assert prod.pairs() == [(0, 1)] and prod.rank() == 2


@given(polys())
def test_evaluate_matches_naive(f):
    for x in product((0, 1), repeat=f.m):
        assert evaluate(f, x) == naive_eval(f, x)


@given(polys(max_m=8))
def test_evaluate_many_matches(f):
    xs = np.array(list(product((0, 1), repeat=f.m)), dtype=np.int64).reshape(1 << f.m, f.m)
    got = evaluate_many(f, xs)
    assert list(got) == [naive_eval(f, x) for x in xs]


@given(polys(max_m=9), st.floats(0, 1))
def test_exact_matches_bruteforce(f, p):
    assert sign_expectation_exact(f, p) == pytest.approx(brute_expectation(f, p), abs=1e-12)


@given(polys(max_m=8))
def test_exact_accepts_array_p(f):
    grid = np.linspace(0, 1, 7)
    got = sign_expectation_exact(f, grid)
    np.testing.assert_allclose(got, [sign_expectation_exact(f, p) for p in grid], atol=0)


@given(st.integers(1, 10), st.data())
def test_multilinearized_product_agrees_pointwise(m, data):
    a = AffineForm(m, F2Vector(m, data.draw(st.integers(0, (1 << m) - 1))), data.draw(st.integers(0, 1)))
    b = AffineForm(m, F2Vector(m, data.draw(st.integers(0, (1 << m) - 1))), data.draw(st.integers(0, 1)))
    g = multilinearize_product(a, b)
    for bits in range(1 << m):
        assert evaluate(g, bits) == a(bits) * b(bits)


@given(polys(max_m=10), st.floats(0, 1))
def test_bound_holds(f, p):
    assert abs(sign_expectation_exact(f, p)) <= lemma21_bound(f, p) + 1e-12


def test_all_polynomials_count():
    assert sum(1 for _ in all_polynomials(3)) == 2**3 * 2**3 * 2
    assert sum(1 for _ in all_polynomials(4)) == 2048


def test_cap_enforced():
    with pytest.raises(CapExceeded):
        sign_expectation_exact(QuadPoly.zero(25), 0.5)


def test_invalid_construction():
    with pytest.raises(ValueError):
        QuadPoly.from_terms(2, [(1, 1)])


def test_large_m_exact_is_fast_and_factorises():
    # 12 disjoint monomials: the expectation factorises into (1-2p^2)^12
    f = QuadPoly.from_terms(24, [(2 * i, 2 * i + 1) for i in range(12)])
    assert sign_expectation_exact(f, 0.3) == pytest.approx((1 - 2 * 0.09) ** 12, rel=1e-12)
