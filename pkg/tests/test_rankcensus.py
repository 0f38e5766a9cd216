from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from vmlab.rankcensus import census_bound, census_exhaustive, census_formula


def test_small_census_values():
    assert census_exhaustive(1).counts == {0: 1}
    assert census_exhaustive(3).counts == {0: 1, 2: 7}
    assert census_exhaustive(4).counts == {0: 1, 2: 35, 4: 28}
    assert census_exhaustive(4).total == 64


def test_formula_examples():
    assert census_formula(3, 2) == 7
    assert census_formula(4, 4) == 28
    assert all(census_formula(s, 0) == 1 for s in range(10))
    assert census_formula(5, 3) == 0


@pytest.mark.parametrize("s", range(1, 7))
def test_formula_matches_enumeration(s):
    ex = census_exhaustive(s)
    for a in range(s + 1):
        assert ex[a] == census_formula(s, a)


@pytest.mark.parametrize("s", range(1, 17))
def test_row_sums(s):
    assert sum(census_formula(s, a) for a in range(s + 1)) == 2 ** comb(s, 2)


def test_bound_examples():
    assert census_bound(4, 2) == 64
    assert census_bound(3, 2) == 16
    assert census_bound(5, 0) == Fraction(1, 4)
    # a = 0 is the one place the count exceeds the bound
    assert census_formula(5, 0) > census_bound(5, 0)


def test_bound_dominates_formula_for_positive_rank():
    for s in range(1, 65):
        for a in range(1, s + 1):
            assert census_formula(s, a) <= census_bound(s, a)


def test_domain_errors():
    with pytest.raises(ValueError):
        census_formula(3, 4)
    with pytest.raises(ValueError):
        census_exhaustive(7)
