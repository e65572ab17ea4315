from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perron_sieve import constructions as C
from perron_sieve.bounds import parse_bound, power_sum_range, power_sum_table
from perron_sieve.poly import power_sums_from_coefficients
from perron_sieve.roots import largest_positive_root


def test_parse_bound_exact():
    assert parse_bound("1.1743") == Fraction(11743, 10000)
    assert parse_bound("1.84") == Fraction(46, 25)
    assert parse_bound("3/2") == Fraction(3, 2)
    with pytest.raises(TypeError):
        parse_bound(1.84)


@pytest.mark.parametrize("k, want", [(1, range(0, 4)), (2, range(0, 5))])
def test_degree3_ranges(k, want):
    assert power_sum_range(3, k, Fraction(46, 25), strict_lower=True).admissible == want


def test_degree4_range():
    row = power_sum_range(4, 1, Fraction(38, 25), strict_lower=True)
    assert row.lower == -2 and row.upper == 2 * (Fraction(38, 25) + Fraction(25, 38))
    assert row.admissible == range(-1, 5)


def test_strictness_only_moves_integral_lower_end():
    r = Fraction(38, 25)
    assert power_sum_range(4, 1, r, False).lo == -2
    assert power_sum_range(4, 1, r, True).lo == -1


def test_rejects_r_at_most_one():
    with pytest.raises(ValueError):
        power_sum_range(5, 1, Fraction(1), True)


def _oracle(d, k, r, strict):
    """Brute-force the admissible set straight from the inequalities."""
    n, odd = divmod(d, 2)
    lower = min(Fraction(1 - 2 * n) if odd else Fraction(2 - 2 * n),
                -(n - 2) * r**k - (1 if odd else 0) - n / r**k)
    upper = n * (r**k + 1 / r**k) + (1 if odd else 0)
    span = int(abs(lower)) + int(upper) + 3
    return [p for p in range(-span, span + 1) if (lower < p if strict else lower <= p) and p <= upper]


rationals = st.fractions(min_value=Fraction(101, 100), max_value=Fraction(5, 2), max_denominator=10_000)


@settings(max_examples=300)
@given(st.integers(2, 24), st.integers(1, 12), rationals, st.booleans())
def test_matches_oracle(d, k, r, strict):
    assert list(power_sum_range(d, k, r, strict).admissible) == _oracle(d, k, r, strict)


@given(st.integers(2, 20), st.integers(1, 8), rationals, st.fractions(0, 1, max_denominator=100))
def test_monotone_in_r(d, k, r, dr):
    small = power_sum_range(d, k, r, True)
    big = power_sum_range(d, k, r + dr, True)
    assert big.lo <= small.lo and small.hi <= big.hi


@pytest.mark.parametrize("n, k", [(3, 2), (5, 2), (6, 3), (10, 5), (11, 2), (12, 3), (14, 3), (22, 11)])
def test_family_power_sums_inside_ranges(n, k):
    P = C.fnk_polynomial(n, k)
    lam = Fraction(str(largest_positive_root(P))[:12]) + Fraction(1, 10**6)
    ps = power_sums_from_coefficients(P, n - 1).values
    for row in power_sum_table(n, lam, strict_lower=False):
        assert ps[row.k - 1] in row, (row, ps[row.k - 1])


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_reversing_family_power_sums_inside_ranges(k):
    P = C.psik_polynomial(k)
    lam = Fraction(str(largest_positive_root(P))[:12]) + Fraction(1, 10**6)
    ps = power_sums_from_coefficients(P, 2 * k - 1).values
    for row in power_sum_table(2 * k, lam, strict_lower=False):
        assert ps[row.k - 1] in row
