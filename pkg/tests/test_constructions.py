import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from perron_sieve import constructions as C
from perron_sieve import known
from perron_sieve.poly import IntPolynomial, charpoly, classify_symmetry, strip_cyclotomic

P = IntPolynomial.parse

VALID_NK = [(n, k) for n in range(3, 21) for k in range(1, n) if (n - k) % 2]


def test_parameter_validation():
    with pytest.raises(ValueError):
        C.NonorFamily(6, 2)  # same parity
    with pytest.raises(ValueError):
        C.NonorFamily(5, 5)
    with pytest.raises(ValueError):
        C.ReversingFamily(3)
    with pytest.raises(ValueError):
        C.SurfaceInfo(-3, 1, 3, False)


def test_fnk_polynomial_shape():
    assert C.fnk_polynomial(10, 5) == P("x^10 - x^7 - x^6 - x^5 - x^4 - x^3 - 1")
    assert C.fnk_polynomial(11, 2) == P("x^11 - x^6 - x^5 - 1")


@pytest.mark.parametrize("n, k", VALID_NK)
def test_fnk_charpoly(n, k):
    assert charpoly(C.fnk_matrix(n, k)) == C.fnk_polynomial(n, k)


@pytest.mark.parametrize("k", range(2, 13, 2))
def test_psik_charpoly(k):
    assert charpoly(C.psik_matrix(k)) == C.psik_polynomial(k)


def _circulant_oracle(n, k):
    """G_{n,k} from cyclic distances alone."""
    adj = {}
    for v in range(n):
        far = sorted(range(1, n), key=lambda t: -min(t, n - t))[:k]
        adj[v] = frozenset((v + t) % n for t in far)
    return adj


@pytest.mark.parametrize("n, k", VALID_NK)
def test_gnk_matches_distance_oracle(n, k):
    # n and k have opposite parity, so the k farthest vertices never split a distance tie
    assert C.gnk_graph(n, k) == _circulant_oracle(n, k)


@pytest.mark.parametrize("n, k", [(n, k) for n, k in VALID_NK if n <= 16])
def test_intersection_graph_is_gnk(n, k):
    I = C.fnk_intersection(n, k)
    assert all(I[i][j] == I[j][i] for i in range(n) for j in range(n))
    assert all(sum(row) == k for row in I)
    # labels c_1..c_n sit in the cyclic order of the strip ends; G_{n,k} is on that order
    adj = C.gnk_graph(n, k)
    for i in range(n):
        got = {j for j in range(n) if I[i][j]}
        assert {min((j - i) % n, (i - j) % n) for j in got} == {min((j - i) % n, (i - j) % n) for j in adj[i]}


def test_f10_5_matrix():
    M = C.fnk_matrix(10, 5)
    assert M[:9] == tuple(tuple(int(j == i + 1) for j in range(10)) for i in range(9))
    assert M[9] == known.bits([known.F_10_5_LAST_ROW])[0]


def test_psi4_matrices():
    assert C.psik_intersection(4) == known.bits(known.PSI4_INTERSECTION)
    M = C.psik_matrix(4)
    assert M[7] == known.bits([known.PSI4_ACTION_LAST_ROW])[0]


@pytest.mark.parametrize("k", range(2, 13, 2))
def test_psik_polynomial_skew_reciprocal(k):
    assert classify_symmetry(C.psik_polynomial(k)).skew_reciprocal


@pytest.mark.parametrize("k", [2, 4, 6])
def test_psik_action_anti_symplectic_spectrum(k):
    # the intersection form need not be the standard J here, but the
    # spectrum of an orientation-reversing action is skew-reciprocal
    assert classify_symmetry(charpoly(C.psik_matrix(k))).skew_reciprocal


def test_anti_symplectic_examples():
    assert C.is_anti_symplectic(((1, 0), (0, -1)))
    assert C.is_symplectic(((1, 1), (0, 1)))
    assert not C.is_anti_symplectic(((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        C.is_anti_symplectic(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


@given(st.integers(3, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_euler_poincare(nk):
    n, k = nk
    if (n - k) % 2 == 0:
        return
    surf = C.sigma_nk_info(n, k)
    sing = C.fnk_singularities(n, k).singularity
    assert sing.euler_poincare_sum() == 2 * surf.genus - 4 == -2 * (2 - surf.genus)
    assert sing.euler_poincare_sum() == -2 * (surf.euler_characteristic + surf.boundary_components)


@pytest.mark.parametrize("k", range(4, 30, 2))
def test_euler_poincare_reversing(k):
    surf, sing = C.psik_info(k)
    assert sing.euler_poincare_sum() == 4 * surf.genus - 4


def test_singularity_labels():
    assert C.SingularityType((4,) * 11).label() == "(4^11)"
    assert C.SingularityType((4, 4, 4)).label() == "(4,4,4)"
    assert C.SingularityType(()).label() == "no singularities"


def test_k1_members_excluded():
    # f_{n,1} would realise genus n + 1 with x^n - x^{n/2} - 1, whose
    # roots of maximal modulus are not unique
    assert not C.is_connected(C.gnk_graph(6, 1))
    assert all(m.k > 1 for g in range(4, 16) for m in C.nonor_members(g))


@pytest.mark.parametrize("g", range(4, 21))
def test_members_realise_genus(g):
    for m in C.nonor_members(g):
        assert C.sigma_nk_info(m.n, m.k).genus == g
        assert m.n - math.gcd(m.n, m.k) + 2 == g


@pytest.mark.parametrize("g", sorted(known.NONOR_FAMILY_ROWS))
def test_family_table_rows(g):
    n, k, root, minimal, sing = known.NONOR_FAMILY_ROWS[g]
    row = C.best_in_family(g)
    assert (row.params["n"], row.params["k"]) == (n, k)
    assert row.stretch_5dp == root
    assert row.minimal_part == P(minimal)
    assert row.singularity.label() == sing


@pytest.mark.parametrize("g", sorted(known.REV_MINIMA))
def test_reversing_table_rows(g):
    root, text, sing = known.REV_MINIMA[g]
    row = C.best_in_family(g, C.REVERSING_FAMILY)
    assert row.polynomial == P(text) and row.stretch_5dp == root
    assert row.singularity.label() == sing
    assert row.minimal_part == strip_cyclotomic(P(text))[0]


def test_family_table_ranges():
    assert [r.genus for r in C.family_table(C.NONOR_FAMILY, 5)] == [4, 5]
    assert [r.genus for r in C.family_table(C.REVERSING_FAMILY, 11)] == [1, 3, 5, 7, 9, 11]
    with pytest.raises(ValueError):
        C.best_in_family(4, C.REVERSING_FAMILY)


def test_table_csv_columns():
    text = C.table_csv(C.family_table(C.NONOR_FAMILY, 6))
    lines = text.strip().split("\n")
    assert lines[0].split(",") == list(C.TABLE_COLUMNS)
    assert lines[1].startswith("4,3,2,1.83929,")
