import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcov.certify import kernel_series, verify_ssubalg
from modcov.hilbert import (
    HilbertNumerator,
    NotPolynomialError,
    TruncatedSeries,
    format_series,
    hsop_series,
    numerator,
    rank_s,
    ssubalg_report,
)
from modcov.slices import SubspaceSlice, module_product_slice, monomial_basis
from helpers import case
from oracles import multiset_count


def test_hsop_series_examples():
    assert hsop_series([1], 4).coeffs == (1, 1, 1, 1, 1)
    assert hsop_series([1, 2, 3], 4).coeffs == (1, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        hsop_series([1, 0], 3)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(0, 15))
def test_hsop_series_counts_multisets(degrees, bound):
    s = hsop_series(degrees, bound)
    assert s.bound == bound
    assert list(s.coeffs) == multiset_count(degrees, bound)


@pytest.mark.parametrize("kind,p", [("v2", 3), ("v3", 3), ("v3", 5), ("v2v2", 2), ("v2v2", 3), ("v3c4", 2)])
def test_hsop_series_matches_algebra_slices(kind, p):
    c = case(kind, p, 1)
    a = c.action
    one = {0: SubspaceSlice.from_polys(monomial_basis(a.nvars, 0), [a.one()], a.p)}
    bound = 8
    dims = [module_product_slice(a, c.hsop, one, d).rank for d in range(bound + 1)]
    assert dims == list(hsop_series(c.hsop_degrees, bound).coeffs)
    f = numerator(TruncatedSeries(tuple(dims)), c.hsop_degrees, 0)
    assert f.coeffs == (1,)


def test_numerator_v3_k2():
    c = case("v3", 3, 2)
    f = numerator(kernel_series(c, 2, 12), [1, 2, 3], 3)
    assert f.coeffs == (1, 1, 1, 1)
    assert str(f) == "1 + t + t^2 + t^3"


def test_numerator_v2v2_invariants():
    c = case("v2v2", 3, 1)
    assert c.hsop_degrees == [1, 1, 3, 3]
    f = numerator(kernel_series(c, 1, 12), c.hsop_degrees, 4)
    assert f.coeffs == (1, 0, 1, 0, 1)


def test_numerator_tail_and_bound_errors():
    c = case("v3", 3, 2)
    series = kernel_series(c, 2, 12)
    with pytest.raises(NotPolynomialError) as info:
        numerator(series, [1, 2, 3], 2)
    assert 3 in info.value.degrees
    with pytest.raises(ValueError):
        numerator(series, [1, 2, 3], 10)


def test_rank_s_examples():
    for p in (3, 5, 7):
        f = HilbertNumerator(tuple([1] + [0] * (p - 1) + [1]))
        assert (rank_s(f).r, rank_s(f).s) == (2, p)
    assert rank_s(HilbertNumerator((1,))) == rank_s(HilbertNumerator((1, 0)))
    assert (rank_s(HilbertNumerator((1,))).r, rank_s(HilbertNumerator((1,))).s) == (1, 0)
    rs = rank_s(HilbertNumerator((1, 1, 1, 1)))
    assert (rs.r, rs.s) == (4, 6)


def test_rank_s_relative_and_errors():
    f = HilbertNumerator((1, 1, 1, 1, 1, 1))  # (1 + t + t^2)(1 + t^3)
    g = HilbertNumerator((1, 0, 0, 1))
    rs = rank_s(f, g)
    assert (rs.r, rs.s) == (3, 3)
    with pytest.raises(ValueError):
        rank_s(HilbertNumerator((1, 0, -1)))  # r = 0 but s < 0
    with pytest.raises(ValueError):
        rank_s(HilbertNumerator((1, 1)), HilbertNumerator((1, 0, 0, 1)))  # r = 1
    with pytest.raises(ValueError):
        rank_s(HilbertNumerator((1,)), HilbertNumerator((1, -1)))


def test_format_series():
    assert format_series((1, 1, 1, 1)) == "1 + t + t^2 + t^3"
    assert format_series((0, 0, 2, -1)) == "2*t^2 - t^3"
    assert format_series(()) == "0"


def test_ssubalg_examples():
    chk = verify_ssubalg(case("v3", 5, 3))
    rep = chk.report
    assert rep.ok and rep.s_MB == 15 and rep.s_MA == 0 and rep.r_AB == 2 and rep.s_AB == 5
    assert rep.s_MB == 2 * rep.s_MA + 3 * 5
    c4 = verify_ssubalg(case("v3c4", 2, 2)).report
    assert c4.ok and c4.s_MB == 6


def test_ssubalg_full_ring():
    # n = q: K_n is all of k[V]
    c = case("v3", 3, 3)
    chk = verify_ssubalg(c)
    assert chk.ok
    assert chk.module_numerator.at_one() == 6  # (1 * 2 * 3) / 1
    full = kernel_series(c, 3, 8).coeffs
    assert list(full) == [monomial_basis(3, d).dim for d in range(9)]


def test_ssubalg_report_detects_mismatch():
    bad = ssubalg_report(HilbertNumerator((1, 1)), HilbertNumerator((1,)))
    assert bad.ok
    rep = bad.__class__(4, 7, 2, 3, 2, 0)
    assert rep.identity_a and not rep.identity_b and not rep.ok


@pytest.mark.parametrize(
    "kind,p,n,expected",
    [("v2", 5, n, (n, n * (n - 1) // 2)) for n in range(1, 6)]
    + [("v3", 5, n, (2 * n, 5 * n)) for n in range(1, 6)]
    + [("v2v2", 3, n, (3 * n, 6 * n)) for n in range(1, 4)]
    + [("v3c4", 2, n, (2 * n, s)) for n, s in [(2, 6), (3, 11), (4, 16)]],
)
def test_rank_s_closed_forms(kind, p, n, expected):
    rep = verify_ssubalg(case(kind, p, n)).report
    assert (rep.r_MB, rep.s_MB) == expected
