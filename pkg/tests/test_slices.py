import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcov.action import Subgroup, act, delta_pow
from modcov.cases import CaseKind, make_action
from modcov.poly import GREVLEX, GRLEX, Polynomial, cmp, parse_poly
from modcov.slices import (
    SubspaceSlice,
    invariant_slice,
    kernel_slice,
    matmul_mod,
    module_product_slice,
    monomial_basis,
    nullspace,
    operator_matrix,
    rref,
    sigma_matrix,
    transfer_kernel_slice,
)
from modcov.suite import property_actions
from oracles import kernel_dim, rank_mod_p

SMALL = [a for a in property_actions(5)]


@pytest.mark.parametrize("m,d,dim", [(4, 0, 1), (3, 2, 6), (4, 8, 165), (2, 5, 6)])
def test_monomial_basis_dims(m, d, dim):
    b = monomial_basis(m, d)
    assert b.dim == dim == comb(d + m - 1, m - 1)
    assert len(set(b.monomials)) == dim and all(sum(mm) == d for mm in b.monomials)


@pytest.mark.parametrize("order", [GRLEX, GREVLEX])
def test_monomial_basis_sorted(order):
    b = monomial_basis(3, 4, order)
    assert all(cmp(order, b.monomials[i], b.monomials[i + 1]) == 1 for i in range(b.dim - 1))


def test_basis_vector_round_trip():
    b = monomial_basis(3, 2)
    f = parse_poly("x1^2 + 2*x2*x3", 3, 5)
    assert b.polynomial(b.vector(f), 5) == f
    with pytest.raises(ValueError):
        b.vector(parse_poly("x1", 3, 5))


def test_monomial_basis_negative():
    with pytest.raises(ValueError):
        monomial_basis(3, -1)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 7), st.integers(1, 9), st.randoms(use_true_random=False))
def test_rref_properties(p, nrows, ncols, rng):
    mat = np.array([[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)], dtype=np.int64)
    rows, pivots = rref(mat, p)
    assert rows.shape[0] == len(pivots) == rank_mod_p(mat.tolist(), p)
    assert list(pivots) == sorted(set(pivots))
    for i, c in enumerate(pivots):
        assert rows[i, c] == 1 and np.count_nonzero(rows[:, c]) == 1
    again, piv2 = rref(rows, p)
    assert np.array_equal(again, rows) and list(piv2) == list(pivots)
    ns = nullspace(mat, p)
    assert ns.shape[0] == ncols - rows.shape[0]
    if ns.size:
        assert not (matmul_mod(mat, ns.T, p)).any()


def test_matmul_mod_large_values():
    p = 97
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, (30, 400))
    b = rng.integers(0, p, (400, 20))
    expect = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(400)) % p for j in range(20)] for i in range(30)]
    assert matmul_mod(a, b, p).tolist() == expect


def test_operator_matrix_examples(v3_3):
    assert np.array_equal(operator_matrix(v3_3, 0, 2), np.eye(6, dtype=np.int64))
    assert not operator_matrix(v3_3, 3, 2).any()
    assert not operator_matrix(v3_3, 7, 1).any()
    assert rank_mod_p(operator_matrix(v3_3, 2, 1).tolist(), 3) == 1


def test_operator_matrix_matches_polynomial_engine():
    for a in SMALL:
        for d in (1, 2, 3):
            b = monomial_basis(a.nvars, d)
            for n in range(1, min(a.q, 4) + 1):
                mat = operator_matrix(a, n, d)
                for i, mono in enumerate(b.monomials):
                    img = delta_pow(a, n, Polynomial.monomial(mono, a.nvars, a.p))
                    assert np.array_equal(mat[i], b.vector(img) if img else np.zeros(b.dim))


def test_sigma_matrix_matches_act(c4):
    b = monomial_basis(3, 3)
    for power in range(4):
        mat = sigma_matrix(c4, power, 3)
        for i, mono in enumerate(b.monomials):
            img = act(c4, power, Polynomial.monomial(mono, 3, 2))
            assert np.array_equal(mat[i], b.vector(img))


def test_kernel_examples(v3_3):
    k = kernel_slice(v3_3, 2, 1)
    assert k.rank == 2 and set(k.polys()) == {v3_3.var(2), v3_3.var(3)}
    inv = kernel_slice(v3_3, 1, 1)
    assert inv.rank == 1 and inv.polys() == [v3_3.var(3)]
    for d in range(5):
        assert kernel_slice(v3_3, 3, d).rank == monomial_basis(3, d).dim
    with pytest.raises(ValueError):
        kernel_slice(v3_3, 0, 1)


def test_v3_k2_ranks(v3_3):
    assert [kernel_slice(v3_3, 2, d).rank for d in range(10)] == [1, 2, 4, 7, 10, 14, 19, 24, 30, 37]


def test_kernel_dims_match_oracle():
    for a in SMALL + [make_action(CaseKind.V3, 7)]:
        for n in range(1, min(a.q, 4) + 1):
            for d in range(4):
                assert kernel_slice(a, n, d).rank == kernel_dim(a, n, d), (a, n, d)


def test_kernel_monotone_in_n():
    for a in SMALL:
        for d in range(5):
            ranks = [kernel_slice(a, n, d).rank for n in range(1, a.q + 2)]
            assert ranks == sorted(ranks)
            assert ranks[a.q - 1] == ranks[-1] == monomial_basis(a.nvars, d).dim


def test_invariant_slice_vectors_are_fixed():
    for a in SMALL:
        for d in range(4):
            for f in invariant_slice(a, d).polys():
                assert all(act(a, i, f) == f for i in range(a.q))


def test_kernel_rows_rref_and_membership():
    a = make_action(CaseKind.V2V2, 3)
    k = kernel_slice(a, 2, 3)
    rows, piv = rref(k.rows, 3)
    assert np.array_equal(rows, k.rows)
    for f in k.polys():
        assert delta_pow(a, 2, f).is_zero() and k.contains_poly(f)
    assert not k.contains_poly(a.var(1) ** 2 * a.var(2))
    assert not k.rows.flags.writeable


def test_subspace_from_polys(v3_3):
    b = monomial_basis(3, 1)
    s = SubspaceSlice.from_polys(b, [v3_3.var(1), v3_3.var(1).scale(2)], 3)
    assert s.rank == 1 and s.degree == 1 and s.contains_poly(v3_3.zero())


def test_module_product_examples(v3_3):
    a = make_action(CaseKind.V2, 2)
    x1, x2 = a.var(1), a.var(2)
    gens = [x2, x1**2 + x1 * x2]
    full = lambda e: kernel_slice(a, 2, e)
    s = module_product_slice(a, gens, full, 1, positive_only=True)
    assert s.rank == 1 and s.polys() == [x2]
    assert module_product_slice(a, gens, full, 0, positive_only=True).rank == 0

    p = 3
    a2 = parse_poly("x2^2 + x1*x3 + 2*x2*x3", 3, p)
    a3 = parse_poly("x1^3 + 2*x1*x2^2 + x1^2*x3 + x1*x2*x3", 3, p)
    from modcov.action import full_norm

    assert a3 == full_norm(v3_3, v3_3.var(1))
    gens = [v3_3.var(3), a2, a3]
    s = module_product_slice(v3_3, gens, lambda e: kernel_slice(v3_3, 2, e), 1, positive_only=True)
    assert s.polys() == [v3_3.var(3)]


def test_module_product_rejects_non_invariant(v3_3):
    with pytest.raises(ValueError):
        module_product_slice(v3_3, [v3_3.var(1)], {0: kernel_slice(v3_3, 1, 0)}, 1)
    with pytest.raises(ValueError):
        module_product_slice(v3_3, [v3_3.one()], {0: kernel_slice(v3_3, 1, 0)}, 1)


def test_module_product_closure_matches_oracle(v3_3):
    # A * span{1} is A itself: dims count monomials in generators of degrees 1, 2, 3
    from oracles import multiset_count

    one = {0: SubspaceSlice.from_polys(monomial_basis(3, 0), [v3_3.one()], 3)}
    a2 = parse_poly("x2^2 + x1*x3 + 2*x2*x3", 3, 3)
    from modcov.action import full_norm

    gens = [v3_3.var(3), a2, full_norm(v3_3, v3_3.var(1))]
    dims = [module_product_slice(v3_3, gens, one, d).rank for d in range(9)]
    assert dims == multiset_count([1, 2, 3], 8)


def test_transfer_kernel(c4):
    h = Subgroup(1)
    assert transfer_kernel_slice(c4, h, 0).rank == 1
    for d in range(7):
        assert transfer_kernel_slice(c4, h, d).rank == kernel_slice(c4, 1, d).rank
    with pytest.raises(ValueError):
        transfer_kernel_slice(c4, Subgroup(0), 2)


def test_transfer_kernel_members(c4):
    from modcov.action import transfer

    for f in transfer_kernel_slice(c4, Subgroup(1), 3).polys():
        assert act(c4, 2, f) == f and transfer(c4, Subgroup(1), f).is_zero()


def test_transfer_kernel_odd_p():
    a = make_action(CaseKind.V3, 3)
    # full transfer: kernel of Delta^(q-1) restricted to everything
    for d in range(4):
        assert transfer_kernel_slice(a, Subgroup(1), d).rank == kernel_slice(a, 2, d).rank


def test_memo_reuse(v3_3):
    assert kernel_slice(v3_3, 2, 4) is kernel_slice(v3_3, 2, 4)
    assert kernel_slice(v3_3, 2, 4, GRLEX).rank == kernel_slice(v3_3, 2, 4).rank
