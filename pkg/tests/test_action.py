import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcov.action import (
    CyclicAction,
    Subgroup,
    act,
    delta,
    delta_pow,
    delta_powers,
    full_norm,
    is_invariant,
    norm,
    transfer,
    weight,
)
from modcov.arith import Prime
from modcov.cases import CaseKind, make_action
from modcov.poly import Polynomial, parse_poly
from modcov.suite import (
    check_commutation,
    check_kernel_characterisation,
    check_leibniz,
    check_power_rule,
    check_trace,
    check_twisted_derivation,
    property_actions,
    random_poly,
)
from helpers import case

ALL_ACTIONS = property_actions(7)


def P(text, a):
    return parse_poly(text, a.nvars, a.p)


def test_act_examples(v3_3, c4):
    assert act(v3_3, 1, v3_3.var(1)) == P("x1 + x2", v3_3)
    f = P("x1^2*x2 + 2*x3", v3_3)
    assert act(v3_3, 0, f) == f
    assert act(c4, 2, c4.var(1)) == P("x1 + x3", c4)


def test_act_is_ring_hom(v3_3):
    rng = random.Random(1)
    for _ in range(50):
        f, g = random_poly(v3_3, rng), random_poly(v3_3, rng)
        for e in (1, 2, 5):
            assert act(v3_3, e, f * g) == act(v3_3, e, f) * act(v3_3, e, g)
            assert act(v3_3, e, f + g) == act(v3_3, e, f) + act(v3_3, e, g)


def test_act_ring_mismatch(v3_3):
    with pytest.raises(ValueError):
        act(v3_3, 1, Polynomial.var(1, 2, 3))


def test_rejects_bad_actions():
    pr = Prime(3)
    x = [Polynomial.var(i, 2, 3) for i in (1, 2)]
    with pytest.raises(ValueError):  # not faithful: identity
        CyclicAction(pr, [x[0], x[1]])
    with pytest.raises(ValueError):  # lower triangular
        CyclicAction(pr, [x[0], x[0] + x[1]])
    with pytest.raises(ValueError):  # not a linear form
        CyclicAction(pr, [x[0] + x[1] ** 2, x[1]])
    with pytest.raises(ValueError):  # order 3 substitution claimed to have order 9
        CyclicAction(Prime(3, 2), [x[0] + x[1], x[1]])


def test_c4_has_order_four(c4):
    x1 = c4.var(1)
    assert act(c4, 4, x1) == x1 and act(c4, 2, x1) != x1


def test_delta_examples(v3_3):
    assert delta_pow(v3_3, 1, v3_3.var(1) ** 2) == P("2*x1*x2 + x2^2", v3_3)
    a2 = P("x2^2 + x1*x3 + 2*x2*x3", v3_3)  # x2^2 - 2 x1 x3 - x2 x3 mod 3
    assert delta_pow(v3_3, 1, a2).is_zero()
    for a in ALL_ACTIONS:
        f = a.var(1) ** 3 * a.var(2) + a.var(a.nvars)
        assert delta_pow(a, a.q, f).is_zero()
        assert delta_pow(a, 0, f) == f


def test_delta_pow_iterates(v3_3):
    f = v3_3.var(1) ** 4
    g = f
    for n in range(5):
        assert delta_pow(v3_3, n, f) == g
        g = delta(v3_3, g)


def test_delta_powers_and_weight(v3_3):
    x1 = v3_3.var(1)
    chain = delta_powers(v3_3, x1)
    assert chain == [x1, v3_3.var(2), v3_3.var(3)]
    assert weight(v3_3, x1) == 3
    assert weight(v3_3, v3_3.one().scale(2)) == 1
    with pytest.raises(ValueError):
        weight(v3_3, v3_3.zero())


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_v2v2_weight_formula(p):
    # exponents of x3, x4 are independent of the weight
    a = make_action(CaseKind.V2V2, p)
    for i in range(p):
        for j in range(p):
            for e3, e4 in [(0, 0), (1, 0), (0, 2), (1, 1)]:
                f = Polynomial.monomial((i, j, e3, e4), 4, p)
                assert weight(a, f) == min(i + j + 1, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_v3_m_weights(p):
    cands = case("v3", p, p).candidates[:p]
    assert [weight(case("v3", p, p).action, m) for m in cands] == [i + 1 for i in range(p)]


def test_weight_at_most_q():
    for a in ALL_ACTIONS:
        rng = random.Random(a.p)
        for _ in range(20):
            f = random_poly(a, rng)
            assert 1 <= weight(a, f) <= a.q


def test_transfer_examples(c4):
    inv = c4.var(3) ** 2 + c4.var(2) ** 2 + c4.var(2) * c4.var(3)
    assert transfer(c4, Subgroup(0), inv) == inv
    f = c4.var(1) * c4.var(2)
    # x1*x2 is not fixed by sigma^2, so the relative transfer refuses it
    with pytest.raises(ValueError):
        transfer(c4, Subgroup(1), f)
    assert f + act(c4, 1, f) == P("x1*x3 + x2^2 + x2*x3", c4)
    assert transfer(c4, Subgroup(1), c4.var(2)) == c4.var(3)


def test_full_transfer_is_top_delta():
    for a in ALL_ACTIONS:
        rng = random.Random(7 * a.p)
        for _ in range(20):
            f = random_poly(a, rng)
            assert transfer(a, Subgroup(a.prime.k), f) == delta_pow(a, a.q - 1, f)


def test_transfer_rep_independence(c4):
    h = Subgroup(1)
    rng = random.Random(3)
    for _ in range(30):
        f = random_poly(c4, rng)
        f = f * act(c4, 2, f)  # sigma^2-invariant
        t = transfer(c4, h, f)
        assert is_invariant(c4, t)
        assert transfer(c4, h, f, reps=[2, 1]) == t == transfer(c4, h, f, reps=[0, 3])
        assert norm(c4, h, f, reps=[2, 3]) == norm(c4, h, f)


def test_norm_examples(c4):
    a = make_action(CaseKind.V2V2, 5)
    assert full_norm(a, a.var(1)) == P("x1^5 + 4*x1*x3^4", a)
    assert norm(c4, Subgroup(1), c4.var(2)) == P("x2^2 + x2*x3", c4)
    inv = c4.var(3) ** 2 + c4.var(2) ** 2 + c4.var(2) * c4.var(3)
    assert is_invariant(c4, inv)
    assert full_norm(c4, inv) == inv**4


def test_norm_invariant_and_degree():
    for a in ALL_ACTIONS:
        for i in range(1, a.nvars + 1):
            n = full_norm(a, a.var(i))
            assert delta(a, n).is_zero() and n.degree in (1, a.q) and n.is_homogeneous()


def test_subgroup_bounds(c4):
    with pytest.raises(ValueError):
        transfer(c4, Subgroup(3), c4.var(3))


action_idx = st.integers(0, len(ALL_ACTIONS) - 1)


@settings(max_examples=60, deadline=None)
@given(action_idx, st.randoms(use_true_random=False))
def test_operator_identities(idx, rng):
    a = ALL_ACTIONS[idx]
    f, g = random_poly(a, rng), random_poly(a, rng)
    assert check_twisted_derivation(a, f, g)
    assert check_leibniz(a, random_poly(a, rng, 2, 2), random_poly(a, rng, 2, 2))
    assert check_power_rule(a, f, rng.randint(1, 4))
    assert check_commutation(a, f)
    assert check_trace(a, g)
    assert check_kernel_characterisation(a, f)
    assert check_kernel_characterisation(a, full_norm(a, a.var(1)))


def test_leibniz_rejects_misplaced_twist(v3_3):
    # sanity: the identity being tested is not vacuous
    f, g = v3_3.var(1), v3_3.var(1)
    lhs = delta(v3_3, f * g)
    wrong = f * act(v3_3, 1, delta(v3_3, g)) + delta(v3_3, f) * g
    assert lhs != wrong
