from fractions import Fraction

import pytest

from morava2.coeff import UPoly, WittElem
from morava2.fgl import (
    MSeries,
    RatSeries,
    araki_lambda,
    check_8i1_structure,
    compose_exp,
    compose_log,
    exp_g2,
    fgl_sum,
    fgl_sum_mod,
    fgl_table,
    lambda_u1,
    log_g2,
    three_series,
    three_series_log_oracle,
)

F = Fraction


def test_araki_lambda_displayed_values():
    assert araki_lambda(0) == {(0, 0): F(1)}
    assert araki_lambda(1) == {(1, 0): F(-1, 24)}
    c = F(1, 1 - 3 ** 8)
    assert araki_lambda(2) == {(0, 1): c / 3, (4, 0): -c / 72}


def test_araki_lambda_recursion_relation():
    # lambda_k (3 - 3^(3^k)) = v_k + sum_{0<i<k} lambda_i v_{k-i}^(3^i)
    for k in (1, 2, 3, 4):
        lhs = {kk: v * (3 - F(3) ** (3 ** k)) for kk, v in araki_lambda(k).items()}
        rhs = {}
        if k <= 2:
            rhs[(1, 0) if k == 1 else (0, 1)] = F(1)
        for i in range(1, k):
            if k - i > 2:
                continue
            p = 3 ** i
            mono = (p, 0) if k - i == 1 else (0, p)
            for (a, b), v in araki_lambda(i).items():
                kk = (a + mono[0], b + mono[1])
                rhs[kk] = rhs.get(kk, F(0)) + v
        assert lhs == {kk: v for kk, v in rhs.items() if v}


def test_lambda_cap():
    with pytest.raises(ValueError):
        araki_lambda(5)


def test_log_and_exp_displayed_coefficients():
    lg = log_g2(10, 6)
    assert lg.coeff((3,)) == {1: F(-1, 24)}
    c = F(1, 1 - 3 ** 8)
    assert lg.coeff((9,)) == {0: c / 3, 4: -c / 72}
    ex = exp_g2(10, 6)
    assert ex.coeff((3,)) == {1: F(1, 24)}
    assert ex.coeff((5,)) == {2: F(3, 24 ** 2)}
    assert ex.coeff((7,)) == {3: F(12, 24 ** 3)}
    # the u1^0-part of the x^9-coefficient is -(1/(1-3^8))/3; the u1^4-part
    # is forced by exp(log) = id (solved independently below)
    assert ex.coeff((9,))[0] == -c / 3
    assert ex.coeff((9,))[4] == c / 72 + F(55, 24 ** 4)


def test_exp_log_inverse():
    x = RatSeries.variable(0, 1, 20, 8)
    comp = compose_exp(compose_log(x))
    assert comp.terms == {(1,): {0: F(1)}}
    comp2 = compose_log(compose_exp(x))
    assert comp2.terms == {(1,): {0: F(1)}}


def test_formal_sum_displayed_coefficients_mod3():
    x = RatSeries.variable(0, 2, 10, 5)
    y = RatSeries.variable(1, 2, 10, 5)
    f = fgl_sum([x, y], 1, 10, 5)

    def up(coeffs):
        return UPoly.from_coeffs(coeffs, 1, 5)

    expected = {
        (1, 0): up([1]), (0, 1): up([1]),
        (1, 2): up([0, -1]), (2, 1): up([0, -1]),
        (1, 4): up([0, 0, 1]), (4, 1): up([0, 0, 1]),
        (1, 6): up([0, 0, 0, -1]), (6, 1): up([0, 0, 0, -1]),
        (3, 4): up([0, 0, 0, -1]), (4, 3): up([0, 0, 0, -1]),
        (3, 6): up([-1]), (6, 3): up([-1]),
        (4, 5): up([0, 0, 0, 0, 1]), (5, 4): up([0, 0, 0, 0, 1]),
    }
    assert f.terms == expected


def test_formal_sum_unit_and_integrality():
    x = RatSeries.variable(0, 2, 12, 4)
    zero = RatSeries(2, 12, 4, {})
    f = fgl_sum([x, zero], 1, 12, 4)
    assert f.terms == {(1, 0): UPoly.one(1, 4)}
    # integrality of the assembled two-variable law at higher degree
    from morava2.fgl import exact_f
    exact_f(28, 16).assert_integral()


def test_associativity_and_commutativity_mod_3():
    e, K, D = 1, 8, 12
    table = fgl_table(e, K)
    x = MSeries.variable(0, 3, e, K, D)
    y = MSeries.variable(1, 3, e, K, D)
    z = MSeries.variable(2, 3, e, K, D)
    left = fgl_sum_mod([fgl_sum_mod([x, y], table), z], table)
    right = fgl_sum_mod([x, fgl_sum_mod([y, z], table)], table)
    assert left == right
    assert fgl_sum_mod([x, y], table) == fgl_sum_mod([y, x], table)


def test_three_series_values():
    ts = three_series(1, 82, 16)
    assert ts.coeff((3,)) == UPoly.u1(1, 16)
    # mod (3, u1): leading term x^9, corrections only in degrees 1 mod 8
    for exps, up in ts.terms.items():
        d = exps[0]
        c0 = up.coeff(0)
        if not c0.is_zero():
            assert d == 9 or d % 8 == 1
    ts9 = three_series(2, 12, 4)
    assert ts9.coeff((1,)) == UPoly.const(WittElem(2, 3), 4)


def test_three_series_matches_log_oracle():
    ts = three_series(1, 82, 16).truncate(27)
    orc = three_series_log_oracle(1, 27, 16)
    assert ts == orc
    ts9 = three_series(2, 18, 6).truncate(18)
    orc9 = three_series_log_oracle(2, 18, 6)
    assert ts9 == orc9


def test_8i1_structure():
    rep = check_8i1_structure(27)
    assert rep["ok"], rep
    # corrections may only sit in degrees 1 mod 8; in this range only the
    # degree-9 block is actually nonzero
    assert rep["blocks"] == [9]
    rep11 = check_8i1_structure(11)
    assert rep11["ok"] and rep11["blocks"] == [9]


def test_freshman_cube_matches_generic_power():
    e, K, D = 1, 6, 15
    table = fgl_table(e, K)
    x = MSeries.variable(0, 2, e, K, D)
    y = MSeries.variable(1, 2, e, K, D)
    s = fgl_sum_mod([x, y], table)
    assert s.pow3() == s * s * s
