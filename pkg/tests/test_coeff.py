import random

from morava2.coeff import (
    ALL_F9,
    F9Elem,
    OMEGA,
    UPoly,
    WittElem,
    frobenius,
    omega_hat,
    teichmuller,
    witt_from_f9,
    witt_invert,
)


def all_witt(e):
    m = 3 ** e
    for c0 in range(m):
        for c1 in range(m):
            yield WittElem(e, c0, c1)


# -- F9 --------------------------------------------------------------------

def test_omega_defining_identities():
    w = OMEGA
    assert (w * w + w - F9Elem(1)).is_zero()
    assert w ** 4 == -F9Elem(1)
    assert w ** 8 == F9Elem(1)
    # identities used for the commutator table
    assert w ** 3 + w == -F9Elem(1)
    assert w ** 2 - F9Elem(1) == -w


def test_f9_frobenius_is_ring_involution():
    for x in ALL_F9:
        for y in ALL_F9:
            assert (x + y).frobenius() == x.frobenius() + y.frobenius()
            assert (x * y).frobenius() == x.frobenius() * y.frobenius()
        assert x.frobenius().frobenius() == x
        assert x.frobenius() == x ** 3
    for a in range(3):
        assert F9Elem(a).frobenius() == F9Elem(a)


def test_f9_field_axioms_exhaustive():
    for x in ALL_F9:
        if not x.is_zero():
            assert x * x.inverse() == F9Elem(1)
        for y in ALL_F9:
            assert x * y == y * x
            for z in ALL_F9:
                assert (x * y) * z == x * (y * z)
                assert x * (y + z) == x * y + x * z


# -- Witt vectors ----------------------------------------------------------

def test_teichmuller_trivial_lifts():
    assert teichmuller(F9Elem(1), 3) == WittElem(3, 1)
    assert teichmuller(F9Elem(0), 2) == WittElem(2, 0)


def test_teichmuller_omega_matches_bruteforce_oracle():
    # oracle: the unique z mod 9 with z = w mod 3 and z^8 = 1
    found = []
    for c0 in range(9):
        for c1 in range(9):
            z = WittElem(2, c0, c1)
            if z.residue() == OMEGA and z ** 8 == WittElem(2, 1):
                found.append(z)
    assert len(found) == 1
    assert teichmuller(OMEGA, 2) == found[0]


def test_teichmuller_is_multiplicative_and_nine_stable():
    for e in (1, 2, 3):
        for x in ALL_F9:
            z = teichmuller(x, e)
            assert z.residue() == x
            assert z ** 9 == z
            for y in ALL_F9:
                assert teichmuller(x * y, e) == teichmuller(x, e) * teichmuller(y, e)


def test_teichmuller_commutes_with_frobenius():
    for e in (1, 2, 3):
        for x in ALL_F9:
            assert teichmuller(x.frobenius(), e) == frobenius(teichmuller(x, e))


def test_omega_hat_has_exact_order_eight():
    for e in (1, 2, 3, 4):
        z = omega_hat(e)
        assert z ** 8 == WittElem(e, 1)
        assert z ** 4 == WittElem(e, -1)
        assert z.residue() == OMEGA


def test_frobenius_fixes_base_and_squares_to_identity():
    for e in (2, 3):
        for w in all_witt(e):
            assert frobenius(frobenius(w)) == w
        for c in range(3 ** e):
            assert frobenius(WittElem(e, c)) == WittElem(e, c)
    assert frobenius(omega_hat(3)) == omega_hat(3) ** 3


def test_witt_ring_structure_mod3_matches_f9():
    for w in all_witt(1):
        for v in all_witt(1):
            assert (w * v).residue() == w.residue() * v.residue()
            assert (w + v).residue() == w.residue() + v.residue()


def test_witt_invert_extended_euclid_oracle():
    # -2 mod 9: oracle r with -2r = 1 mod 9 via brute force -> 4
    r = [x for x in range(9) if (-2 * x) % 9 == 1]
    assert r == [4]
    assert witt_invert(WittElem(2, -2)) == WittElem(2, 4)
    assert witt_invert(WittElem(2, 1)) == WittElem(2, 1)
    assert witt_invert(omega_hat(3)) == omega_hat(3) ** 7


def test_witt_invert_two_sided_exhaustive_low_precision():
    for e in (1, 2, 3):
        one = WittElem(e, 1)
        for w in all_witt(e) if e < 3 else [WittElem(3, c0, c1) for c0 in range(0, 27, 5) for c1 in range(27)]:
            if w.is_unit():
                r = witt_invert(w)
                assert w * r == one
                assert r * w == one


def test_witt_val3_and_div3():
    assert WittElem(3, 9, 3).val3() == 1
    assert WittElem(3, 0, 0).val3() == 3
    w = WittElem(3, 6, 12)
    assert w.exact_div3() == WittElem(2, 2, 4)


# -- UPoly -----------------------------------------------------------------

def naive_mul(a, b, e, K):
    out = [WittElem(e, 0) for _ in range(K)]
    for i in range(K):
        for j in range(K - i):
            out[i + j] = out[i + j] + a.coeff(i) * b.coeff(j)
    return UPoly.from_coeffs(out, e, K)


def random_upoly(rng, e, K):
    return UPoly.from_coeffs(
        [WittElem(e, rng.randrange(3 ** e), rng.randrange(3 ** e)) for _ in range(K)], e, K)


def test_upoly_mul_matches_naive_reference():
    rng = random.Random(7)
    for e in (1, 2, 4):
        for K in (1, 3, 8, 16):
            for _ in range(12):
                a = random_upoly(rng, e, K)
                b = random_upoly(rng, e, K)
                assert a * b == naive_mul(a, b, e, K)


def test_upoly_ring_axioms_sampled():
    rng = random.Random(11)
    e, K = 2, 10
    for _ in range(20):
        a, b, c = (random_upoly(rng, e, K) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == UPoly.zero(e, K)


def test_upoly_inverse_and_subst():
    rng = random.Random(13)
    e, K = 2, 12
    one = UPoly.one(e, K)
    for _ in range(10):
        a = random_upoly(rng, e, K)
        a = a + UPoly.one(e, K).scale_int(1 + 3 * rng.randrange(2))  # force unit-ish
        if not a.coeff(0).is_unit():
            a = a + one
        assert a * a.inverse() == one
    # substitution: p(u1) at u1 -> u1^2
    p = UPoly.from_coeffs([1, 2, 1], e, K)
    q = p.subst(UPoly.monomial(WittElem(e, 1), 2, K))
    assert q == UPoly.from_coeffs([1, 0, 2, 0, 1], e, K)


def test_upoly_freshman_cube_matches_pow():
    rng = random.Random(17)
    for K in (4, 9, 16):
        for _ in range(10):
            a = random_upoly(rng, 1, K)
            assert a.freshman_cube() == a ** 3


def test_upoly_frobenius_is_coefficientwise():
    rng = random.Random(19)
    a = random_upoly(rng, 3, 9)
    f = a.frobenius()
    for j in range(9):
        assert f.coeff(j) == a.coeff(j).frobenius()


def test_upoly_shift_and_valuation():
    e, K = 1, 6
    a = UPoly.from_coeffs([0, 0, 1, 2], e, K)
    assert a.valuation() == 2
    assert a.shift_down(2) == UPoly.from_coeffs([1, 2], e, K)
    assert a.shift(3) == UPoly.from_coeffs([0, 0, 0, 0, 0, 1], e, K)
    assert UPoly.zero(e, K).valuation() == K
