"""Arithmetic in the maximal order O2 = W<S>/(S^2 = 3, S w = frobenius(w) S).

An ``OrderElem`` is a skew power series sum w_i S^i truncated mod S^N.  Since
S^2 = 3, the digit at S^i only matters mod 3^ceil((N-i)/2); digits are kept
at exactly that tapering precision, which makes the representation a faithful
model of O2 / S^N O2.

The group-theoretic layer provides the named elements a, b = [a, omega],
c = [a, b], d = [b, c], the S-adic filtration with its graded Lie structure,
the reduced determinant, and membership tests for the norm-one subgroup and
the torsion-free subgroup cut out by the half-level filtration quotient.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import (
    F9Elem,
    WittElem,
    inv_mod,
    omega_hat,
    teichmuller,
    witt_from_f9,
)


def digit_prec(N: int, i: int) -> int:
    return (N - i + 1) // 2


class OrderElem:
    """Truncated skew power series sum_{i<N} w_i S^i.

    Because 3 = S^2, a digit list is redundant; the constructor canonicalizes
    to the unique Teichmueller expansion sum tau(x_i) S^i, carrying the
    3-divisible part of each digit two slots up.  Equality of digit tuples is
    then equality in O2 / S^N O2.
    """

    __slots__ = ("N", "ds")

    def __init__(self, N: int, digits):
        if N < 1:
            raise ValueError("S-adic precision must be >= 1")
        work = []
        for i in range(N):
            e = digit_prec(N, i)
            if i < len(digits):
                w = digits[i].reduce_e(e)
                work.append([w.c0, w.c1])
            else:
                work.append([0, 0])
        ds = []
        for i in range(N):
            e = digit_prec(N, i)
            m = 3 ** e
            c0, c1 = work[i][0] % m, work[i][1] % m
            t = teichmuller(F9Elem(c0, c1), e)
            if i + 2 < N:
                work[i + 2][0] += (c0 - t.c0) % m // 3
                work[i + 2][1] += (c1 - t.c1) % m // 3
            ds.append(t)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "ds", tuple(ds))

    def __setattr__(self, *a):
        raise AttributeError("OrderElem is immutable")

    # -- constructors

    @staticmethod
    def zero(N: int) -> "OrderElem":
        return OrderElem(N, [])

    @staticmethod
    def one(N: int) -> "OrderElem":
        return OrderElem(N, [WittElem(digit_prec(N, 0), 1)])

    @staticmethod
    def from_witt(w: WittElem, N: int) -> "OrderElem":
        return OrderElem(N, [w.reduce_e(min(w.e, digit_prec(N, 0)))])

    @staticmethod
    def s_unit(N: int) -> "OrderElem":
        """The uniformizer S."""
        ds = [WittElem(digit_prec(N, 0), 0)]
        if N > 1:
            ds.append(WittElem(digit_prec(N, 1), 1))
        return OrderElem(N, ds)

    def reduce_N(self, N: int) -> "OrderElem":
        if N > self.N:
            raise ValueError("cannot raise S-adic precision")
        return OrderElem(N, self.ds[:N])

    @staticmethod
    def _pair(x: "OrderElem", y: "OrderElem"):
        N = min(x.N, y.N)
        return x.reduce_N(N), y.reduce_N(N), N

    # -- ring structure

    def __add__(self, other: "OrderElem") -> "OrderElem":
        x, y, N = OrderElem._pair(self, other)
        return OrderElem(N, [x.ds[i] + y.ds[i] for i in range(N)])

    def __sub__(self, other: "OrderElem") -> "OrderElem":
        x, y, N = OrderElem._pair(self, other)
        return OrderElem(N, [x.ds[i] - y.ds[i] for i in range(N)])

    def __neg__(self) -> "OrderElem":
        return OrderElem(self.N, [-w for w in self.ds])

    def __mul__(self, other: "OrderElem") -> "OrderElem":
        x, y, N = OrderElem._pair(self, other)
        # S^i w = frobenius^i(w) S^i and frobenius^2 = id
        y_frob = [w.frobenius() for w in y.ds]
        out = [WittElem(digit_prec(N, k), 0) for k in range(N)]
        for i in range(N):
            wi = x.ds[i]
            if wi.is_zero():
                continue
            src = y_frob if i % 2 else y.ds
            for j in range(N - i):
                out[i + j] = out[i + j] + wi * src[j]
        return OrderElem(N, out)

    def scale(self, w: WittElem) -> "OrderElem":
        """Left multiplication by a Witt scalar."""
        return OrderElem(self.N, [w * d for d in self.ds])

    def scale_rational(self, q: Fraction) -> "OrderElem":
        """Multiply by a rational with denominator prime to 3."""
        if q.denominator % 3 == 0:
            raise ZeroDivisionError("denominator is not a 3-adic unit")
        out = []
        for i, d in enumerate(self.ds):
            m = 3 ** d.e
            out.append(d.scale(q.numerator % m).scale(inv_mod(q.denominator, m)))
        return OrderElem(self.N, out)

    def __pow__(self, n: int) -> "OrderElem":
        if n < 0:
            return order_invert(self) ** (-n)
        acc, base = OrderElem.one(self.N), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return all(d.is_zero() for d in self.ds)

    def is_unit(self) -> bool:
        return self.ds[0].is_unit()

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderElem) and self.N == other.N and self.ds == other.ds

    def __hash__(self):
        return hash((self.N, self.ds))

    def __repr__(self):
        terms = []
        for i, d in enumerate(self.ds):
            if d.is_zero():
                continue
            c = f"({d.c0}+{d.c1}t)" if d.c1 else str(d.c0)
            terms.append(c if i == 0 else f"{c}*S^{i}")
        return " + ".join(terms) if terms else "0"

    # -- digit expansion with Teichmueller digits

    def teich_digits(self) -> list[F9Elem]:
        """The digits x_i of the canonical expansion sum tau(x_i) S^i."""
        return [d.residue() for d in self.ds]

    def to_json(self) -> dict:
        return {
            "sprec": self.N,
            "digits": [[d.c0, d.c1, d.e] for d in self.ds],
            "teich_digits": [[x.a0, x.a1] for x in self.teich_digits()],
        }


# ---------------------------------------------------------------------------
# group operations
# ---------------------------------------------------------------------------

def order_mul(x: OrderElem, y: OrderElem) -> OrderElem:
    return x * y


def order_invert(g: OrderElem) -> OrderElem:
    """Two-sided inverse mod S^N by Newton iteration on e - g*r."""
    if not g.is_unit():
        raise ZeroDivisionError("leading digit is not a unit")
    N = g.N
    one = OrderElem.one(N)
    r = OrderElem.from_witt(g.ds[0].inverse(), N)
    for _ in range(max(1, N.bit_length() + 1)):
        r = r + r * (one - g * r)
    assert (g * r - one).is_zero()
    return r


def commutator(x: OrderElem, y: OrderElem) -> OrderElem:
    return x * y * order_invert(x) * order_invert(y)


def omega_elem(N: int) -> OrderElem:
    return OrderElem.from_witt(omega_hat(digit_prec(N, 0)), N)


def element_a(N: int) -> OrderElem:
    """a = -(1/2)(1 + omega_hat S), an order-3 element of norm 1."""
    e0, e1 = digit_prec(N, 0), digit_prec(N, 1) if N > 1 else 1
    half = WittElem(e0, inv_mod(2, 3 ** e0))
    ds = [-half]
    if N > 1:
        ds.append((-WittElem(e1, inv_mod(2, 3 ** e1))) * omega_hat(e1))
    return OrderElem(N, ds)


def element_b_exact(N: int) -> OrderElem:
    """Closed form (1/4)(1 + 3 omega^2 + (omega + omega^3) S)."""
    e0 = digit_prec(N, 0)
    q = WittElem(e0, inv_mod(4, 3 ** e0))
    w = omega_hat(e0)
    ds = [q * (WittElem(e0, 1) + (w * w).scale(3))]
    if N > 1:
        e1 = digit_prec(N, 1)
        w1 = omega_hat(e1)
        ds.append(WittElem(e1, inv_mod(4, 3 ** e1)) * (w1 + w1 ** 3))
    return OrderElem(N, ds)


def element_c_exact(N: int) -> OrderElem:
    """Closed form -(1/8)(1 + 6 omega^2 - 3 omega S)."""
    e0 = digit_prec(N, 0)
    q = WittElem(e0, -inv_mod(8, 3 ** e0))
    w = omega_hat(e0)
    ds = [q * (WittElem(e0, 1) + (w * w).scale(6))]
    if N > 1:
        e1 = digit_prec(N, 1)
        ds.append(WittElem(e1, -inv_mod(8, 3 ** e1)) * omega_hat(e1).scale(-3))
    return OrderElem(N, ds)


def named_element(name: str, N: int) -> OrderElem:
    """The elements a, b = [a,omega], c = [a,b], d = [b,c], omega, e."""
    if name in ("e", "1"):
        return OrderElem.one(N)
    if name == "omega":
        return omega_elem(N)
    if name == "a":
        return element_a(N)
    if name == "b":
        return commutator(element_a(N), omega_elem(N))
    if name == "c":
        return commutator(element_a(N), named_element("b", N))
    if name == "d":
        return commutator(named_element("b", N), named_element("c", N))
    raise ValueError(f"unknown element {name!r}")


# ---------------------------------------------------------------------------
# filtration and graded Lie structure
# ---------------------------------------------------------------------------

class GrClass:
    """A class in the filtration quotient at level halves/2, with F9 value."""

    __slots__ = ("halves", "coeff")

    def __init__(self, halves: int, coeff: F9Elem):
        object.__setattr__(self, "halves", halves)
        object.__setattr__(self, "coeff", coeff)

    def __setattr__(self, *a):
        raise AttributeError("GrClass is immutable")

    @property
    def level(self) -> Fraction:
        return Fraction(self.halves, 2)

    def __eq__(self, other):
        return (isinstance(other, GrClass) and self.halves == other.halves
                and self.coeff == other.coeff)

    def __repr__(self):
        return f"GrClass(level={self.level}, coeff={self.coeff})"


def filtration_degree(g: OrderElem) -> GrClass:
    """Least k with g != 1 mod S^(k+1), and the leading F9 digit.

    Requires g = 1 mod S; raises if g is 1 to the available precision.
    """
    digits = g.teich_digits()
    if digits[0] != F9Elem(1):
        raise ValueError("element does not reduce to 1 mod S")
    for k in range(1, g.N):
        if not digits[k].is_zero():
            return GrClass(k, digits[k])
    raise ValueError("indistinguishable from the identity at this precision")


def gr_bracket(x: GrClass, y: GrClass) -> GrClass:
    """Lie bracket on the associated graded: a*b^(3^k) - b*a^(3^l)."""
    a, b = x.coeff, y.coeff
    val = a * b ** (3 ** x.halves) - b * a ** (3 ** y.halves)
    return GrClass(x.halves + y.halves, val)


def gr_p_power(x: GrClass) -> GrClass:
    """The cube map on the graded; the level jumps by min(2, 2*halves)/2."""
    a = x.coeff
    q = 3 ** x.halves
    if x.halves < 1:
        raise ValueError("filtration levels start at 1/2")
    if x.halves == 1:
        return GrClass(3, a + a ** (1 + q + q * q))
    return GrClass(x.halves + 2, a)


# ---------------------------------------------------------------------------
# reduced determinant and subgroup tests
# ---------------------------------------------------------------------------

def reduced_det(g: OrderElem, e: int) -> WittElem:
    """det of right multiplication on the basis {1, S}: x x^phi - 3 y y^phi.

    Here g = x + y S with x, y in W, recovered from the S-digits via 3 = S^2.
    Needs N >= 2e.
    """
    if g.N < 2 * e:
        raise ValueError(f"need S-precision >= {2 * e} for det mod 3^{e}")
    x = WittElem(e, 0)
    y = WittElem(e, 0)
    for i, d in enumerate(g.ds):
        w = WittElem(e, d.c0 * 3 ** (i // 2), d.c1 * 3 ** (i // 2))
        if i % 2 == 0:
            x = x + w
        else:
            y = y + w
    det = x * x.frobenius() - (y * y.frobenius()).scale(3)
    assert det.c1 == 0, "reduced determinant must be Galois-invariant"
    return det


def is_norm_one(g: OrderElem, e: int | None = None) -> bool:
    """Finite-precision test for membership in the norm-one subgroup.

    The reduced norm quotients by the maximal finite subgroup {+-1} of
    Z_3^x, so the kernel test is det = +-1 mod 3^e.
    """
    if e is None:
        e = max(1, g.N // 2)
    det = reduced_det(g, e)
    m = 3 ** e
    return det.c1 == 0 and det.c0 % m in (1 % m, (-1) % m)


def is_in_K(g: OrderElem) -> bool:
    """Membership in the torsion-free subgroup: the gr_(1/2) digit lies in F3."""
    digits = g.teich_digits()
    if digits[0] != F9Elem(1):
        return False
    if g.N < 2:
        raise ValueError("need S-precision >= 2")
    return digits[1].in_f3() and is_norm_one(g)
