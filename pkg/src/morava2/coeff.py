"""Exact coefficient arithmetic: F3, F9 and truncated Witt vectors of F9.

F9 is presented as F3[w]/(w^2 + w - 1), so w is a primitive eighth root of
unity (w^4 = -1).  The length-e truncated Witt vectors W(F9)/3^e are
presented as (Z/3^e)[t]/(t^2 + t - 1); the canonical eighth root of unity
``omega_hat`` is the Teichmueller lift of w and is computed once per
precision.  The Frobenius is the unique ring automorphism lifting x -> x^3;
on this presentation it sends t to -1 - t.

``UPoly`` is the workhorse ring (W/3^e)[u1]/(u1^K).  Coefficients are packed
two machine words per u1-power into Python big integers so that polynomial
multiplication reduces to three big-integer multiplications.
"""

from __future__ import annotations

P = 3
MAX_E = 4

_POWS3 = [3**e for e in range(MAX_E + 2)]


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


# ---------------------------------------------------------------------------
# F9
# ---------------------------------------------------------------------------

class F9Elem:
    """Element a0 + a1*w of F9 with w^2 = 1 - w."""

    __slots__ = ("a0", "a1")

    def __init__(self, a0: int, a1: int = 0):
        object.__setattr__(self, "a0", a0 % 3)
        object.__setattr__(self, "a1", a1 % 3)

    def __setattr__(self, *a):
        raise AttributeError("F9Elem is immutable")

    def __add__(self, other: "F9Elem") -> "F9Elem":
        return F9Elem(self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other: "F9Elem") -> "F9Elem":
        return F9Elem(self.a0 - other.a0, self.a1 - other.a1)

    def __neg__(self) -> "F9Elem":
        return F9Elem(-self.a0, -self.a1)

    def __mul__(self, other: "F9Elem") -> "F9Elem":
        a0, a1, b0, b1 = self.a0, self.a1, other.a0, other.a1
        # (a0 + a1 w)(b0 + b1 w) with w^2 = 1 - w
        return F9Elem(a0 * b0 + a1 * b1, a0 * b1 + a1 * b0 - a1 * b1)

    def __pow__(self, n: int) -> "F9Elem":
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = F9_ONE, self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def frobenius(self) -> "F9Elem":
        # x -> x^3; w^3 = -1 - w
        return F9Elem(self.a0 - self.a1, -self.a1)

    def inverse(self) -> "F9Elem":
        if self.is_zero():
            raise ZeroDivisionError("0 in F9 has no inverse")
        # norm x * x^3 lies in F3
        conj = self.frobenius()
        n = (self * conj).a0 % 3
        return conj * F9Elem(inv_mod(n, 3))

    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def in_f3(self) -> bool:
        return self.a1 == 0

    def trace(self) -> int:
        # x + x^3 = 2*a0 - a1
        return (2 * self.a0 - self.a1) % 3

    def __eq__(self, other) -> bool:
        return isinstance(other, F9Elem) and self.a0 == other.a0 and self.a1 == other.a1

    def __hash__(self):
        return hash((self.a0, self.a1))

    def __repr__(self):
        return f"F9({self.a0},{self.a1})"

    def __str__(self):
        if self.a1 == 0:
            return str(self.a0)
        if self.a0 == 0:
            return f"{self.a1}w" if self.a1 != 1 else "w"
        return f"{self.a0}+{self.a1}w" if self.a1 != 1 else f"{self.a0}+w"


F9_ZERO = F9Elem(0)
F9_ONE = F9Elem(1)
OMEGA = F9Elem(0, 1)

ALL_F9 = tuple(F9Elem(a, b) for a in range(3) for b in range(3))


# ---------------------------------------------------------------------------
# Truncated Witt vectors W(F9)/3^e
# ---------------------------------------------------------------------------

class WittElem:
    """Element c0 + c1*t of (Z/3^e)[t]/(t^2 + t - 1), e >= 1."""

    __slots__ = ("e", "c0", "c1")

    def __init__(self, e: int, c0: int, c1: int = 0):
        if not 1 <= e <= MAX_E + 1:
            raise ValueError(f"3-adic precision must be in 1..{MAX_E + 1}, got {e}")
        m = _POWS3[e]
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "c0", c0 % m)
        object.__setattr__(self, "c1", c1 % m)

    def __setattr__(self, *a):
        raise AttributeError("WittElem is immutable")

    # -- precision handling: binary ops coerce to the minimum precision

    def reduce_e(self, e: int) -> "WittElem":
        if e == self.e:
            return self
        if e > self.e:
            raise ValueError("cannot raise precision of a WittElem")
        return WittElem(e, self.c0, self.c1)

    @staticmethod
    def _pair(x: "WittElem", y: "WittElem"):
        e = min(x.e, y.e)
        return x.reduce_e(e), y.reduce_e(e), e

    def __add__(self, other: "WittElem") -> "WittElem":
        x, y, e = WittElem._pair(self, other)
        return WittElem(e, x.c0 + y.c0, x.c1 + y.c1)

    def __sub__(self, other: "WittElem") -> "WittElem":
        x, y, e = WittElem._pair(self, other)
        return WittElem(e, x.c0 - y.c0, x.c1 - y.c1)

    def __neg__(self) -> "WittElem":
        return WittElem(self.e, -self.c0, -self.c1)

    def __mul__(self, other: "WittElem") -> "WittElem":
        x, y, e = WittElem._pair(self, other)
        # t^2 = 1 - t
        return WittElem(e, x.c0 * y.c0 + x.c1 * y.c1,
                        x.c0 * y.c1 + x.c1 * y.c0 - x.c1 * y.c1)

    def __pow__(self, n: int) -> "WittElem":
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = WittElem(self.e, 1), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def frobenius(self) -> "WittElem":
        # t -> -1 - t, the unique lift of x -> x^3
        return WittElem(self.e, self.c0 - self.c1, -self.c1)

    def norm(self) -> int:
        """x * frobenius(x), which lies in Z/3^e."""
        n = self * self.frobenius()
        assert n.c1 == 0
        return n.c0

    def is_unit(self) -> bool:
        return not self.residue().is_zero()

    def inverse(self) -> "WittElem":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self!r} is not a unit")
        m = _POWS3[self.e]
        return self.frobenius() * WittElem(self.e, inv_mod(self.norm(), m))

    def residue(self) -> F9Elem:
        return F9Elem(self.c0, self.c1)

    def scale(self, n: int) -> "WittElem":
        return WittElem(self.e, self.c0 * n, self.c1 * n)

    def div_int(self, n: int) -> "WittElem":
        """Divide by an integer prime to 3."""
        if n % 3 == 0:
            raise ZeroDivisionError("division by a multiple of 3")
        return self.scale(inv_mod(n, _POWS3[self.e]))

    def val3(self) -> int:
        """3-adic valuation; e for 0 (the best this truncation can certify)."""
        if self.c0 == 0 and self.c1 == 0:
            return self.e
        v = 0
        c0, c1 = self.c0, self.c1
        while c0 % 3 == 0 and c1 % 3 == 0:
            c0 //= 3
            c1 //= 3
            v += 1
        return v

    def exact_div3(self) -> "WittElem":
        """Divide by 3, dropping one 3-adic digit; requires divisibility."""
        if self.c0 % 3 or self.c1 % 3:
            raise ValueError("not divisible by 3")
        if self.e == 1:
            raise ValueError("no precision left after dividing by 3")
        return WittElem(self.e - 1, self.c0 // 3, self.c1 // 3)

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, WittElem) and self.e == other.e
                and self.c0 == other.c0 and self.c1 == other.c1)

    def __hash__(self):
        return hash((self.e, self.c0, self.c1))

    def __repr__(self):
        return f"W{self.e}({self.c0},{self.c1})"


def witt_from_f9(x: F9Elem, e: int) -> WittElem:
    """The naive lift of x (not the Teichmueller lift)."""
    return WittElem(e, x.a0, x.a1)


def teichmuller(x: F9Elem, e: int) -> WittElem:
    """The unique lift z of x with z^9 = z mod 3^e."""
    z = witt_from_f9(x, e)
    for _ in range(e + 1):
        z = z ** 9
    return z


_OMEGA_HAT: dict[int, WittElem] = {}


def omega_hat(e: int) -> WittElem:
    """Teichmueller lift of w; the canonical eighth root of unity mod 3^e."""
    if e not in _OMEGA_HAT:
        _OMEGA_HAT[e] = teichmuller(OMEGA, e)
    return _OMEGA_HAT[e]


def witt_invert(w: WittElem) -> WittElem:
    return w.inverse()


def frobenius(w: WittElem) -> WittElem:
    return w.frobenius()


# ---------------------------------------------------------------------------
# (W/3^e)[u1]/(u1^K), packed
# ---------------------------------------------------------------------------

_BITS = 32
_BASE = 1 << _BITS
_LIMB = _BASE - 1


def _normalize(n: int, K: int, m: int) -> int:
    out = 0
    shift = 0
    for _ in range(K):
        if n == 0:
            break
        limb = n & _LIMB
        if limb:
            out |= (limb % m) << shift
        n >>= _BITS
        shift += _BITS
    return out


class UPoly:
    """Element of (W/3^e)[u1]/(u1^K); immutable, always normalized."""

    __slots__ = ("e", "K", "n0", "n1")

    def __init__(self, e: int, K: int, n0: int, n1: int, normalized: bool = False):
        if K < 1:
            raise ValueError("u1-precision must be >= 1")
        if not normalized:
            m = _POWS3[e]
            n0 = _normalize(n0, K, m)
            n1 = _normalize(n1, K, m)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "n1", n1)

    def __setattr__(self, *a):
        raise AttributeError("UPoly is immutable")

    # -- constructors

    @staticmethod
    def zero(e: int, K: int) -> "UPoly":
        return UPoly(e, K, 0, 0, normalized=True)

    @staticmethod
    def const(w: WittElem, K: int) -> "UPoly":
        return UPoly(w.e, K, w.c0, w.c1)

    @staticmethod
    def one(e: int, K: int) -> "UPoly":
        return UPoly(e, K, 1, 0, normalized=True)

    @staticmethod
    def u1(e: int, K: int) -> "UPoly":
        return UPoly.monomial(WittElem(e, 1), 1, K)

    @staticmethod
    def monomial(w: WittElem, j: int, K: int) -> "UPoly":
        if j >= K:
            return UPoly.zero(w.e, K)
        return UPoly(w.e, K, w.c0 << (_BITS * j), w.c1 << (_BITS * j))

    @staticmethod
    def from_coeffs(coeffs, e: int, K: int) -> "UPoly":
        n0 = n1 = 0
        for j, c in enumerate(coeffs[:K]):
            if isinstance(c, WittElem):
                c0, c1 = c.c0, c.c1
            elif isinstance(c, F9Elem):
                c0, c1 = c.a0, c.a1
            else:
                c0, c1 = int(c), 0
            n0 |= (c0 % _POWS3[e]) << (_BITS * j)
            n1 |= (c1 % _POWS3[e]) << (_BITS * j)
        return UPoly(e, K, n0, n1)

    # -- precision

    def coerce(self, e: int, K: int) -> "UPoly":
        if e == self.e and K == self.K:
            return self
        if e > self.e or K > self.K:
            raise ValueError("cannot raise precision of a UPoly")
        mask = (1 << (_BITS * K)) - 1
        m = _POWS3[e]
        return UPoly(e, K, _normalize(self.n0 & mask, K, m),
                     _normalize(self.n1 & mask, K, m))

    @staticmethod
    def _pair(x: "UPoly", y: "UPoly"):
        e, K = min(x.e, y.e), min(x.K, y.K)
        return x.coerce(e, K), y.coerce(e, K), e, K

    # -- arithmetic

    def __add__(self, other: "UPoly") -> "UPoly":
        x, y, e, K = UPoly._pair(self, other)
        return UPoly(e, K, x.n0 + y.n0, x.n1 + y.n1)

    def __sub__(self, other: "UPoly") -> "UPoly":
        x, y, e, K = UPoly._pair(self, other)
        m = _POWS3[e] - 1
        # add (3^e - 1) * y limbwise to avoid negative limbs
        return UPoly(e, K, x.n0 + m * y.n0, x.n1 + m * y.n1)

    def __neg__(self) -> "UPoly":
        m = _POWS3[self.e] - 1
        return UPoly(self.e, self.K, m * self.n0, m * self.n1)

    def __mul__(self, other: "UPoly") -> "UPoly":
        x, y, e, K = UPoly._pair(self, other)
        mask = (1 << (_BITS * K)) - 1
        p = x.n0 * y.n0
        q = x.n1 * y.n1
        r = (x.n0 + x.n1) * (y.n0 + y.n1)
        # t^2 = 1 - t: c0-part gets p + q, c1-part gets (r - p - q) - q
        n0 = (p + q) & mask
        n1 = (r - p + (_POWS3[e] - 2) * q) & mask
        return UPoly(e, K, n0, n1)

    def scale_witt(self, w: WittElem) -> "UPoly":
        return self * UPoly.const(w.reduce_e(min(w.e, self.e)), self.K)

    def scale_int(self, n: int) -> "UPoly":
        n %= _POWS3[self.e]
        return UPoly(self.e, self.K, n * self.n0, n * self.n1)

    def shift(self, j: int) -> "UPoly":
        """Multiply by u1^j."""
        if j == 0:
            return self
        if j >= self.K:
            return UPoly.zero(self.e, self.K)
        mask = (1 << (_BITS * self.K)) - 1
        return UPoly(self.e, self.K, (self.n0 << (_BITS * j)) & mask,
                     (self.n1 << (_BITS * j)) & mask, normalized=True)

    def shift_down(self, j: int) -> "UPoly":
        """Exact division by u1^j; the low coefficients must vanish."""
        if self.valuation() < j:
            raise ValueError(f"not divisible by u1^{j}")
        return UPoly(self.e, self.K, self.n0 >> (_BITS * j),
                     self.n1 >> (_BITS * j), normalized=True)

    def __pow__(self, n: int) -> "UPoly":
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = UPoly.one(self.e, self.K), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def frobenius(self) -> "UPoly":
        m = _POWS3[self.e] - 1
        return UPoly(self.e, self.K, self.n0 + m * self.n1, m * self.n1)

    def freshman_cube(self) -> "UPoly":
        """Cube at e = 1: coefficientwise Frobenius, u1-exponents tripled."""
        if self.e != 1:
            raise ValueError("freshman cube is only valid mod 3")
        f = self.frobenius()
        n0 = n1 = 0
        for j in range((self.K + 2) // 3):
            if 3 * j >= self.K:
                break
            n0 |= ((f.n0 >> (_BITS * j)) & _LIMB) << (_BITS * 3 * j)
            n1 |= ((f.n1 >> (_BITS * j)) & _LIMB) << (_BITS * 3 * j)
        mask = (1 << (_BITS * self.K)) - 1
        return UPoly(self.e, self.K, n0 & mask, n1 & mask, normalized=True)

    def subst(self, v: "UPoly") -> "UPoly":
        """Evaluate at u1 = v (constant term kept)."""
        acc = UPoly.zero(min(self.e, v.e), min(self.K, v.K))
        for j in range(self.K - 1, -1, -1):
            acc = acc * v + UPoly.const(self.coeff(j), acc.K).coerce(acc.e, acc.K)
        return acc

    def inverse(self) -> "UPoly":
        c0 = self.coeff(0)
        if not c0.is_unit():
            raise ZeroDivisionError("constant term is not a unit")
        r = UPoly.const(c0.inverse(), self.K)
        two = UPoly.one(self.e, self.K).scale_int(2)
        for _ in range(self.K.bit_length() + 2):
            r = r * (two - self * r)
        return r

    # -- inspection

    def coeff(self, j: int) -> WittElem:
        if j >= self.K:
            raise IndexError(f"u1^{j} is beyond precision {self.K}")
        return WittElem(self.e, (self.n0 >> (_BITS * j)) & _LIMB,
                        (self.n1 >> (_BITS * j)) & _LIMB)

    def coeffs(self) -> list[WittElem]:
        return [self.coeff(j) for j in range(self.K)]

    def valuation(self) -> int:
        """Least j with nonzero u1^j-coefficient; K if zero."""
        for j in range(self.K):
            if (self.n0 >> (_BITS * j)) & _LIMB or (self.n1 >> (_BITS * j)) & _LIMB:
                return j
        return self.K

    def is_zero(self) -> bool:
        return self.n0 == 0 and self.n1 == 0

    def eq_mod(self, other: "UPoly", prec: int) -> bool:
        x, y, _, K = UPoly._pair(self, other)
        prec = min(prec, K)
        mask = (1 << (_BITS * prec)) - 1
        return (x.n0 & mask) == (y.n0 & mask) and (x.n1 & mask) == (y.n1 & mask)

    def __eq__(self, other) -> bool:
        return (isinstance(other, UPoly) and self.e == other.e and self.K == other.K
                and self.n0 == other.n0 and self.n1 == other.n1)

    def __hash__(self):
        return hash((self.e, self.K, self.n0, self.n1))

    def to_json(self) -> list[list[int]]:
        return [[c.c0, c.c1] for c in self.coeffs()]

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs()):
            if c.is_zero():
                continue
            coeff = f"({c.c0}+{c.c1}t)" if c.c1 else str(c.c0)
            terms.append(coeff if j == 0 else f"{coeff}*u1^{j}")
        return " + ".join(terms) if terms else "0"
