"""Action of stabilizer group elements on the deformation ring.

For a unit g of the maximal order, the isomorphism carrying the pushed-
forward formal group law back to the universal one is h_g(x) = sum^G
t_i(g) x^(3^i).  The coefficient series t_i are solved here from the
conjugation equation

    h_g([3]_{g_* G}(x)) = [3]_G(h_g(x))

by a fixed-point sweep: the x^(3^(i+2))-coefficient of the residual is, up
to a unit, the defect of t_i, so subtracting it converges (3, u1)-adically.
The action of g on u1 is eliminated exactly via
g_*(u1) = t_0^2 u1 - 24 t_1 t_0^{-1}, the x^3-coefficient comparison.

Each solved t_i carries a certified u1-precision derived from how errors in
the seed digits propagate through the coefficient equations; the residual is
checked to those windows coefficient by coefficient.

The second half of the module realizes the diagonal action on the truncated
module (E_2)_*/(3^e) together with the semilinear omega/phi actions, the
sign-character averaging projector, and the augmentation-ideal filtration
probes.
"""

from __future__ import annotations

from .coeff import (
    F9Elem,
    UPoly,
    WittElem,
    inv_mod,
    omega_hat,
    teichmuller,
)
from .fgl import FglTable, MSeries, fgl_table
from .order import OrderElem, named_element, order_invert


# ---------------------------------------------------------------------------
# the conjugation-equation solver
# ---------------------------------------------------------------------------

def cert_chain(K: int, m: int) -> list[int]:
    """Certified u1-precision of t_0..t_m with t_m known only mod u1."""
    certs = [0] * (m + 1)
    certs[m] = 1
    for i in range(m - 1, -1, -1):
        certs[i] = min(K, 3 * certs[i + 1] + 1, certs[i + 1] + 3 ** (i + 1))
    return certs


def choose_m(K: int) -> int:
    for m in range(1, 5):
        if cert_chain(K, m)[0] >= K:
            return m
    raise ValueError(f"u1-precision {K} is beyond the supported expansion order")


class TiExpansion:
    """Solved action series of one group element."""

    __slots__ = ("digits", "e", "K", "m", "t", "U", "certs")

    def __init__(self, digits, e, K, m, t, U, certs):
        object.__setattr__(self, "digits", tuple(digits))
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "t", tuple(t))
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "certs", tuple(certs))

    def __setattr__(self, *a):
        raise AttributeError("TiExpansion is immutable")

    @property
    def t0(self) -> UPoly:
        return self.t[0]

    @property
    def t1(self) -> UPoly:
        return self.t[1]


class SolveError(RuntimeError):
    pass


_TI_CACHE: dict = {}


def _exact_u_action(t0: UPoly, t1: UPoly) -> UPoly:
    """g_*(u1) = t_0^2 u1 - 24 t_1 t_0^{-1} (exact at every precision)."""
    e, K = t0.e, t0.K
    out = (t0 * t0).shift(1)
    if e > 1:
        out = out - (t1 * t0.inverse()).scale_int(24)
    return out


def solve_ti(g: OrderElem, e: int, K: int, m: int | None = None) -> TiExpansion:
    """Solve the t_i(g) from the conjugation equation mod (3^e, u1^K)."""
    if not g.is_unit():
        raise ValueError("the action series only exist for units")
    if m is None:
        m = choose_m(K)
    if e > 1 and m > 2:
        raise ValueError(
            "expansion order > 2 is only supported mod 3; lower the u1-precision "
            "for higher 3-adic precision")
    digits = g.teich_digits()
    if g.N < 2 * (m + 1):
        raise ValueError(f"need S-precision >= {2 * (m + 1)} to read {m + 1} digits")
    key = (tuple(digits[: m + 1]), e, K, m)
    if key in _TI_CACHE:
        return _TI_CACHE[key]

    D = 3 ** (m + 1) + 1
    table = fgl_table(e, K)
    u1 = UPoly.u1(e, K)
    t = [UPoly.const(teichmuller(digits[i], e), K) for i in range(m + 1)]

    def build(tv):
        U = _exact_u_action(tv[0], tv[1])
        tableU = table.subst_u1(U)
        x = MSeries(e, K, 1, D, {(1,): UPoly.one(e, K)})
        args = [x.scale_int(3),
                MSeries(e, K, 1, D, {(3,): U}),
                MSeries(e, K, 1, D, {(9,): UPoly.one(e, K)})]
        w = _fold(tableU, args)
        wp = [w]
        for _ in range(m):
            wp.append(wp[-1].pow3())
        lhs = _fold(table, [wp[i].scale(tv[i]) for i in range(m + 1)])
        # mod 3 the terms 3z vanish and cubes are coefficientwise, so the
        # composition for z only needs degrees up to D/3
        zdeg = D if e > 1 else D // 3 + 1
        z = _fold(table, [MSeries(e, K, 1, zdeg, {(3 ** i,): tv[i]})
                          for i in range(m + 1) if 3 ** i <= zdeg])
        z = MSeries(e, K, 1, D, z.terms)
        rhs = _fold(table, [z.scale_int(3), z.pow3().scale(u1), z.pow3().pow3()])
        return lhs - rhs, w, wp

    max_sweeps = K + 2 * e + m + 12
    for sweep in range(max_sweeps):
        phi, w, wp = build(t)
        new = list(t)
        for i in range(m):
            c = phi.coeff((3 ** (i + 2),))
            if not c.is_zero():
                new[i] = new[i] - c
        if new == t:
            break
        t = new
    else:
        phi, w, wp = build(t)
        bad = [(d, repr(p)) for (d,), p in sorted(phi.terms.items())][:3]
        raise SolveError(f"conjugation equation did not stabilize; residual {bad}")

    certs = cert_chain(K, m)
    phi, w, wp = build(t)
    update_degrees = {3 ** (i + 2) for i in range(m)}
    for (d,), p in phi.terms.items():
        if d in update_degrees:
            if not p.is_zero():
                raise SolveError(f"pinned coefficient x^{d} did not vanish")
            continue
        window = K
        for i in range(m + 1):
            if d < 3 ** (i + 1):
                continue
            window = min(window, 3 * certs[i] + 1)
            wc = wp[i].coeff((d,))
            if not wc.is_zero():
                window = min(window, certs[i] + wc.valuation())
        # 3-adic noise of the seeds enters multiplied by 3; certify mod 3
        if not p.coerce(1, min(window, K)).is_zero():
            raise SolveError(
                f"residual x^{d} = {p!r} does not vanish to certified window {window}")

    U = _exact_u_action(t[0], t[1])
    out = TiExpansion(digits[: m + 1], e, K, m, t, U, certs)
    _TI_CACHE[key] = out
    return out


def _fold(table: FglTable, args: list[MSeries]) -> MSeries:
    from .fgl import fgl_sum_mod
    args = [a for a in args if not a.is_zero()]
    if not args:
        raise ValueError("empty formal sum")
    return fgl_sum_mod(args, table)


# ---------------------------------------------------------------------------
# displayed closed forms
# ---------------------------------------------------------------------------

def _up(coeffs: list[F9Elem], K: int) -> UPoly:
    return UPoly.from_coeffs(coeffs, 1, K)


def closed_form_ti(case: str, digits: tuple[F9Elem, F9Elem], K: int) -> dict:
    """The displayed t_i-polynomials for short elements, mod 3.

    Case "a" is for g = 1 + g1 S + g2 S^2 (t1 mod u1^4, t0 mod u1^7); case
    "b" for g = 1 + g2 S^2 + g3 S^3 (t2 mod u1^2, t1 mod u1^7, t0 mod u1^10).
    """
    one, zero = F9Elem(1), F9Elem(0)
    if case == "a":
        g1, g2 = digits
        t1 = _up([g1, g2 ** 3, -g1 ** 3, -g1 ** 6], K)
        t0 = _up([one, g1 ** 3, zero, -g1, g2 - g2 ** 3, g1 ** 3,
                  g1 ** 2 + g1 ** 6], K)
        return {"t0": t0, "t1": t1, "prec": {"t0": 7, "t1": 4}}
    if case == "b":
        g2, g3 = digits
        t2 = _up([g2, g3 ** 3], K)
        t1 = _up([zero, g2 ** 3, zero, zero, g3, g2 ** 3 - g2], K)
        t0 = _up([one, zero, zero, zero, g2 - g2 ** 3, zero, zero, -g3,
                  g2 - g2 ** 3], K)
        return {"t0": t0, "t1": t1, "t2": t2, "prec": {"t0": 10, "t1": 7, "t2": 2}}
    raise ValueError("case must be 'a' or 'b'")


def t0k_closed_form(g1: F9Elem, g2: F9Elem, k: int, K: int = 6) -> UPoly:
    """t_0(g)^k mod (3, u1^6) for g = 1 + g1 S + g2 S^2 and 3 not dividing k."""
    one, zero = F9Elem(1), F9Elem(0)
    if k % 3 == 1:
        kp = F9Elem((k - 1) // 3)
        return _up([one, g1 ** 3, zero, (kp - one) * g1,
                    kp * g1 ** 4 + g2 - g2 ** 3, g1 ** 3], K)
    if k % 3 == 2:
        kp = F9Elem((k - 2) // 3)
        return _up([one, -(g1 ** 3), g1 ** 6, (kp + one) * g1,
                    g1 ** 4 - kp * g1 ** 4 + g2 ** 3 - g2,
                    kp * g1 ** 7 - g1 ** 3 - g1 ** 3 * g2 + g1 ** 3 * g2 ** 3], K)
    raise ValueError("k must not be divisible by 3")


def t0_power(g: OrderElem, k: int, e: int, K: int) -> UPoly:
    """t_0(g)^k, negative k through inversion of the unit series."""
    t0 = solve_ti(g, e, K).t0
    return t0 ** k


# ---------------------------------------------------------------------------
# the truncated module and the diagonal action
# ---------------------------------------------------------------------------

class UModuleElem:
    """Finite sum over u-exponents of u1-coefficient series.

    Models (E_2)_*/(3^e) truncated at u1^K; u has degree -2 and u1 degree 0.
    ``prec`` is the certified u1-precision of every coefficient series.
    """

    __slots__ = ("e", "K", "terms", "prec")

    def __init__(self, e: int, K: int, terms: dict | None = None, prec: int | None = None):
        t = {}
        for k, up in (terms or {}).items():
            if not up.is_zero():
                t[k] = up
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "terms", t)
        object.__setattr__(self, "prec", K if prec is None else min(prec, K))

    def __setattr__(self, *a):
        raise AttributeError("UModuleElem is immutable")

    @staticmethod
    def monomial(coeff, l: int, k: int, e: int, K: int) -> "UModuleElem":
        """coeff * u1^l * u^k."""
        if isinstance(coeff, F9Elem):
            coeff = witt_from_f9_local(coeff, e)
        elif isinstance(coeff, int):
            coeff = WittElem(e, coeff)
        return UModuleElem(e, K, {k: UPoly.monomial(coeff.reduce_e(e), l, K)})

    @staticmethod
    def zero(e: int, K: int) -> "UModuleElem":
        return UModuleElem(e, K)

    def __add__(self, other: "UModuleElem") -> "UModuleElem":
        t = dict(self.terms)
        for k, up in other.terms.items():
            t[k] = t[k] + up if k in t else up
        return UModuleElem(self.e, self.K, t, min(self.prec, other.prec))

    def __sub__(self, other: "UModuleElem") -> "UModuleElem":
        return self + other.neg()

    def neg(self) -> "UModuleElem":
        return UModuleElem(self.e, self.K, {k: -u for k, u in self.terms.items()},
                           self.prec)

    def scale(self, c) -> "UModuleElem":
        if isinstance(c, int):
            return UModuleElem(self.e, self.K,
                               {k: u.scale_int(c) for k, u in self.terms.items()},
                               self.prec)
        if isinstance(c, F9Elem):
            c = witt_from_f9_local(c, self.e)
        return UModuleElem(self.e, self.K,
                           {k: u.scale_witt(c) for k, u in self.terms.items()},
                           self.prec)

    def __mul__(self, other: "UModuleElem") -> "UModuleElem":
        t: dict = {}
        for k1, u1p in self.terms.items():
            for k2, u2p in other.terms.items():
                k = k1 + k2
                prod = u1p * u2p
                t[k] = t[k] + prod if k in t else prod
        return UModuleElem(self.e, self.K, t, min(self.prec, other.prec))

    def pow3(self) -> "UModuleElem":
        if self.e == 1:
            return UModuleElem(self.e, self.K,
                               {3 * k: u.freshman_cube() for k, u in self.terms.items()},
                               min(3 * self.prec, self.K))
        return self * self * self

    def v1_mul(self, j: int) -> "UModuleElem":
        """Multiply by v1^j = (u1 u^-2)^j, a monomial operation."""
        return UModuleElem(self.e, self.K,
                           {k - 2 * j: u.shift(j) for k, u in self.terms.items()},
                           min(self.prec + j, self.K))

    def v1_divide(self, j: int) -> "UModuleElem":
        """Exact division by v1^j; every coefficient must vanish below u1^j."""
        for k, u in self.terms.items():
            if u.valuation() < j:
                raise ValueError(
                    f"claimed v1^{j}-divisibility fails at u^{k}: {u!r}")
        return UModuleElem(self.e, self.K,
                           {k + 2 * j: u.shift_down(j) for k, u in self.terms.items()},
                           max(0, self.prec - j))

    def u1_valuation(self) -> int:
        return min((u.valuation() for u in self.terms.values()), default=self.K)

    def coeff(self, k: int) -> UPoly:
        return self.terms.get(k, UPoly.zero(self.e, self.K))

    def truncate(self, prec: int) -> "UModuleElem":
        maskK = min(prec, self.K)
        t = {}
        for k, u in self.terms.items():
            coeffs = [u.coeff(j) for j in range(mask_len(u.K, maskK))]
            t[k] = UPoly.from_coeffs(coeffs, self.e, self.K)
        return UModuleElem(self.e, self.K, t, prec)

    def reduce_e(self, e: int) -> "UModuleElem":
        return UModuleElem(e, self.K, {k: u.coerce(e, u.K) for k, u in self.terms.items()},
                           self.prec)

    def internal_degree(self) -> int:
        degs = {-2 * k for k in self.terms}
        if len(degs) != 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def is_zero(self, prec: int | None = None) -> bool:
        p = self.prec if prec is None else min(prec, self.prec)
        return all(u.valuation() >= p for u in self.terms.values())

    def eq_mod(self, other: "UModuleElem", prec: int | None = None) -> bool:
        return (self - other).is_zero(prec)

    def __eq__(self, other):
        return (isinstance(other, UModuleElem) and self.e == other.e
                and self.K == other.K and self.terms == other.terms)

    def to_json(self) -> dict:
        return {str(k): u.to_json() for k, u in sorted(self.terms.items())}

    def __repr__(self):
        items = sorted(self.terms.items())
        return " + ".join(f"({u!r})*u^{k}" for k, u in items) if items else "0"


def mask_len(K: int, prec: int) -> int:
    return min(K, prec)


def witt_from_f9_local(x: F9Elem, e: int) -> WittElem:
    return teichmuller(x, e)


def v1_elem(e: int, K: int) -> UModuleElem:
    return UModuleElem.monomial(1, 1, -2, e, K)


# ---------------------------------------------------------------------------
# letters, words and the ring action
# ---------------------------------------------------------------------------

STAB_LETTERS = ("a", "b", "c", "d")


class ActionContext:
    """Caches solved expansions and t_0-powers for the named letters."""

    def __init__(self, e: int = 1, K: int = 16, sprec: int | None = None):
        self.e = e
        self.K = K
        self.m = choose_m(K)
        self.N = sprec if sprec is not None else max(8, 2 * (self.m + 1))
        self._elems: dict = {}
        self._ti: dict = {}
        self._pows: dict = {}

    def element(self, letter: str, exp: int = 1) -> OrderElem:
        key = (letter, exp)
        if key not in self._elems:
            g = named_element(letter, self.N)
            self._elems[key] = g if exp == 1 else order_invert(g)
        return self._elems[key]

    def ti(self, letter: str, exp: int = 1) -> TiExpansion:
        key = (letter, exp)
        if key not in self._ti:
            self._ti[key] = solve_ti(self.element(letter, exp), self.e, self.K)
        return self._ti[key]

    def t0_pow(self, letter: str, exp: int, k: int) -> UPoly:
        key = (letter, exp, k)
        if key not in self._pows:
            self._pows[key] = self.ti(letter, exp).t0 ** k
        return self._pows[key]

    # -- single letters -----------------------------------------------------

    def act_letter(self, letter: str, exp: int, mle: UModuleElem) -> UModuleElem:
        if letter == "e":
            return mle
        if letter == "w":
            return self._act_omega(mle, exp)
        if letter == "f":
            return UModuleElem(mle.e, mle.K,
                               {k: u.frobenius() for k, u in mle.terms.items()},
                               mle.prec)
        if letter in STAB_LETTERS:
            if exp not in (1, -1):
                out = mle
                base = 1 if exp > 0 else -1
                for _ in range(abs(exp)):
                    out = self.act_letter(letter, base, out)
                return out
            t = self.ti(letter, exp)
            out: dict = {}
            for k, poly in mle.terms.items():
                out[k] = poly.subst(t.U) * self.t0_pow(letter, exp, k)
            return UModuleElem(mle.e, mle.K, out, mle.prec)
        raise ValueError(f"unknown letter {letter!r}")

    def _act_omega(self, mle: UModuleElem, exp: int) -> UModuleElem:
        wh = omega_hat(mle.e)
        out: dict = {}
        for k, poly in mle.terms.items():
            coeffs = []
            for l in range(poly.K):
                power = (exp * (k + 2 * l)) % 8
                coeffs.append(poly.coeff(l) * wh ** power)
            out[k] = UPoly.from_coeffs(coeffs, mle.e, mle.K)
        return UModuleElem(mle.e, mle.K, out, mle.prec)

    def act_word(self, word: tuple, mle: UModuleElem) -> UModuleElem:
        for letter, exp in reversed(word):
            mle = self.act_letter(letter, exp, mle)
        return mle

    def act_ring(self, rho: "GroupRingElem", mle: UModuleElem) -> UModuleElem:
        out = UModuleElem(mle.e, mle.K, {}, mle.prec)
        for word, coeff in sorted(rho.words.items()):
            if coeff % 3 ** mle.e == 0:
                continue
            out = out + self.act_word(word, mle).scale(coeff)
        return out


class GroupRingElem:
    """Formal integer combination of words in the letters and inverses."""

    __slots__ = ("words",)

    def __init__(self, words: dict | None = None):
        w = {}
        for word, c in (words or {}).items():
            if c:
                w[word] = c
        object.__setattr__(self, "words", w)

    def __setattr__(self, *a):
        raise AttributeError("GroupRingElem is immutable")

    @staticmethod
    def unit() -> "GroupRingElem":
        return GroupRingElem({(): 1})

    @staticmethod
    def letter(name: str, exp: int = 1) -> "GroupRingElem":
        return GroupRingElem({((name, exp),): 1})

    def __add__(self, other):
        w = dict(self.words)
        for word, c in other.words.items():
            w[word] = w.get(word, 0) + c
        return GroupRingElem(w)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, n: int):
        return GroupRingElem({w: c * n for w, c in self.words.items()})

    def __mul__(self, other):
        w: dict = {}
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                key = w1 + w2
                w[key] = w.get(key, 0) + c1 * c2
        return GroupRingElem(w)

    def is_zero(self) -> bool:
        return not self.words

    def __repr__(self):
        def fmt(word):
            return "e" if not word else "*".join(
                f"{l}^{x}" if x != 1 else l for l, x in word)
        return " + ".join(f"{c}*{fmt(w)}" for w, c in sorted(self.words.items())) or "0"


# ---------------------------------------------------------------------------
# the averaging projector
# ---------------------------------------------------------------------------

def sd16_project(mle: UModuleElem) -> UModuleElem:
    """(1/16) sum over the semidihedral group of chi(g^-1) g, closed form.

    On a monomial c u1^l u^k the projector keeps (1/2)(c - frobenius(c)) when
    k + 2l = 4 mod 8 and kills everything else.
    """
    e = mle.e
    half = inv_mod(2, 3 ** e)
    out: dict = {}
    for k, poly in mle.terms.items():
        coeffs = []
        for l in range(poly.K):
            if (k + 2 * l) % 8 == 4:
                c = poly.coeff(l)
                coeffs.append((c - c.frobenius()).scale(half))
            else:
                coeffs.append(WittElem(e, 0))
        out[k] = UPoly.from_coeffs(coeffs, e, mle.K)
    return UModuleElem(e, mle.K, out, mle.prec)


def sd16_project_sum(ctx: ActionContext, mle: UModuleElem) -> UModuleElem:
    """The same projector as the explicit 16-term averaged sum (oracle)."""
    acc = UModuleElem(mle.e, mle.K, {}, mle.prec)
    for j in range(8):
        for f in range(2):
            sign = -1 if (j + f) % 2 else 1
            img = mle
            if f:
                img = ctx.act_letter("f", 1, img)
            if j:
                img = ctx.act_letter("w", j, img)
            acc = acc + img.scale(sign)
    return acc.scale(inv_mod(16, 3 ** mle.e))


def chi_value(j: int, f: int) -> int:
    return -1 if (j + f) % 2 else 1


# ---------------------------------------------------------------------------
# filtration probes
# ---------------------------------------------------------------------------

def augmentation_word(letter: str, exp: int = 1) -> GroupRingElem:
    return GroupRingElem.letter(letter, exp) - GroupRingElem.unit()


def filtration_probe(ctx: ActionContext, letters: list, l: int, k: int) -> dict:
    """Apply a product of augmentation-ideal factors to u1^l u^k.

    ``letters`` is a list of (name, exp) pairs; the probe applies
    prod (g_i - e) and reports the u1-support of the image together with the
    congruence class k + 2l mod 3 that controls the expected shape.
    """
    rho = GroupRingElem.unit()
    for name, exp in letters:
        rho = rho * augmentation_word(name, exp)
    mono = UModuleElem.monomial(1, l, k, ctx.e, ctx.K)
    img = ctx.act_ring(rho, mono)
    poly = img.coeff(k)
    support = [j for j in range(poly.K) if not poly.coeff(j).is_zero()]
    return {
        "r": len(letters),
        "l": l,
        "k": k,
        "class3": (k + 2 * l) % 3,
        "support": support,
        "image": img,
        "extra_uexp": sorted(set(img.terms) - {k}),
    }
