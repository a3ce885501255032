"""The p-typical formal group law of the universal deformation at p = 3.

The logarithm coefficients are solved from the Araki relation
3*lam_k = sum_i lam_i v_{k-i}^(3^i) with v_0 = 3, v_1, v_2 the only
nonzero generators; after the degree-zero rescaling the law lives over
Z_3[[u1]] (v_1 becomes u1 and v_2 becomes 1).

Everything on the rational side is computed with exact ``Fraction``
arithmetic; 3-integrality of assembled series is asserted before any
reduction mod (3^e, u1^K).  The reduced two-variable coefficient table
drives all later compositions, including the [3]-series and the conjugation
equation solver in ``stabaction``.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import UPoly, WittElem, inv_mod

MAX_LAMBDA = 4


# ---------------------------------------------------------------------------
# rational polynomials in u1 (sparse, truncated)
# ---------------------------------------------------------------------------

def rp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def rp_mul(a: dict, b: dict, K: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j >= K:
                continue
            k = i + j
            s = out.get(k, 0) + x * y
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def rp_scale(a: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def rp_is_integral(a: dict) -> bool:
    return all(v.denominator % 3 != 0 for v in a.values())


def rp_reduce(a: dict, e: int, K: int) -> UPoly:
    m = 3 ** e
    coeffs = [0] * K
    for j, v in a.items():
        if j >= K:
            continue
        if v.denominator % 3 == 0:
            raise ArithmeticError(f"non-integral coefficient {v} at u1^{j}")
        coeffs[j] = v.numerator * inv_mod(v.denominator, m) % m
    return UPoly.from_coeffs(coeffs, e, K)


# ---------------------------------------------------------------------------
# Araki logarithm coefficients
# ---------------------------------------------------------------------------

def araki_lambda(k: int) -> dict:
    """lambda_k as a polynomial in v1, v2 over Q, keys (a, b) for v1^a v2^b."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > MAX_LAMBDA:
        raise ValueError(f"logarithm coefficients are only kept up to k = {MAX_LAMBDA}")
    lams: list[dict] = [{(0, 0): Fraction(1)}]
    for n in range(1, k + 1):
        rhs: dict = {}
        if n <= 2:
            key = (1, 0) if n == 1 else (0, 1)
            rhs[key] = Fraction(1)
        for i in range(1, n):
            j = n - i
            if j > 2:
                continue
            p = 3 ** i
            key = (p, 0) if j == 1 else (0, p)
            for (a, b), v in lams[i].items():
                kk = (a + key[0], b + key[1])
                rhs[kk] = rhs.get(kk, Fraction(0)) + v
        c = Fraction(1, 3 - 3 ** (3 ** n))
        lams.append({kk: v * c for kk, v in rhs.items()})
    return lams[k]


def lambda_u1(k: int, K: int) -> dict:
    """lambda_k after v1 -> u1, v2 -> 1, as a rational u1-polynomial."""
    out: dict = {}
    for (a, _b), v in araki_lambda(k).items():
        if a >= K:
            continue
        s = out.get(a, Fraction(0)) + v
        if s:
            out[a] = s
        else:
            out.pop(a, None)
    return out


# ---------------------------------------------------------------------------
# rational multivariate series
# ---------------------------------------------------------------------------

class RatSeries:
    """Truncated series over Q[u1]/(u1^K) in nvars symbols, total degree < D+1."""

    __slots__ = ("nvars", "D", "K", "terms")

    def __init__(self, nvars: int, D: int, K: int, terms: dict | None = None):
        t = {}
        for exps, poly in (terms or {}).items():
            if sum(exps) <= D and poly:
                t[exps] = poly
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *a):
        raise AttributeError("RatSeries is immutable")

    @staticmethod
    def variable(i: int, nvars: int, D: int, K: int) -> "RatSeries":
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return RatSeries(nvars, D, K, {exps: {0: Fraction(1)}})

    @staticmethod
    def monomial(poly: dict, exps: tuple, nvars: int, D: int, K: int) -> "RatSeries":
        return RatSeries(nvars, D, K, {exps: dict(poly)})

    def __add__(self, other: "RatSeries") -> "RatSeries":
        t = dict(self.terms)
        for exps, poly in other.terms.items():
            t[exps] = rp_add(t.get(exps, {}), poly)
            if not t[exps]:
                del t[exps]
        return RatSeries(self.nvars, self.D, self.K, t)

    def __mul__(self, other: "RatSeries") -> "RatSeries":
        t: dict = {}
        for e1, p1 in self.terms.items():
            d1 = sum(e1)
            for e2, p2 in other.terms.items():
                if d1 + sum(e2) > self.D:
                    continue
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = rp_mul(p1, p2, self.K)
                if prod:
                    t[exps] = rp_add(t.get(exps, {}), prod)
                    if not t[exps]:
                        del t[exps]
        return RatSeries(self.nvars, self.D, self.K, t)

    def scale(self, c: Fraction) -> "RatSeries":
        return RatSeries(self.nvars, self.D, self.K,
                         {e: rp_scale(p, c) for e, p in self.terms.items()})

    def scale_poly(self, poly: dict) -> "RatSeries":
        return RatSeries(self.nvars, self.D, self.K,
                         {e: rp_mul(p, poly, self.K) for e, p in self.terms.items()})

    def __pow__(self, n: int) -> "RatSeries":
        acc = RatSeries(self.nvars, self.D, self.K,
                        {(0,) * self.nvars: {0: Fraction(1)}})
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def coeff(self, exps: tuple) -> dict:
        return dict(self.terms.get(exps, {}))

    def is_integral(self) -> bool:
        return all(rp_is_integral(p) for p in self.terms.values())

    def assert_integral(self) -> "RatSeries":
        for e, p in self.terms.items():
            if not rp_is_integral(p):
                raise ArithmeticError(f"non-3-integral coefficient at {e}: {p}")
        return self

    def reduce(self, e: int) -> "MSeries":
        terms = {}
        for exps, poly in self.terms.items():
            up = rp_reduce(poly, e, self.K)
            if not up.is_zero():
                terms[exps] = up
        return MSeries(e, self.K, self.nvars, self.D, terms)


def log_g2(D: int, K: int) -> RatSeries:
    """log(x) = sum lambda~_k x^(3^k), one variable."""
    terms = {}
    k = 0
    while 3 ** k <= D and k <= MAX_LAMBDA:
        poly = lambda_u1(k, K)
        if poly:
            terms[(3 ** k,)] = poly
        k += 1
    return RatSeries(1, D, K, terms)


_EXP_CACHE: dict = {}


def exp_g2(D: int, K: int) -> RatSeries:
    """Compositional inverse of the logarithm, solved degree by degree."""
    if (D, K) in _EXP_CACHE:
        return _EXP_CACHE[(D, K)]
    lams = {}
    k = 1
    while 3 ** k <= D and k <= MAX_LAMBDA:
        lams[3 ** k] = lambda_u1(k, K)
        k += 1
    coeffs: dict = {(1,): {0: Fraction(1)}}
    for d in range(2, D + 1):
        # log(exp(y)) = y: at degree d the unknown b_d appears once, so it
        # must cancel the contribution of the lower coefficients
        cur = RatSeries(1, d, K, coeffs)
        defect: dict = {}
        for q, lam in lams.items():
            if q > d:
                continue
            defect = rp_add(defect, rp_mul(lam, (cur ** q).coeff((d,)), K))
        if defect:
            coeffs[(d,)] = rp_scale(defect, Fraction(-1))
    out = RatSeries(1, D, K, coeffs)
    _EXP_CACHE[(D, K)] = out
    return out


def compose_log(arg: RatSeries) -> RatSeries:
    """log applied to a series with zero constant term."""
    out = RatSeries(arg.nvars, arg.D, arg.K, {})
    k = 0
    while 3 ** k <= arg.D and k <= MAX_LAMBDA:
        poly = lambda_u1(k, arg.K)
        if poly:
            out = out + (arg ** (3 ** k)).scale_poly(poly)
        k += 1
    return out


def compose_exp(arg: RatSeries) -> RatSeries:
    """exp applied to a series with zero constant term, by Horner."""
    ex = exp_g2(arg.D, arg.K)
    acc = RatSeries(arg.nvars, arg.D, arg.K, {})
    for d in range(arg.D, 0, -1):
        b = ex.coeff((d,))
        acc = acc * arg
        if b:
            acc = acc + RatSeries(arg.nvars, arg.D, arg.K,
                                  {(0,) * arg.nvars: b})
    return acc * arg


def formal_sum_exact(args: list[RatSeries], D: int, K: int) -> RatSeries:
    """exp(sum of logs); exact, with the integrality assertion left to callers."""
    if not args:
        raise ValueError("formal sum needs at least one argument")
    total = RatSeries(args[0].nvars, D, K, {})
    for a in args:
        total = total + compose_log(RatSeries(a.nvars, D, K, a.terms))
    return compose_exp(total)


# ---------------------------------------------------------------------------
# reduced series engine
# ---------------------------------------------------------------------------

class MSeries:
    """Truncated series over (W/3^e)[u1]/(u1^K) in nvars symbols."""

    __slots__ = ("e", "K", "nvars", "D", "terms")

    def __init__(self, e: int, K: int, nvars: int, D: int, terms: dict | None = None):
        t = {}
        for exps, up in (terms or {}).items():
            if sum(exps) <= D and not up.is_zero():
                t[exps] = up
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *a):
        raise AttributeError("MSeries is immutable")

    @staticmethod
    def zero(e, K, nvars, D):
        return MSeries(e, K, nvars, D)

    @staticmethod
    def variable(i, nvars, e, K, D, coeff: UPoly | None = None):
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        c = coeff if coeff is not None else UPoly.one(e, K)
        return MSeries(e, K, nvars, D, {exps: c})

    def __add__(self, other: "MSeries") -> "MSeries":
        t = dict(self.terms)
        for exps, up in other.terms.items():
            if exps in t:
                s = t[exps] + up
                if s.is_zero():
                    del t[exps]
                else:
                    t[exps] = s
            else:
                t[exps] = up
        return MSeries(self.e, self.K, self.nvars, self.D, t)

    def __sub__(self, other: "MSeries") -> "MSeries":
        return self + other.neg()

    def neg(self) -> "MSeries":
        return MSeries(self.e, self.K, self.nvars, self.D,
                       {e: -u for e, u in self.terms.items()})

    def __mul__(self, other: "MSeries") -> "MSeries":
        t: dict = {}
        D = self.D
        items2 = [(sum(e2), e2, p2) for e2, p2 in other.terms.items()]
        for e1, p1 in self.terms.items():
            d1 = sum(e1)
            for d2, e2, p2 in items2:
                if d1 + d2 > D:
                    continue
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = p1 * p2
                if prod.is_zero():
                    continue
                if exps in t:
                    s = t[exps] + prod
                    if s.is_zero():
                        del t[exps]
                    else:
                        t[exps] = s
                else:
                    t[exps] = prod
        return MSeries(self.e, self.K, self.nvars, self.D, t)

    def scale(self, c: UPoly) -> "MSeries":
        if c.is_zero():
            return MSeries.zero(self.e, self.K, self.nvars, self.D)
        return MSeries(self.e, self.K, self.nvars, self.D,
                       {e: u * c for e, u in self.terms.items()})

    def scale_int(self, n: int) -> "MSeries":
        return MSeries(self.e, self.K, self.nvars, self.D,
                       {e: u.scale_int(n) for e, u in self.terms.items()})

    def pow3(self) -> "MSeries":
        """Cube; at e = 1 the freshman's dream makes this coefficientwise."""
        if self.e == 1:
            t = {}
            for exps, up in self.terms.items():
                e3 = tuple(3 * a for a in exps)
                if sum(e3) <= self.D:
                    c = up.freshman_cube()
                    if not c.is_zero():
                        t[e3] = c
            return MSeries(self.e, self.K, self.nvars, self.D, t)
        return self * self * self

    def __pow__(self, n: int) -> "MSeries":
        if n == 3:
            return self.pow3()
        acc = None
        base = self
        while n:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if n:
                base = base * base
        if acc is None:
            raise ValueError("power 0 of a series has no constant model here")
        return acc

    def coeff(self, exps: tuple) -> UPoly:
        return self.terms.get(exps, UPoly.zero(self.e, self.K))

    def valdeg(self) -> int:
        return min((sum(e) for e in self.terms), default=self.D + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, D: int) -> "MSeries":
        return MSeries(self.e, self.K, self.nvars, D,
                       {e: u for e, u in self.terms.items() if sum(e) <= D})

    def __eq__(self, other):
        return (isinstance(other, MSeries) and self.e == other.e and self.K == other.K
                and self.nvars == other.nvars and self.terms == other.terms)

    def __repr__(self):
        items = sorted(self.terms.items())
        return " + ".join(f"[{p!r}]*x^{e}" for e, p in items[:8]) + (
            " + ..." if len(items) > 8 else "") if items else "0"


# ---------------------------------------------------------------------------
# the reduced coefficient table
# ---------------------------------------------------------------------------

_EXACT_F: dict = {}
_REDUCED_F: dict = {}


def table_degree(e: int) -> int:
    # arguments of valuation >= 3 need i+j <= 28 at x-degree 82; the
    # 3-divisible argument of the [3]-series adds one row per extra 3-digit
    return 28 + max(0, e - 2)


def exact_f(DT: int, K: int) -> RatSeries:
    """x +_G y as an exact two-variable series, cached."""
    key = (DT, K)
    if key not in _EXACT_F:
        x = RatSeries.variable(0, 2, DT, K)
        y = RatSeries.variable(1, 2, DT, K)
        f = formal_sum_exact([x, y], DT, K).assert_integral()
        _EXACT_F[key] = f
    return _EXACT_F[key]


class FglTable:
    """Mixed coefficients c_ij of x +_G y reduced mod (3^e, u1^K)."""

    __slots__ = ("e", "K", "DT", "coeffs")

    def __init__(self, e: int, K: int, DT: int, coeffs: dict):
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "DT", DT)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("FglTable is immutable")

    def covers(self, i: int, j: int) -> bool:
        return i + j <= self.DT

    def subst_u1(self, v: UPoly) -> "FglTable":
        """The same law with the deformation parameter u1 replaced by v."""
        return FglTable(self.e, self.K, self.DT,
                        {ij: c.subst(v) for ij, c in self.coeffs.items()})


def fgl_table(e: int, K: int, DT: int | None = None) -> FglTable:
    if DT is None:
        DT = table_degree(e)
    key = (e, K, DT)
    if key not in _REDUCED_F:
        f = exact_f(DT, max(K, 1))
        coeffs = {}
        for exps, poly in f.terms.items():
            i, j = exps
            if i >= 1 and j >= 1:
                up = rp_reduce(poly, e, K)
                if not up.is_zero():
                    coeffs[(i, j)] = up
        _REDUCED_F[key] = FglTable(e, K, DT, coeffs)
    return _REDUCED_F[key]


def compose_fgl(table: FglTable, A: MSeries, B: MSeries) -> MSeries:
    """A +_G B for series with zero constant term."""
    D = A.D
    out = A + B
    va, vb = A.valdeg(), B.valdeg()
    if va < 1 or vb < 1:
        raise ValueError("formal sum arguments must have zero constant term")
    apows = [None, A]
    bpows = [None, B]
    i = 1
    while True:
        Ai = apows[i]
        if Ai.is_zero() or Ai.valdeg() > D - vb:
            break
        j = 1
        while True:
            Bj = bpows[j] if j < len(bpows) else None
            if Bj is None:
                Bj = bpows[j - 1] * B
                bpows.append(Bj)
            if Bj.is_zero() or Ai.valdeg() + Bj.valdeg() > D:
                break
            if not table.covers(i, j):
                raise RuntimeError(
                    f"formal group law table of degree {table.DT} is too small "
                    f"for coefficient ({i},{j})")
            c = table.coeffs.get((i, j))
            if c is not None:
                out = out + (Ai * Bj).scale(c)
            j += 1
        apows.append(Ai * A)
        i += 1
    return out


def fgl_sum_mod(args: list[MSeries], table: FglTable) -> MSeries:
    acc = args[0]
    for a in args[1:]:
        acc = compose_fgl(table, acc, a)
    return acc


def fgl_sum(args: list[RatSeries], e: int, D: int, K: int) -> MSeries:
    """Exact formal sum, integrality-checked, then reduced mod (3^e, u1^K)."""
    return formal_sum_exact(args, D, K).assert_integral().reduce(e)


def three_series(e: int, D: int, K: int) -> MSeries:
    """[3](x) = 3x +_G u1 x^3 +_G x^9 over (W/3^e)[u1]/(u1^K)."""
    table = fgl_table(e, K)
    x3 = MSeries(e, K, 1, D, {(1,): UPoly.const(WittElem(e, 3), K)})
    xu = MSeries(e, K, 1, D, {(3,): UPoly.u1(e, K)})
    x9 = MSeries(e, K, 1, D, {(9,): UPoly.one(e, K)})
    return fgl_sum_mod([x3, xu, x9], table)


def three_series_log_oracle(e: int, D: int, K: int) -> MSeries:
    """Independent route: exp(3 log x), exact then reduced."""
    x = RatSeries.variable(0, 1, D, K)
    return compose_exp(compose_log(x).scale(Fraction(3))).assert_integral().reduce(e)


def check_8i1_structure(D: int, e: int = 1) -> dict:
    """Mod (3, u1) the mixed part of x +_G y sits in total degrees 1 mod 8.

    Returns a report dict; ``ok`` is False if any coefficient violates the
    degree pattern or a pure power of one variable appears.
    """
    f = exact_f(max(D, table_degree(e)), 1)
    offending = []
    blocks = set()
    for (i, j), poly in f.terms.items():
        if i + j > D:
            continue
        red = rp_reduce(poly, 1, 1)
        if red.is_zero():
            continue
        if (i, j) in ((1, 0), (0, 1)):
            continue
        if i == 0 or j == 0:
            offending.append((i, j, "pure power"))
            continue
        if (i + j) % 8 != 1:
            offending.append((i, j, "degree not 1 mod 8"))
        else:
            blocks.add(i + j)
    return {"ok": not offending, "offending": offending,
            "blocks": sorted(blocks), "degree": D}
