"""Exact coefficient field: cyclotomic rationals with formal gamma variables.

Scalars live in Q(zeta_N)(gamma_1, ..., gamma_d).  The gamma variables are
formal indeterminates, which makes "generic" exact: the inner form
(gamma | m) = sum m_i gamma_i vanishes only for m = 0.  Denominators are
restricted to products of such inner forms -- every denominator produced by
the bracket, derivation and cocycle formulas has that shape -- so
canonicalization reduces to trial division by linear polynomials and never
needs a general multivariate gcd.

Cyclotomic numbers are reduced modulo the N-th cyclotomic polynomial, which
is computed by exact integer division of x^N - 1 by the lower-order
cyclotomic factors; representatives are unique, so equality is coefficient
equality.  Rational coefficients are arbitrary-precision.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .lattice import NormalFormSpec, Vector

Rat = object  # int | Fraction, kept mixed for speed
Coeffs = tuple  # coefficient vector of a cyclotomic number


class UnsupportedDenominatorError(ArithmeticError):
    """Division by a scalar whose numerator is not a product of inner forms."""


# --- cyclotomic fields -----------------------------------------------------


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact-friendly division of integer polynomials (den monic suffices here)."""
    num = list(num)
    q = [0] * (max(len(num) - len(den) + 1, 0))
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("non-exact integer polynomial division")
        f = c // den[-1]
        q[i] = f
        if f:
            for j, dc in enumerate(den):
                num[i + j] -= f * dc
    while num and num[-1] == 0:
        num.pop()
    return q, num


def _cyclotomic_poly(n: int, cache: dict = {}) -> list[int]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n in cache:
        return cache[n]
    num = [0] * n + [1]
    num[0] = -1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, _cyclotomic_poly(d))
            if rem:
                raise ArithmeticError("cyclotomic division left a remainder")
    cache[n] = num
    return num


class CyclotomicField:
    """Q(zeta_N) with elements as coefficient tuples modulo Phi_N."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("root order must be positive")
        self.N = N
        phi = _cyclotomic_poly(N)
        self.modulus = tuple(phi)
        self.degree = len(phi) - 1
        deg = self.degree
        self.zero_t: Coeffs = (0,) * deg
        self.one_t: Coeffs = (1,) + (0,) * (deg - 1)
        # reduction rows: x^(deg + j) mod Phi_N for j = 0 .. deg - 2
        rows = []
        cur = [-c for c in phi[:deg]]  # x^deg
        rows.append(tuple(cur))
        for _ in range(deg - 2):
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [c + top * r for c, r in zip(cur, rows[0])]
            rows.append(tuple(cur))
        self._red = rows
        self._zeta_cache: dict[int, Coeffs] = {}
        self._inv_cache: dict[Coeffs, Coeffs] = {}

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    # tuple-level arithmetic (hot paths)

    def add_t(self, a: Coeffs, b: Coeffs) -> Coeffs:
        return tuple(x + y for x, y in zip(a, b))

    def sub_t(self, a: Coeffs, b: Coeffs) -> Coeffs:
        return tuple(x - y for x, y in zip(a, b))

    def neg_t(self, a: Coeffs) -> Coeffs:
        return tuple(-x for x in a)

    def mul_t(self, a: Coeffs, b: Coeffs) -> Coeffs:
        deg = self.degree
        if deg == 1:
            return (a[0] * b[0],)
        conv = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:deg]
        for j in range(deg, 2 * deg - 1):
            c = conv[j]
            if c:
                row = self._red[j - deg]
                for k in range(deg):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(out)

    def scale_t(self, c, a: Coeffs) -> Coeffs:
        return tuple(c * x for x in a)

    def from_int_t(self, k) -> Coeffs:
        return (k,) + (0,) * (self.degree - 1)

    def zeta_t(self, e: int) -> Coeffs:
        """zeta_N^e as a reduced coefficient tuple."""
        e %= self.N
        cached = self._zeta_cache.get(e)
        if cached is not None:
            return cached
        deg = self.degree
        if e < deg:
            out = [0] * deg
            out[e] = 1
            result = tuple(out)
        else:
            cur = [0] * deg
            cur[deg - 1] = 1
            for _ in range(e - deg + 1):
                top = cur[deg - 1]
                cur = [0] + cur[: deg - 1]
                if top:
                    row = self._red[0]
                    cur = [c + top * r for c, r in zip(cur, row)]
            result = tuple(cur)
        self._zeta_cache[e] = result
        return result

    def is_zero_t(self, a: Coeffs) -> bool:
        return not any(a)

    def rational_t(self, a: Coeffs):
        """Fraction value if the element is rational, else None."""
        if any(a[1:]):
            return None
        v = a[0]
        return v if isinstance(v, Fraction) else Fraction(v)

    def inv_t(self, a: Coeffs) -> Coeffs:
        """Inverse modulo Phi_N via the extended Euclidean algorithm."""
        if self.is_zero_t(a):
            raise ZeroDivisionError("inverse of zero cyclotomic")
        cached = self._inv_cache.get(a)
        if cached is not None:
            return cached
        if self.degree == 1:
            out = (Fraction(1) / Fraction(a[0]),)
            self._inv_cache[a] = out
            return out
        r0 = [Fraction(c) for c in self.modulus]
        r1 = [Fraction(c) for c in a]
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]

        def strip(p):
            while p and not p[-1]:
                p.pop()
            return p

        def sub_scaled(p, q, c, shift):
            out = list(p) + [Fraction(0)] * max(0, len(q) + shift - len(p))
            for i, x in enumerate(q):
                out[i + shift] -= c * x
            return strip(out)

        r1 = strip(r1)
        while len(r1) > 1:
            while len(r0) >= len(r1):
                c = r0[-1] / r1[-1]
                shift = len(r0) - len(r1)
                s0 = sub_scaled(s0, s1, c, shift)
                r0 = sub_scaled(r0, r1, c, shift)
                if not r0:
                    break
            r0, r1 = r1, r0
            s0, s1 = s1, s0
        if not r1:
            raise ZeroDivisionError("element shares a factor with the modulus")
        # r1 is a nonzero constant: s1 / r1[0] inverts a
        inv = [c / r1[0] for c in s1]
        inv += [Fraction(0)] * (self.degree - len(inv))
        out = tuple(inv[: self.degree])
        self._inv_cache[a] = out
        return out


_FIELD_CACHE: dict[int, CyclotomicField] = {}


def cyclotomic_field(N: int) -> CyclotomicField:
    if N not in _FIELD_CACHE:
        _FIELD_CACHE[N] = CyclotomicField(N)
    return _FIELD_CACHE[N]


class Cyclotomic:
    """A value in Q(zeta_N); thin immutable wrapper over a coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: Coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    @staticmethod
    def from_int(field: CyclotomicField, k) -> "Cyclotomic":
        return Cyclotomic(field, field.from_int_t(k))

    @staticmethod
    def zeta(field: CyclotomicField, e: int = 1) -> "Cyclotomic":
        return Cyclotomic(field, field.zeta_t(e))

    def __add__(self, other):
        return Cyclotomic(self.field, self.field.add_t(self.coeffs, _coerce(self, other)))

    def __sub__(self, other):
        return Cyclotomic(self.field, self.field.sub_t(self.coeffs, _coerce(self, other)))

    def __neg__(self):
        return Cyclotomic(self.field, self.field.neg_t(self.coeffs))

    def __mul__(self, other):
        return Cyclotomic(self.field, self.field.mul_t(self.coeffs, _coerce(self, other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return Cyclotomic(self.field, self.field.sub_t(_coerce(self, other), self.coeffs))

    def inverse(self) -> "Cyclotomic":
        return Cyclotomic(self.field, self.field.inv_t(self.coeffs))

    def __truediv__(self, other):
        o = _coerce(self, other)
        return Cyclotomic(self.field, self.field.mul_t(self.coeffs, self.field.inv_t(o)))

    def __pow__(self, k: int):
        out = self.field.one_t
        base = self.coeffs
        if k < 0:
            base = self.field.inv_t(base)
            k = -k
        while k:
            if k & 1:
                out = self.field.mul_t(out, base)
            base = self.field.mul_t(base, base)
            k >>= 1
        return Cyclotomic(self.field, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_int(self.field, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.field is other.field and all(
            x == y for x, y in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.field.N, tuple(Fraction(c) for c in self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self):
        return self.field.rational_t(self.coeffs)

    def __repr__(self):
        return f"Cyc{self.field.N}{tuple(str(c) for c in self.coeffs)}"


def _coerce(ref: Cyclotomic, other) -> Coeffs:
    if isinstance(other, Cyclotomic):
        return other.coeffs
    if isinstance(other, (int, Fraction)):
        return ref.field.from_int_t(other)
    raise TypeError(f"cannot coerce {other!r} into {ref.field!r}")


# --- multivariate polynomials in the gamma variables -----------------------

Mono = tuple  # exponent vector, length d


class GammaPolynomial:
    """Polynomial in gamma_1..gamma_d with cyclotomic coefficients.

    ``terms`` maps exponent tuples to raw coefficient tuples; zero
    coefficients are never stored.
    """

    __slots__ = ("field", "d", "terms")

    def __init__(self, field: CyclotomicField, d: int, terms: dict):
        self.field = field
        self.d = d
        self.terms = terms

    # constructors

    @staticmethod
    def zero(field: CyclotomicField, d: int) -> "GammaPolynomial":
        return GammaPolynomial(field, d, {})

    @staticmethod
    def const(field: CyclotomicField, d: int, c) -> "GammaPolynomial":
        t = c.coeffs if isinstance(c, Cyclotomic) else field.from_int_t(c)
        if not any(t):
            return GammaPolynomial(field, d, {})
        return GammaPolynomial(field, d, {(0,) * d: t})

    @staticmethod
    def gamma(field: CyclotomicField, d: int, i: int) -> "GammaPolynomial":
        mono = [0] * d
        mono[i] = 1
        return GammaPolynomial(field, d, {tuple(mono): field.one_t})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GammaPolynomial") -> "GammaPolynomial":
        out = dict(self.terms)
        add = self.field.add_t
        for mono, c in other.terms.items():
            if mono in out:
                s = add(out[mono], c)
                if any(s):
                    out[mono] = s
                else:
                    del out[mono]
            else:
                out[mono] = c
        return GammaPolynomial(self.field, self.d, out)

    def __neg__(self) -> "GammaPolynomial":
        neg = self.field.neg_t
        return GammaPolynomial(self.field, self.d, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "GammaPolynomial") -> "GammaPolynomial":
        return self + (-other)

    def __mul__(self, other: "GammaPolynomial") -> "GammaPolynomial":
        out: dict = {}
        mul = self.field.mul_t
        add = self.field.add_t
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                p = mul(c1, c2)
                if mono in out:
                    s = add(out[mono], p)
                    if any(s):
                        out[mono] = s
                    else:
                        del out[mono]
                elif any(p):
                    out[mono] = p
        return GammaPolynomial(self.field, self.d, out)

    def scale_t(self, c: Coeffs) -> "GammaPolynomial":
        if not any(c):
            return GammaPolynomial.zero(self.field, self.d)
        mul = self.field.mul_t
        out = {}
        for m, x in self.terms.items():
            p = mul(c, x)
            if any(p):
                out[m] = p
        return GammaPolynomial(self.field, self.d, out)

    def scale(self, c) -> "GammaPolynomial":
        t = c.coeffs if isinstance(c, Cyclotomic) else self.field.from_int_t(c)
        return self.scale_t(t)

    def __eq__(self, other):
        if not isinstance(other, GammaPolynomial):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        sub = self.field.sub_t
        return all(not any(sub(c, other.terms[m])) for m, c in self.terms.items())

    def __hash__(self):
        return hash(
            tuple(sorted((m, tuple(Fraction(x) for x in c)) for m, c in self.terms.items()))
        )

    def coefficient(self, mono: Mono) -> Cyclotomic:
        return Cyclotomic(self.field, self.terms.get(tuple(mono), self.field.zero_t))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def leading(self) -> tuple[Mono, Coeffs]:
        mono = max(self.terms)
        return mono, self.terms[mono]

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, reverse=True):
            mono = "*".join(
                f"g{i+1}^{e}" if e > 1 else f"g{i+1}" for i, e in enumerate(m) if e
            )
            bits.append(f"({Cyclotomic(self.field, self.terms[m])!r}){mono or '1'}")
        return " + ".join(bits)


def inner_form(field: CyclotomicField, m: Vector) -> GammaPolynomial:
    """(gamma | m) = sum m_i gamma_i as a degree-1 polynomial."""
    d = len(m)
    terms = {}
    for i, mi in enumerate(m):
        if mi:
            mono = [0] * d
            mono[i] = 1
            terms[tuple(mono)] = field.from_int_t(mi)
    return GammaPolynomial(field, d, terms)


def gpoly_divmod(p: GammaPolynomial, q: GammaPolynomial):
    """Division with remainder by a single divisor, lex term order.

    When p = q * h exactly the remainder is zero and the quotient is h.
    """
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    field = p.field
    lead_mono, lead_c = q.leading()
    lead_inv = field.inv_t(lead_c)
    rem: dict = {}
    cur = dict(p.terms)
    quot: dict = {}
    while cur:
        mono = max(cur)
        c = cur.pop(mono)
        if all(a >= b for a, b in zip(mono, lead_mono)):
            qm = tuple(a - b for a, b in zip(mono, lead_mono))
            qc = field.mul_t(c, lead_inv)
            quot[qm] = field.add_t(quot.get(qm, field.zero_t), qc)
            for m2, c2 in q.terms.items():
                if m2 == lead_mono:
                    continue
                mono2 = tuple(a + b for a, b in zip(qm, m2))
                s = field.sub_t(cur.get(mono2, field.zero_t), field.mul_t(qc, c2))
                if any(s):
                    cur[mono2] = s
                elif mono2 in cur:
                    del cur[mono2]
        else:
            rem[mono] = c
    quot = {m: c for m, c in quot.items() if any(c)}
    return (
        GammaPolynomial(field, p.d, quot),
        GammaPolynomial(field, p.d, rem),
    )


# --- factoring numerators into inner forms ---------------------------------


def _primitive_vector(v: Vector) -> tuple[Vector, int]:
    """(primitive, c) with v = c * primitive, first nonzero entry positive."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    prim = tuple(x // g for x in v)
    for x in prim:
        if x > 0:
            return prim, g
        if x < 0:
            return tuple(-y for y in prim), -g
    raise AssertionError("unreachable")


def _rational_poly_gcd(ps: list[list[Fraction]]) -> list[Fraction]:
    """Monic gcd of univariate rational polynomials (ascending coefficients)."""

    def strip(p):
        while p and not p[-1]:
            p.pop()
        return p

    def pmod(a, b):
        a = list(a)
        while len(a) >= len(b) and a:
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, x in enumerate(b):
                a[i + shift] -= c * x
            strip(a)
        return a

    g: list[Fraction] = []
    for p in ps:
        p = strip([Fraction(c) for c in p])
        if not p:
            continue
        if not g:
            g = p
            continue
        a, b = g, p
        while b:
            a, b = b, pmod(a, b)
        g = a
    if g:
        lead = g[-1]
        g = [c / lead for c in g]
    return g


def _rational_roots(poly: list[Fraction]) -> list[Fraction]:
    """All rational roots of a univariate rational polynomial."""
    p = [Fraction(c) for c in poly]
    while p and not p[-1]:
        p.pop()
    if not p:
        return []
    roots = set()
    low = 0
    while not p[low]:
        low += 1
    if low:
        roots.add(Fraction(0))
        p = p[low:]
    den_lcm = 1
    for c in p:
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    ip = [int(c * den_lcm) for c in p]
    a0, al = abs(ip[0]), abs(ip[-1])

    def divisors(n):
        out = []
        i = 1
        while i * i <= n:
            if n % i == 0:
                out.append(i)
                out.append(n // i)
            i += 1
        return out

    for num in divisors(a0):
        for den in divisors(al):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                val = Fraction(0)
                for c in reversed(ip):
                    val = val * cand + c
                if val == 0:
                    roots.add(cand)
    return sorted(roots)


def _find_linear_factor(p: GammaPolynomial):
    """A primitive integer vector v with (gamma | v) dividing p, or None.

    Assumes rational coefficients.  Complete when p is a product of inner
    forms; sound in general because candidates are verified by division.
    """
    if not p.is_homogeneous():
        return None
    d = p.d
    present = sorted({i for m in p.terms for i in range(d) if m[i]})
    if not present:
        return None
    i0 = present[0]
    if all(m[i0] for m in p.terms):
        v = [0] * d
        v[i0] = 1
        return tuple(v)
    field = p.field
    top = max(m[i0] for m in p.terms)
    bmono = {
        tuple(0 if i == i0 else e for i, e in enumerate(m)): c
        for m, c in p.terms.items()
        if m[i0] == top
    }
    bpoly = GammaPolynomial(field, d, bmono)
    if bpoly.total_degree() > 0:
        f = _find_linear_factor(bpoly)
        if f is None:
            return None
        _, rem = gpoly_divmod(p, inner_form(field, f))
        return f if rem.is_zero() else None
    # all factors involve gamma_{i0}; recurse on the i0-free slice
    base = GammaPolynomial(
        field, d, {m: c for m, c in p.terms.items() if m[i0] == 0}
    )
    mu = _find_linear_factor(base)
    if mu is None:
        return None
    # substitute gamma_{i0} <- lambda * (gamma | mu); factor roots are rational
    mu_form = inner_form(field, mu)
    powers = [GammaPolynomial.const(field, d, 1)]
    for _ in range(top):
        powers.append(powers[-1] * mu_form)
    slices: dict[Mono, dict[int, Fraction]] = {}
    for m, c in p.terms.items():
        e = m[i0]
        rest = tuple(0 if i == i0 else x for i, x in enumerate(m))
        contrib = powers[e].scale_t(c)
        for m2, c2 in contrib.terms.items():
            mono = tuple(a + b for a, b in zip(rest, m2))
            r = field.rational_t(c2)
            if r is None:
                return None
            slices.setdefault(mono, {})
            slices[mono][e] = slices[mono].get(e, Fraction(0)) + r
    polys = []
    for coeffs in slices.values():
        top_e = max(coeffs)
        polys.append([coeffs.get(e, Fraction(0)) for e in range(top_e + 1)])
    g = _rational_poly_gcd(polys)
    for lam in _rational_roots(g):
        w = [0] * d
        w[i0] = lam.denominator
        for i, x in enumerate(mu):
            w[i] -= lam.numerator * x
        try:
            prim, _ = _primitive_vector(tuple(w))
        except ValueError:
            continue
        _, rem = gpoly_divmod(p, inner_form(field, prim))
        if rem.is_zero():
            return prim
    return None


def _factor_linear_fast(p: GammaPolynomial):
    """Direct split c * (gamma | v) of a homogeneous linear polynomial."""
    field = p.field
    lead_mono, lead_c = p.leading()
    lead_inv = field.inv_t(lead_c)
    ratios = []
    for i in range(p.d):
        mono = tuple(1 if j == i else 0 for j in range(p.d))
        c = p.terms.get(mono)
        if c is None:
            ratios.append(Fraction(0))
            continue
        r = field.rational_t(field.mul_t(c, lead_inv))
        if r is None:
            return None
        ratios.append(r)
    den_lcm = 1
    for r in ratios:
        den_lcm = den_lcm * r.denominator // gcd(den_lcm, r.denominator)
    ints = tuple(int(r * den_lcm) for r in ratios)
    prim, c0 = _primitive_vector(ints)
    unit = Cyclotomic(field, field.scale_t(Fraction(c0, den_lcm), lead_c))
    return unit, {prim: 1}


def factor_inner_forms(p: GammaPolynomial):
    """Write p as unit * prod (gamma | v_k) with primitive integer v_k.

    Returns (unit: Cyclotomic, factors: dict vector -> multiplicity).
    Raises UnsupportedDenominatorError when no such factorization exists.
    """
    if p.is_zero():
        raise ZeroDivisionError("cannot factor the zero polynomial")
    field = p.field
    deg = p.total_degree()
    if deg == 0:
        return Cyclotomic(field, p.terms[(0,) * p.d]), {}
    if deg == 1 and p.is_homogeneous():
        fast = _factor_linear_fast(p)
        if fast is not None:
            return fast
    _, lead_c = p.leading()
    unit_t = lead_c
    work = p.scale_t(field.inv_t(lead_c))
    for c in work.terms.values():
        if field.rational_t(c) is None:
            raise UnsupportedDenominatorError(
                "numerator is not a cyclotomic unit times a rational polynomial"
            )
    factors: dict[Vector, int] = {}
    scale = Fraction(1)
    while work.total_degree() > 0:
        if not work.is_homogeneous():
            raise UnsupportedDenominatorError(
                "numerator is not homogeneous, so not a product of inner forms"
            )
        f = _find_linear_factor(work)
        if f is None:
            raise UnsupportedDenominatorError(
                "numerator has no inner-form factorization"
            )
        q, rem = gpoly_divmod(work, inner_form(field, f))
        if not rem.is_zero():
            raise AssertionError("verified factor failed to divide")
        factors[f] = factors.get(f, 0) + 1
        work = q
    c = field.rational_t(work.terms.get((0,) * p.d, field.zero_t))
    scale *= c
    unit = Cyclotomic(field, field.scale_t(scale, unit_t))
    return unit, factors


# --- the scalar field -------------------------------------------------------


class GammaScalar:
    """num / prod (gamma | v)^mult in canonical form.

    Canonical means: denominator vectors are primitive with positive leading
    entry, sorted, and the numerator is not divisible by any of them.  Two
    scalars are equal iff their canonical representations coincide.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: GammaPolynomial, den: tuple = ()):
        self.num = num
        self.den = den

    @staticmethod
    def make(num: GammaPolynomial, den: Iterable[tuple[Vector, int]] = ()) -> "GammaScalar":
        field = num.field
        if num.is_zero():
            return GammaScalar(num, ())
        merged: dict[Vector, int] = {}
        scale = Fraction(1)
        for v, mult in den:
            if mult == 0:
                continue
            if mult < 0:
                raise ValueError("denominator multiplicities must be positive")
            if not any(v):
                raise ZeroDivisionError("(gamma | 0) denominator")
            prim, c = _primitive_vector(tuple(v))
            scale *= Fraction(c) ** mult
            merged[prim] = merged.get(prim, 0) + mult
        if scale != 1:
            num = num.scale_t(field.scale_t(Fraction(1) / scale, field.one_t))
        out: dict[Vector, int] = {}
        reducible = num.total_degree() > 0
        for v in sorted(merged):
            mult = merged[v]
            form = inner_form(field, v)
            while reducible and mult > 0:
                q, rem = gpoly_divmod(num, form)
                if rem.is_zero():
                    num = q
                    mult -= 1
                    reducible = num.total_degree() > 0
                else:
                    break
            if mult:
                out[v] = mult
        return GammaScalar(num, tuple(sorted(out.items())))

    # constructors

    @staticmethod
    def zero(field: CyclotomicField, d: int) -> "GammaScalar":
        return GammaScalar(GammaPolynomial.zero(field, d))

    @staticmethod
    def from_int(field: CyclotomicField, d: int, k) -> "GammaScalar":
        return GammaScalar(GammaPolynomial.const(field, d, k))

    @staticmethod
    def from_cyclotomic(c: Cyclotomic, d: int) -> "GammaScalar":
        return GammaScalar(GammaPolynomial.const(c.field, d, c))

    @staticmethod
    def from_poly(p: GammaPolynomial) -> "GammaScalar":
        return GammaScalar(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _den_poly(self) -> GammaPolynomial:
        field = self.num.field
        out = GammaPolynomial.const(field, self.num.d, 1)
        for v, mult in self.den:
            form = inner_form(field, v)
            for _ in range(mult):
                out = out * form
        return out

    def __add__(self, other: "GammaScalar") -> "GammaScalar":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if not self.den and not other.den:
            return GammaScalar(self.num + other.num, ())
        field = self.num.field
        a_den = dict(self.den)
        b_den = dict(other.den)
        union: dict[Vector, int] = dict(a_den)
        for v, m in b_den.items():
            union[v] = max(union.get(v, 0), m)
        num_a = self.num
        num_b = other.num
        for v, m in union.items():
            form = inner_form(field, v)
            for _ in range(m - a_den.get(v, 0)):
                num_a = num_a * form
            for _ in range(m - b_den.get(v, 0)):
                num_b = num_b * form
        return GammaScalar.make(num_a + num_b, union.items())

    def __neg__(self) -> "GammaScalar":
        return GammaScalar(-self.num, self.den)

    def __sub__(self, other: "GammaScalar") -> "GammaScalar":
        return self + (-other)

    def __mul__(self, other: "GammaScalar") -> "GammaScalar":
        if self.is_zero() or other.is_zero():
            return GammaScalar.zero(self.num.field, self.num.d)
        if not self.den and not other.den:
            return GammaScalar(self.num * other.num, ())
        merged = dict(self.den)
        for v, m in other.den:
            merged[v] = merged.get(v, 0) + m
        return GammaScalar.make(self.num * other.num, merged.items())

    def inverse(self) -> "GammaScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        field = self.num.field
        unit, factors = factor_inner_forms(self.num)
        num = GammaPolynomial.const(field, self.num.d, unit.inverse())
        for v, mult in self.den:
            form = inner_form(field, v)
            for _ in range(mult):
                num = num * form
        return GammaScalar.make(num, factors.items())

    def __truediv__(self, other: "GammaScalar") -> "GammaScalar":
        return self * other.inverse()

    def scale(self, c) -> "GammaScalar":
        return GammaScalar(self.num.scale(c), self.den)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GammaScalar.from_int(self.num.field, self.num.d, other)
        if not isinstance(other, GammaScalar):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.num, self.den))

    def as_rational(self):
        """Fraction value if the scalar is a rational constant, else None."""
        if self.den:
            return None
        if self.num.is_zero():
            return Fraction(0)
        if set(self.num.terms) != {(0,) * self.num.d}:
            return None
        return self.num.field.rational_t(self.num.terms[(0,) * self.num.d])

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        den = " * ".join(f"(g|{list(v)})^{m}" if m > 1 else f"(g|{list(v)})" for v, m in self.den)
        return f"({self.num!r}) / [{den}]"


def gamma_form_scalar(field: CyclotomicField, m: Vector) -> GammaScalar:
    return GammaScalar.from_poly(inner_form(field, m))


def normalized_height(field: CyclotomicField, m: Vector, spec: NormalFormSpec) -> GammaScalar:
    """(gamma | m) / (gamma | k_1 e_1): the scaled height used by the center."""
    k1 = spec.orders[0]
    anchor = (k1,) + (0,) * (spec.d - 1)
    return GammaScalar.make(inner_form(field, m), [(anchor, 1)])


def field_arithmetic(a: GammaScalar, b: GammaScalar, op: str):
    """Spec surface: dispatch {add, sub, mul, div, eq} over scalars."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return a / b
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")


# --- serialization ----------------------------------------------------------


def _rat_to_json(x):
    f = x if isinstance(x, Fraction) else Fraction(x)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def _rat_from_json(obj):
    if isinstance(obj, str):
        n, _, d = obj.partition("/")
        return Fraction(int(n), int(d or "1"))
    if isinstance(obj, int):
        return obj
    raise ValueError(f"invalid rational literal {obj!r}")


def scalar_to_json(s: GammaScalar) -> dict:
    num = [
        {"mono": list(m), "coef": [_rat_to_json(c) for c in s.num.terms[m]]}
        for m in sorted(s.num.terms)
    ]
    den = [[list(v), m] for v, m in s.den]
    return {"num": num, "den": den}


def scalar_from_json(obj: dict, field: CyclotomicField, d: int) -> GammaScalar:
    terms = {}
    for rec in obj["num"]:
        mono = tuple(int(x) for x in rec["mono"])
        if len(mono) != d:
            raise ValueError("monomial rank mismatch")
        coef = tuple(_rat_from_json(c) for c in rec["coef"])
        if len(coef) != field.degree:
            raise ValueError("cyclotomic coefficient length mismatch")
        if any(coef):
            terms[mono] = coef
    num = GammaPolynomial(field, d, terms)
    den = [(tuple(int(x) for x in v), int(mult)) for v, mult in obj["den"]]
    return GammaScalar.make(num, den)
