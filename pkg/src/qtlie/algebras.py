"""Graded elements and exact Lie brackets.

Four algebra contexts share one sparse element type:

* ``g``     -- basis L_m indexed by lattice points, with bracket
               [L_m, L_n] = sigma(m,n)(gamma|n-m) L_{m+n}          (m, n radical)
               [L_m, L_s] = sigma(m,s)(gamma|s)   L_{m+s}          (m radical, s not)
               [L_r, L_s] = (sigma(r,s)-sigma(s,r)) L_{r+s}        (neither radical)
  with the mixed order [L_s, L_m] fixed by antisymmetry.
* ``derqt`` -- derivations of the twisted Laurent ring: degree derivations
               t^m d_i (m radical) and inner derivations ad t^n (n not).
* ``ext``   -- the two-dimensional central extension of ``g`` (normal form
               only), with central generators c_1 and c_2.
* ``vir``   -- the higher-rank Virasoro algebra on keys e_a, a = (B gamma | n),
               with one central generator c.

All coefficients are exact GammaScalar values; elements are immutable by
convention and every bracket is a pure function, so elements can be shared
across threads freely.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .lattice import (
    NormalFormSpec,
    QMatrixSpec,
    Vector,
    radical_contains,
    vadd,
    vneg,
    vsub,
    zero_vector,
)
from .scalars import (
    Cyclotomic,
    CyclotomicField,
    GammaPolynomial,
    GammaScalar,
    cyclotomic_field,
    inner_form,
    normalized_height,
)

G = "g"
DERQT = "derqt"
EXT = "ext"
VIR = "vir"


class ContextMismatchError(ValueError):
    """Operands belong to different algebras or configurations."""


class DomainError(ValueError):
    """An element lies outside the domain an operation requires."""


class TorusSetup:
    """A commutation matrix bound to its exact scalar field.

    Built either from a raw exponent matrix or from a normal-form
    description; only the latter unlocks the fundamental domain, the
    central extension and the Virasoro image.
    """

    def __init__(self, q: QMatrixSpec, nf: NormalFormSpec | None = None):
        self.q = q
        self.nf = nf
        self.d = q.d
        self.N = q.N
        self.field: CyclotomicField = cyclotomic_field(q.N)
        self._rad: dict[Vector, bool] = {}
        self._g_sc: dict[tuple[Vector, Vector], GammaScalar | None] = {}

    @staticmethod
    def from_qmatrix(q: QMatrixSpec) -> "TorusSetup":
        return TorusSetup(q, None)

    @staticmethod
    def from_normal_form(nf: NormalFormSpec) -> "TorusSetup":
        return TorusSetup(nf.to_qmatrix(), nf)

    def __repr__(self):
        if self.nf:
            return f"TorusSetup(normal_form d={self.d} z={self.nf.z} orders={self.nf.orders})"
        return f"TorusSetup(d={self.d} N={self.N})"

    # scalar helpers

    def zero(self) -> GammaScalar:
        return GammaScalar.zero(self.field, self.d)

    def one(self) -> GammaScalar:
        return GammaScalar.from_int(self.field, self.d, 1)

    def int_(self, k) -> GammaScalar:
        return GammaScalar.from_int(self.field, self.d, k)

    def zeta_scalar(self, e: int) -> GammaScalar:
        return GammaScalar(GammaPolynomial.const(self.field, self.d, _zeta(self.field, e)))

    def form(self, m: Vector) -> GammaScalar:
        return GammaScalar.from_poly(inner_form(self.field, m))

    def height(self, m: Vector) -> GammaScalar:
        """(gamma|m)/(gamma|k_1 e_1); requires a normal form."""
        if self.nf is None:
            raise DomainError("height requires a normal-form configuration")
        return normalized_height(self.field, m, self.nf)

    def is_radical(self, m: Vector) -> bool:
        r = self._rad.get(m)
        if r is None:
            if self.nf is not None:
                r = self.nf.in_radical(m)
            else:
                r = radical_contains(self.q, m)
            self._rad[m] = r
        return r

    # element constructors

    def element(self, kind: str, terms: dict) -> "GradedElement":
        return GradedElement(self, kind, {k: v for k, v in terms.items() if not v.is_zero()})

    def zero_element(self, kind: str) -> "GradedElement":
        return GradedElement(self, kind, {})

    def L(self, m: Vector) -> "GradedElement":
        self.q.check_rank(m)
        return GradedElement(self, G, {tuple(m): self.one()})

    def derqt_partial(self, m: Vector, i: int) -> "GradedElement":
        if not self.is_radical(m):
            raise DomainError(f"degree-derivation key needs a radical point, got {m}")
        if not 0 <= i < self.d:
            raise DomainError(f"direction index {i} out of range")
        return GradedElement(self, DERQT, {("d", tuple(m), i): self.one()})

    def derqt_ad(self, n: Vector) -> "GradedElement":
        if self.is_radical(n):
            raise DomainError(f"inner-derivation key needs a non-radical point, got {n}")
        return GradedElement(self, DERQT, {("ad", tuple(n)): self.one()})

    def ext_L(self, m: Vector) -> "GradedElement":
        self._require_ext()
        return GradedElement(self, EXT, {("L", tuple(m)): self.one()})

    def ext_c(self, which: int) -> "GradedElement":
        self._require_ext()
        if which not in (1, 2):
            raise DomainError("central generators are c_1 and c_2")
        if which == 2 and self.nf.z == 0:
            raise DomainError("c_2 is absent when the radical is everything (z = 0)")
        return GradedElement(self, EXT, {("c", which): self.one()})

    def vir_e(self, n: Vector) -> "GradedElement":
        self._require_ext()
        return GradedElement(self, VIR, {("e", tuple(n)): self.one()})

    def vir_c(self) -> "GradedElement":
        self._require_ext()
        return GradedElement(self, VIR, {("c",): self.one()})

    def _require_ext(self):
        if self.nf is None:
            raise DomainError("operation requires a normal-form configuration")

    # factored structure constants of g (internal; memoized)

    def g_structure(self, m: Vector, n: Vector) -> GammaScalar | None:
        """Coefficient of L_{m+n} in [L_m, L_n]; None when zero."""
        key = (m, n)
        memo = self._g_sc
        if key in memo:
            return memo[key]
        mr, nr = self.is_radical(m), self.is_radical(n)
        field, d = self.field, self.d
        out: GammaScalar | None
        if mr and nr:
            if m == n:
                out = None
            else:
                p = inner_form(field, vsub(n, m)).scale_t(field.zeta_t(self.q.sigma_exp(m, n)))
                out = GammaScalar(p)
        elif mr:
            p = inner_form(field, n).scale_t(field.zeta_t(self.q.sigma_exp(m, n)))
            out = GammaScalar(p)
        elif nr:
            p = inner_form(field, m).scale_t(field.neg_t(field.zeta_t(self.q.sigma_exp(n, m))))
            out = GammaScalar(p)
        else:
            t = field.sub_t(
                field.zeta_t(self.q.sigma_exp(m, n)), field.zeta_t(self.q.sigma_exp(n, m))
            )
            if any(t):
                out = GammaScalar(GammaPolynomial.const(field, d, _wrap(field, t)))
            else:
                out = None
        memo[key] = out
        return out

    def ext_central(self, m: Vector, n: Vector) -> tuple[int, GammaScalar] | None:
        """Central part of [L_m, L_n]' as (which, coefficient); None if absent."""
        if vadd(m, n) != zero_vector(self.d):
            return None
        if m == n:  # both zero
            return None
        if self.is_radical(m):
            h = self.height(m)
            coeff = (h * h * h - h).scale(Fraction(1, 12))
            return (1, coeff) if not coeff.is_zero() else None
        h = self.height(m)
        e = self.q.sigma_exp(m, n)  # sigma(m, -m)
        coeff = h.scale(_zeta(self.field, e))
        return (2, coeff) if not coeff.is_zero() else None


def _zeta(field: CyclotomicField, e: int) -> Cyclotomic:
    return Cyclotomic(field, field.zeta_t(e))


def _wrap(field: CyclotomicField, t) -> Cyclotomic:
    return Cyclotomic(field, t)


class GradedElement:
    """Finite linear combination of basis keys with GammaScalar coefficients."""

    __slots__ = ("setup", "kind", "terms")

    def __init__(self, setup: TorusSetup, kind: str, terms: dict):
        self.setup = setup
        self.kind = kind
        self.terms = terms

    def _check(self, other: "GradedElement"):
        if self.setup is not other.setup or self.kind != other.kind:
            raise ContextMismatchError(
                f"cannot combine {self.kind} element with {other.kind} element"
            )

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out[k] + v if k in out else v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return GradedElement(self.setup, self.kind, out)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.setup, self.kind, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, c: GammaScalar) -> "GradedElement":
        if c.is_zero():
            return GradedElement(self.setup, self.kind, {})
        out = {}
        for k, v in self.terms.items():
            p = v * c
            if not p.is_zero():
                out[k] = p
        return GradedElement(self.setup, self.kind, out)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (
            self.setup is other.setup
            and self.kind == other.kind
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key) -> GammaScalar:
        return self.terms.get(key, self.setup.zero())

    def support(self):
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"0[{self.kind}]"
        bits = [f"({v!r})*{k}" for k, v in sorted(self.terms.items(), key=lambda t: repr(t[0]))]
        return " + ".join(bits)


def _acc(terms: dict, key, gs: GammaScalar):
    if gs.is_zero():
        return
    cur = terms.get(key)
    if cur is None:
        terms[key] = gs
    else:
        s = cur + gs
        if s.is_zero():
            del terms[key]
        else:
            terms[key] = s


def bracket_g(x: GradedElement, y: GradedElement) -> GradedElement:
    """Bilinear bracket of the quantum-torus Lie algebra."""
    x._check(y)
    if x.kind != G:
        raise ContextMismatchError(f"bracket_g needs g elements, got {x.kind}")
    setup = x.setup
    out: dict = {}
    for m, cm in x.terms.items():
        for n, cn in y.terms.items():
            sc = setup.g_structure(m, n)
            if sc is None:
                continue
            _acc(out, vadd(m, n), cm * cn * sc)
    return GradedElement(setup, G, out)


def _derqt_pair(setup: TorusSetup, k1, k2) -> list:
    """Structure constants [k1, k2] in the derivation algebra.

    Returns a list of (key, cyclotomic coefficient tuple); raises if an inner
    derivation would land on a central monomial with a nonzero coefficient
    (which the commutation identities forbid).
    """
    field = setup.field
    if k1[0] == "d" and k2[0] == "d":
        _, m, i = k1
        _, n, j = k2
        z = field.zeta_t(setup.q.sigma_exp(m, n))
        mn = vadd(m, n)
        out = []
        ci = field.scale_t(n[i], z)  # n_i on d_j
        cj = field.scale_t(-m[j], z)  # -m_j on d_i
        if i == j:
            c = field.add_t(ci, cj)
            if any(c):
                out.append((("d", mn, i), c))
        else:
            if any(ci):
                out.append((("d", mn, j), ci))
            if any(cj):
                out.append((("d", mn, i), cj))
        return out
    if k1[0] == "d" and k2[0] == "ad":
        _, m, i = k1
        s = k2[1]
        c = field.scale_t(s[i], field.zeta_t(setup.q.sigma_exp(m, s)))
        return [(("ad", vadd(m, s)), c)] if any(c) else []
    if k1[0] == "ad" and k2[0] == "d":
        flipped = _derqt_pair(setup, k2, k1)
        return [(key, field.neg_t(c)) for key, c in flipped]
    r, s = k1[1], k2[1]
    c = field.sub_t(
        field.zeta_t(setup.q.sigma_exp(r, s)), field.zeta_t(setup.q.sigma_exp(s, r))
    )
    rs = vadd(r, s)
    if setup.is_radical(rs):
        if any(c):
            raise AssertionError(
                f"[ad t^{r}, ad t^{s}] produced a central monomial with nonzero coefficient"
            )
        return []
    return [(("ad", rs), c)] if any(c) else []


def bracket_derqt(x: GradedElement, y: GradedElement) -> GradedElement:
    """Bracket of derivations of the twisted Laurent ring."""
    x._check(y)
    if x.kind != DERQT:
        raise ContextMismatchError(f"bracket_derqt needs derqt elements, got {x.kind}")
    setup = x.setup
    field = setup.field
    out: dict = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            for key, ct in _derqt_pair(setup, k1, k2):
                _acc(out, key, (c1 * c2).scale(_wrap(field, ct)))
    return GradedElement(setup, DERQT, out)


def embed_g(x: GradedElement) -> GradedElement:
    """The embedding of g into the derivation algebra.

    L_m with m radical maps to sum_i gamma_i t^m d_i; other L_n map to
    ad t^n.  Injective: distinct basis keys have disjoint image supports.
    """
    if x.kind != G:
        raise ContextMismatchError(f"embed_g needs a g element, got {x.kind}")
    setup = x.setup
    out: dict = {}
    for m, cm in x.terms.items():
        if setup.is_radical(m):
            for i in range(setup.d):
                gi = GammaScalar.from_poly(GammaPolynomial.gamma(setup.field, setup.d, i))
                _acc(out, ("d", m, i), cm * gi)
        else:
            _acc(out, ("ad", m), cm)
    return GradedElement(setup, DERQT, out)


def bracket_ext(x: GradedElement, y: GradedElement) -> GradedElement:
    """Bracket of the universal central extension (normal form only)."""
    x._check(y)
    if x.kind != EXT:
        raise ContextMismatchError(f"bracket_ext needs ext elements, got {x.kind}")
    setup = x.setup
    setup._require_ext()
    out: dict = {}
    for k1, c1 in x.terms.items():
        if k1[0] == "c":
            continue
        for k2, c2 in y.terms.items():
            if k2[0] == "c":
                continue
            m, n = k1[1], k2[1]
            sc = setup.g_structure(m, n)
            c12 = c1 * c2
            if sc is not None:
                _acc(out, ("L", vadd(m, n)), c12 * sc)
            central = setup.ext_central(m, n)
            if central is not None:
                which, coeff = central
                _acc(out, ("c", which), c12 * coeff)
    return GradedElement(setup, EXT, out)


def bracket_vir(x: GradedElement, y: GradedElement) -> GradedElement:
    """Higher-rank Virasoro bracket on exact integer keys.

    Keys n stand for e_a with a = (B gamma | n); the bracket is
    [e_a, e_b] = (b - a) e_{a+b} + delta_{a+b,0} (a^3 - a)/12 c.
    """
    x._check(y)
    if x.kind != VIR:
        raise ContextMismatchError(f"bracket_vir needs vir elements, got {x.kind}")
    setup = x.setup
    setup._require_ext()
    ks = setup.nf.orders
    out: dict = {}
    for k1, c1 in x.terms.items():
        if k1 == ("c",):
            continue
        for k2, c2 in y.terms.items():
            if k2 == ("c",):
                continue
            n1, n2 = k1[1], k2[1]
            if n1 == n2:
                continue
            c12 = c1 * c2
            diff = tuple(k * (b - a) for k, a, b in zip(ks, n1, n2))
            _acc(out, ("e", vadd(n1, n2)), c12 * setup.form(diff))
            if vadd(n1, n2) == zero_vector(setup.d):
                a = setup.form(tuple(k * v for k, v in zip(ks, n1)))
                _acc(out, ("c",), c12 * (a * a * a - a).scale(Fraction(1, 12)))
    return GradedElement(setup, VIR, out)


def virasoro_embed(x: GradedElement) -> GradedElement:
    """Map a radical-supported g element into the Virasoro picture."""
    if x.kind != G:
        raise ContextMismatchError(f"virasoro_embed needs a g element, got {x.kind}")
    setup = x.setup
    setup._require_ext()
    ks = setup.nf.orders
    out: dict = {}
    for m, cm in x.terms.items():
        if any(mi % k for mi, k in zip(m, ks)):
            raise DomainError(f"support point {m} lies outside the radical")
        _acc(out, ("e", tuple(mi // k for mi, k in zip(m, ks))), cm)
    return GradedElement(setup, VIR, out)


def centerless(x: GradedElement) -> GradedElement:
    """Drop central keys (ext: c_1/c_2, vir: c)."""
    return GradedElement(
        x.setup, x.kind, {k: v for k, v in x.terms.items() if k[0] != "c" and k != ("c",)}
    )


_BRACKETS = {G: bracket_g, DERQT: bracket_derqt, EXT: bracket_ext, VIR: bracket_vir}


def bracket(x: GradedElement, y: GradedElement) -> GradedElement:
    return _BRACKETS[x.kind](x, y)


def jacobi_defect(x: GradedElement, y: GradedElement, z: GradedElement) -> GradedElement:
    """[[x,y],z] + [[z,x],y] + [[y,z],x]; zero exactly when Jacobi holds."""
    b = _BRACKETS[x.kind]
    return b(b(x, y), z) + b(b(z, x), y) + b(b(y, z), x)


def structure_records(setup: TorusSetup, box: int) -> list[dict]:
    """Structure constants of g for all ordered basis pairs in [-box, box]^d.

    Deterministic: records and bracket terms are in lexicographic order.
    """
    from .lattice import box_points
    from .scalars import scalar_to_json

    pts = box_points(setup.d, box)
    records = []
    for m in pts:
        for n in pts:
            sc = setup.g_structure(m, n)
            entry = {"x": list(m), "y": list(n), "bracket": []}
            if sc is not None:
                entry["bracket"].append(
                    {"key": list(vadd(m, n)), "coef": scalar_to_json(sc)}
                )
            records.append(entry)
    return records


def replay_records(setup: TorusSetup, records: Iterable[dict]) -> bool:
    """Check an imported structure table against freshly computed brackets."""
    from .scalars import scalar_from_json

    for rec in records:
        m = tuple(rec["x"])
        n = tuple(rec["y"])
        expected = bracket_g(setup.L(m), setup.L(n))
        got = setup.zero_element(G)
        for term in rec["bracket"]:
            got = got + setup.element(
                G, {tuple(term["key"]): scalar_from_json(term["coef"], setup.field, setup.d)}
            )
        if got != expected:
            return False
    return True
