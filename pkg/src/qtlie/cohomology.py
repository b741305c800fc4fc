"""2-cocycles, coboundaries, and the universal central extension.

A 2-cocycle alpha is an antisymmetric pairing on basis elements satisfying

    alpha([L_m, L_n], L_s) + alpha([L_s, L_m], L_n) + alpha([L_n, L_s], L_m) = 0.

After subtracting the coboundary of the normalizing functional, a cocycle
vanishes off opposite pairs and is determined by two closed-form families:
the cubic family on radical points, with the Virasoro numerator
(h^3 - h)/6 in the scaled height h, and the height family on non-radical
points twisted by sigma(m, -m).

The truncated solver imposes the cocycle identity on every triple whose six
involved points stay in the box, extracts an exact basis of the solution
space, and matches each basis element against closed_form(w1, w2) plus an
in-box coboundary on the margin-1 inner box.  The matched weight vectors
give the inner-box second cohomology dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebras import DomainError, TorusSetup, bracket_ext
from .lattice import Vector, box_points, in_box, vadd, vneg, zero_vector
from .scalars import GammaScalar, UnsupportedDenominatorError
from .solving import gs_independent_subset, gs_rank, solve_linear


class RangeError(LookupError):
    """A table cocycle was asked for a pair outside its domain."""


class CoverageError(ValueError):
    """A functional or table lacks the points an operation needs."""


def canon_pair(m: Vector, n: Vector):
    """Canonical (ordered pair, sign); None for the vanishing diagonal."""
    if m == n:
        return None, 0
    return ((m, n), 1) if m < n else ((n, m), -1)


class ClosedFormCocycle:
    """The two-parameter closed form, zero off opposite pairs.

    On an opposite pair (m, -m): w1 (h^3 - h)/6 for radical m with h the
    scaled height of m, and w2 sigma(m,-m) (gamma|m)/(gamma|e_1) otherwise.
    """

    def __init__(self, setup: TorusSetup, w1: GammaScalar, w2: GammaScalar):
        setup._require_ext()
        if setup.nf.z == 0 and not w2.is_zero():
            raise DomainError("the height family needs a non-radical direction (z >= 1)")
        self.setup = setup
        self.w1 = w1
        self.w2 = w2
        self._opposite: dict[Vector, GammaScalar] = {}

    def opposite_value(self, m: Vector) -> GammaScalar:
        """alpha(L_m, L_{-m})."""
        cached = self._opposite.get(m)
        if cached is not None:
            return cached
        setup = self.setup
        if setup.is_radical(m):
            h = setup.height(m)
            val = self.w1 * (h * h * h - h).scale(Fraction(1, 6))
        else:
            e1 = (1,) + (0,) * (setup.d - 1)
            ratio = GammaScalar.make(
                setup.form(m).num, [(e1, 1)]
            )
            sig = setup.zeta_scalar(setup.q.sigma_exp(m, vneg(m)))
            val = self.w2 * sig * ratio
        self._opposite[m] = val
        return val

    def value(self, m: Vector, n: Vector) -> GammaScalar:
        if vadd(m, n) != zero_vector(self.setup.d) or m == n:
            return self.setup.zero()
        return self.opposite_value(m)


class TableCocycle:
    """Sparse antisymmetric table over an explicit canonical pair domain."""

    def __init__(self, setup: TorusSetup, table: dict):
        self.setup = setup
        self.table = table

    def value(self, m: Vector, n: Vector) -> GammaScalar:
        if m == n:
            return self.setup.zero()
        pair, sign = canon_pair(m, n)
        if pair not in self.table:
            raise RangeError(f"pair {m}, {n} escapes the cocycle table")
        v = self.table[pair]
        return v if sign > 0 else -v

    def pairs(self):
        return self.table.keys()

    def __eq__(self, other):
        return isinstance(other, TableCocycle) and self.table == other.table


def closed_form_cocycle(setup: TorusSetup, w1, w2) -> ClosedFormCocycle:
    """Spec surface; weights may be ints, Fractions or scalars."""
    if not isinstance(w1, GammaScalar):
        w1 = setup.int_(1).scale(w1)
    if not isinstance(w2, GammaScalar):
        w2 = setup.int_(1).scale(w2)
    return ClosedFormCocycle(setup, w1, w2)


def cocycle_defect(setup: TorusSetup, alpha, m: Vector, n: Vector, s: Vector) -> GammaScalar:
    """Left side of the cocycle identity for one triple; zero iff satisfied."""
    total = setup.zero()
    for x, y, z in ((m, n, s), (s, m, n), (n, s, m)):
        val = alpha.value(vadd(x, y), z)
        b = setup.g_structure(x, y)
        if b is None or val.is_zero():
            continue
        total = total + b * val
    return total


def coboundary(setup: TorusSetup, f, box: int, default=None) -> TableCocycle:
    """psi_f(L_m, L_n) = f([L_m, L_n]) tabulated over all in-box pairs.

    ``f`` is a callable on lattice points or a dict; a missing dict point is
    an error unless ``default`` supplies a fallback value.
    """
    if callable(f):
        lookup = f
    else:
        def lookup(p):
            if p in f:
                return f[p]
            if default is not None:
                return default
            raise CoverageError(f"functional undefined at {p}")

    pts = box_points(setup.d, box)
    table: dict = {}
    for i, m in enumerate(pts):
        for n in pts[i + 1 :]:
            b = setup.g_structure(m, n)
            if b is None:
                table[(m, n)] = setup.zero()
            else:
                table[(m, n)] = b * lookup(vadd(m, n))
    return TableCocycle(setup, table)


class NormalizingFunction:
    """The linear functional whose coboundary kills three pair families.

    With K = k_1 e_1: on radical p other than 2K it divides the table value
    at (p - K, K) by (gamma | 2K - p); at 2K and on non-radical s it divides
    the value at (0, p) by the matching inner form.  Each family is anchored
    at a pair whose own normalization is itself, which makes normalization
    idempotent on stable domains.
    """

    def __init__(self, setup: TorusSetup, alpha):
        setup._require_ext()
        self.setup = setup
        self.alpha = alpha
        k1 = setup.nf.orders[0]
        self.K = (k1,) + (0,) * (setup.d - 1)
        self.twoK = (2 * k1,) + (0,) * (setup.d - 1)

    def anchor_pair(self, p: Vector):
        zero = zero_vector(self.setup.d)
        if self.setup.is_radical(p):
            if p == self.twoK:
                return (zero, self.twoK)
            return (vadd(p, vneg(self.K)), self.K)
        return (zero, p)

    def value(self, p: Vector) -> GammaScalar:
        setup = self.setup
        a, b = self.anchor_pair(p)
        num = self.alpha.value(a, b)
        if setup.is_radical(p) and p != self.twoK:
            den = vadd(self.twoK, vneg(p))
        else:
            den = p
        if num.is_zero():
            return num
        return GammaScalar.make(num.num, list(num.den) + [(den, 1)])


def normalize_cocycle(setup: TorusSetup, alpha: TableCocycle) -> TableCocycle:
    """alpha minus the coboundary of its normalizing functional.

    The output keeps every pair whose normalization is computable from the
    input domain; the three normalized families vanish exactly on it.
    """
    if not isinstance(alpha, TableCocycle):
        raise CoverageError("normalization needs a table cocycle")
    nf = NormalizingFunction(setup, alpha)
    out: dict = {}
    for (m, n), val in alpha.table.items():
        b = setup.g_structure(m, n)
        if b is None:
            out[(m, n)] = val
            continue
        try:
            f = nf.value(vadd(m, n))
        except RangeError:
            continue
        out[(m, n)] = val - f * b
    result = TableCocycle(setup, out)
    _assert_normalized_families(setup, result, nf)
    return result


def _assert_normalized_families(setup, alpha: TableCocycle, nf: NormalizingFunction):
    zero = zero_vector(setup.d)
    for (a, b), val in alpha.table.items():
        p = vadd(a, b)
        if (a, b) == nf.anchor_pair(p) and not val.is_zero():
            raise AssertionError(f"normalized family pair ({a}, {b}) did not vanish")
        if a == zero and b == nf.twoK and not val.is_zero():
            raise AssertionError("normalized anchor at 2K did not vanish")


def tabulate(setup: TorusSetup, cocycle, pairs) -> TableCocycle:
    return TableCocycle(setup, {pair: cocycle.value(*pair) for pair in pairs})


# --- the truncated solver ----------------------------------------------------

_CONST = ("#", "const")


def _match_order_key(key):
    if key == _CONST:
        return (0,)
    if key == "w1":
        return (1,)
    if key == "w2":
        return (2,)
    return (3,) + key[1]


@dataclass
class CocycleMatch:
    matched: bool
    w1: GammaScalar | None = None
    w2: GammaScalar | None = None
    ambiguous: bool = False


class ClosedFormMatcher:
    """Solves values = w1 cf1 + w2 cf2 + psi_f over a fixed pair set.

    The system is block-diagonal over the pair sums: every non-opposite
    class only pins its own f value, radical opposite pairs couple (w1,
    f(0)) through a 2 x 2 system whose determinants factor into inner
    forms, and non-radical opposite pairs read off w2 directly.  Built
    once, matched many times.
    """

    def __init__(self, setup: TorusSetup, pairs: list, include_w2: bool):
        self.setup = setup
        self.include_w2 = include_w2
        self.zero = setup.zero()
        cf1 = closed_form_cocycle(setup, 1, 0)
        cf2 = closed_form_cocycle(setup, 0, 1) if include_w2 else None
        self.classes: dict = {}
        self.rad_rows: list = []
        self.nonrad_rows: list = []
        zero_vec = zero_vector(setup.d)
        for m, n in pairs:
            p = vadd(m, n)
            b = setup.g_structure(m, n)
            if p == zero_vec:
                if setup.is_radical(m):
                    self.rad_rows.append(((m, n), cf1.value(m, n), b))
                else:
                    c2 = cf2.value(m, n) if cf2 is not None else None
                    self.nonrad_rows.append(((m, n), c2, b))
            else:
                self.classes.setdefault(p, []).append(((m, n), b))
        self.pair_class = {}
        for p, rows in self.classes.items():
            for (pair, _b) in rows:
                self.pair_class[pair] = p
        # deterministic pivot pair for the (w1, f0) block, if one exists
        self.rad_pivot = None
        rows = self.rad_rows
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                _, ai, bi = rows[i]
                _, aj, bj = rows[j]
                bi = self.zero if bi is None else bi
                bj = self.zero if bj is None else bj
                det = ai * bj - aj * bi
                if det.is_zero():
                    continue
                try:
                    det_inv = det.inverse()
                except UnsupportedDenominatorError:
                    continue
                self.rad_pivot = (i, j, det_inv)
                break
            if self.rad_pivot:
                break

    def match(self, values: dict) -> CocycleMatch:
        setup = self.setup
        zero = self.zero
        # non-opposite classes: f(p) is pinned by the first invertible row
        seen: set = set()
        for pair in values:
            p = self.pair_class.get(pair)
            if p is None or p in seen:
                continue
            seen.add(p)
            rows = self.classes[p]
            f = None
            deferred = []
            for pr, b in rows:
                v = values.get(pr, zero)
                if b is None:
                    if not v.is_zero():
                        return CocycleMatch(False)
                    continue
                if f is None:
                    f = v * b.inverse()
                else:
                    deferred.append((pr, b, v))
            for pr, b, v in deferred:
                if b * f != v:
                    return CocycleMatch(False)
        # the opposite class: w2 from non-radical rows, (w1, f0) from radical
        w2 = zero if self.include_w2 else None
        amb = False
        if self.include_w2:
            w2 = None
            for pr, c2, _b in self.nonrad_rows:
                v = values.get(pr, zero)
                if w2 is None:
                    w2 = v * c2.inverse()
                else:
                    if c2 * w2 != v:
                        return CocycleMatch(False)
            if w2 is None:
                # no non-radical opposite pairs: the height weight is invisible
                w2 = zero
                amb = True
        else:
            for pr, _c2, _b in self.nonrad_rows:
                if not values.get(pr, zero).is_zero():
                    return CocycleMatch(False)
        rows = self.rad_rows
        if not rows:
            return CocycleMatch(True, None, w2, ambiguous=True)
        if self.rad_pivot is not None:
            i, j, det_inv = self.rad_pivot
            _, ai, bi = rows[i]
            _, aj, bj = rows[j]
            bi = zero if bi is None else bi
            bj = zero if bj is None else bj
            vi = values.get(rows[i][0], zero)
            vj = values.get(rows[j][0], zero)
            w1 = (vi * bj - vj * bi) * det_inv
            f0 = (ai * vj - aj * vi) * det_inv
            for pr, a, b in rows:
                b = zero if b is None else b
                if a * w1 + b * f0 != values.get(pr, zero):
                    return CocycleMatch(False)
            return CocycleMatch(True, w1, w2, ambiguous=amb)
        # rank-deficient radical block: consistency by cross-multiplication
        anchor = None
        for pr, a, b in rows:
            b = zero if b is None else b
            if not (a.is_zero() and b.is_zero()):
                anchor = (pr, a, b)
                break
        if anchor is None:
            if any(not values.get(pr, zero).is_zero() for pr, _a, _b in rows):
                return CocycleMatch(False)
            return CocycleMatch(True, None, w2, ambiguous=True)
        pr0, a0, b0 = anchor
        v0 = values.get(pr0, zero)
        for pr, a, b in rows:
            b = zero if b is None else b
            if a * v0 != a0 * values.get(pr, zero) or b * v0 != b0 * values.get(pr, zero):
                return CocycleMatch(False)
        return CocycleMatch(True, None, w2, ambiguous=True)


def match_against_closed_forms(
    setup: TorusSetup, values: dict, pairs: list, include_w2: bool
) -> CocycleMatch:
    """One-shot convenience wrapper over ClosedFormMatcher."""
    return ClosedFormMatcher(setup, pairs, include_w2).match(values)


def closed_forms_independent(setup: TorusSetup, pairs: list, include_w2: bool) -> bool:
    """Whether no nonzero weight combination is a coboundary on the pairs.

    Division-free: w2 is forced to zero iff some non-radical opposite pair
    is present; w1 is forced iff the (w1, f0) block has rank two, i.e. some
    cross-determinant of (cubic value, bracket coefficient) rows is nonzero.
    """
    cf1 = closed_form_cocycle(setup, 1, 0)
    zero = setup.zero()
    rad_rows = []
    has_nonrad = False
    zero_vec = zero_vector(setup.d)
    for m, n in pairs:
        if vadd(m, n) != zero_vec:
            continue
        if setup.is_radical(m):
            b = setup.g_structure(m, n)
            rad_rows.append((cf1.value(m, n), zero if b is None else b))
        else:
            has_nonrad = True
    if include_w2 and not has_nonrad:
        return False
    w1_forced = False
    for i in range(len(rad_rows)):
        ai, bi = rad_rows[i]
        for j in range(i + 1, len(rad_rows)):
            aj, bj = rad_rows[j]
            if ai * bj != aj * bi:
                w1_forced = True
                break
        if w1_forced:
            break
    if not w1_forced:
        # rank <= 1: w1 survives unless the block is a-only
        some_a = any(not a.is_zero() for a, _ in rad_rows)
        all_b_zero = all(b.is_zero() for _, b in rad_rows)
        w1_forced = some_a and all_b_zero
    return w1_forced


@dataclass
class CocycleBasisEntry:
    param: object
    inner_support: int
    match: CocycleMatch
    vector: dict = field(repr=False, default_factory=dict)


@dataclass
class CocycleSolveResult:
    box: int
    h2_dimension_inner: int | None
    entries: list[CocycleBasisEntry]
    mismatches: int
    cf_independent_inner: bool
    cf_independent_box: bool
    representatives: list[int]
    solution_dimension: int


def _cocycle_rows(setup: TorusSetup, box: int):
    """Cocycle identity rows for every triple with all six points in box."""
    pts = box_points(setup.d, box)
    zero = zero_vector(setup.d)
    rows = []

    def row_for(m, n, s):
        terms: dict = {}
        for x, y, z in ((m, n, s), (s, m, n), (n, s, m)):
            b = setup.g_structure(x, y)
            if b is None:
                continue
            p = vadd(x, y)
            pair, sign = canon_pair(p, z)
            if pair is None:
                continue
            c = b if sign > 0 else -b
            prev = terms.get(pair)
            nxt = c if prev is None else prev + c
            if nxt.is_zero():
                terms.pop(pair, None)
            else:
                terms[pair] = nxt
        return list(terms.items()) if terms else None

    # triples through the origin first: they chain most pairs directly
    for i, a in enumerate(pts):
        if a == zero:
            continue
        for b_ in pts[i + 1 :]:
            if b_ == zero or not in_box(vadd(a, b_), box):
                continue
            r = row_for(zero, a, b_)
            if r:
                rows.append(r)
    adj = {}
    for i, m in enumerate(pts):
        adj[m] = [n for n in pts[i + 1 :] if in_box(vadd(m, n), box)]
    adjset = {m: set(v) for m, v in adj.items()}
    for m in pts:
        if m == zero:
            continue
        for n in adj[m]:
            if n == zero:
                continue
            am = adjset[m]
            for s in adj[n]:
                if s != zero and s in am:
                    r = row_for(m, n, s)
                    if r:
                        rows.append(r)
    return rows, pts


def solve_cocycles(setup: TorusSetup, box: int) -> CocycleSolveResult:
    """Solve the truncated cocycle system and match the basis against the
    closed forms modulo in-box coboundaries on the margin-1 inner box."""
    if box < 2:
        raise ValueError("box must be at least 2")
    setup._require_ext()
    include_w2 = setup.nf.z >= 1
    rows, pts = _cocycle_rows(setup, box)
    unknowns = []
    zero_vec = zero_vector(setup.d)
    spine = []
    for i, m in enumerate(pts):
        for n in pts[i + 1 :]:
            unknowns.append((m, n))
            if m == zero_vec or n == zero_vec or vadd(m, n) == zero_vec:
                spine.append((m, n))
    # promoting the origin-and-opposite pairs first lets the origin-triple
    # rows assign every remaining pair directly, so no search churn
    sol = solve_linear(rows, order_key=lambda k: k, unknowns=unknowns, pre_params=spine)
    inner_pts = {p for p in pts if in_box(p, box - 1)}
    inner_pairs = [pr for pr in unknowns if pr[0] in inner_pts and pr[1] in inner_pts]
    matcher = ClosedFormMatcher(setup, inner_pairs, include_w2)

    entries: list[CocycleBasisEntry] = []
    mismatches = 0
    zero = setup.zero()
    trivial = CocycleMatch(True, zero, zero if include_w2 else None)
    for p in sol.params:
        full = sol.vector(p)
        restricted = {
            pair: c for pair, c in full.items() if pair[0] in inner_pts and pair[1] in inner_pts
        }
        match = matcher.match(restricted) if restricted else trivial
        if not match.matched:
            mismatches += 1
        entries.append(CocycleBasisEntry(p, len(restricted), match, restricted))

    cf_inner = closed_forms_independent(setup, inner_pairs, include_w2)
    cf_box = closed_forms_independent(setup, unknowns, include_w2)

    h2 = None
    reps: list[int] = []
    if mismatches == 0 and cf_inner and not any(e.match.ambiguous for e in entries):
        wkeys = ["w1", "w2"] if include_w2 else ["w1"]
        wvecs = []
        for e in entries:
            v = {}
            if e.match.w1 is not None and not e.match.w1.is_zero():
                v["w1"] = e.match.w1
            if include_w2 and e.match.w2 is not None and not e.match.w2.is_zero():
                v["w2"] = e.match.w2
            wvecs.append(v)
        h2 = gs_rank([v for v in wvecs if v], wkeys)
        reps = gs_independent_subset(wvecs, wkeys)
    return CocycleSolveResult(
        box=box,
        h2_dimension_inner=h2,
        entries=entries,
        mismatches=mismatches,
        cf_independent_inner=cf_inner,
        cf_independent_box=cf_box,
        representatives=reps,
        solution_dimension=len(sol.params),
    )


# --- the extension -----------------------------------------------------------


@dataclass
class ExtendedAlgebra:
    """Handle for the centrally extended bracket and its central basis."""

    setup: TorusSetup
    c1: object
    c2: object | None

    def bracket(self, x, y):
        return bracket_ext(x, y)

    def basis(self, m: Vector):
        return self.setup.ext_L(m)


def build_extension(setup: TorusSetup) -> ExtendedAlgebra:
    """Register the centrally extended algebra for a normal-form setup."""
    setup._require_ext()
    c2 = setup.ext_c(2) if setup.nf.z >= 1 else None
    return ExtendedAlgebra(setup, setup.ext_c(1), c2)
