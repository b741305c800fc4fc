"""Exhaustive truncation sweeps: Jacobi, embeddings, Virasoro restriction.

The Jacobi sweeps run over every unordered basis triple in a box.  For
speed they work on factored structure constants (a cyclotomic coefficient
tuple plus at most one inner form per bracket), accumulating the defect as
an integer-coefficient polynomial; this is exactly the general bracket
arithmetic with the object wrappers peeled off, and the test suite replays
random triples through the GradedElement API to pin the two paths together.

Sweeps optionally fan out over worker processes; chunks are merged by
taking the first violation in enumeration order, so results do not depend
on the degree of parallelism.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

from .algebras import (
    EXT,
    G,
    TorusSetup,
    bracket_derqt,
    bracket_ext,
    bracket_g,
    bracket_vir,
    centerless,
    embed_g,
    jacobi_defect,
    virasoro_embed,
)
from .lattice import NormalFormSpec, QMatrixSpec, Vector, box_points, in_box, vadd, vneg
from .symmetry import CheckReport


def _fast_sc(setup: TorusSetup, cache: dict, m: Vector, n: Vector):
    """Factored coefficient of L_{m+n} in [L_m, L_n]: (scalar, form | None)."""
    key = (m, n)
    hit = cache.get(key, 0)
    if hit != 0:
        return hit
    field = setup.field
    mr, nr = setup.is_radical(m), setup.is_radical(n)
    if mr and nr:
        out = None if m == n else (field.zeta_t(setup.q.sigma_exp(m, n)), vadd(n, vneg(m)))
    elif mr:
        out = (field.zeta_t(setup.q.sigma_exp(m, n)), n)
    elif nr:
        out = (field.neg_t(field.zeta_t(setup.q.sigma_exp(n, m))), m)
    else:
        t = field.sub_t(
            field.zeta_t(setup.q.sigma_exp(m, n)), field.zeta_t(setup.q.sigma_exp(n, m))
        )
        out = (t, None) if any(t) else None
    cache[key] = out
    return out


def _g_triple_defect(setup, cache, x, y, z) -> bool:
    """True when the Jacobi defect of (x, y, z) vanishes in g."""
    field = setup.field
    acc: dict = {}
    zero_mono = (0,) * setup.d
    for a, b, c in ((x, y, z), (z, x, y), (y, z, x)):
        first = _fast_sc(setup, cache, a, b)
        if first is None:
            continue
        second = _fast_sc(setup, cache, vadd(a, b), c)
        if second is None:
            continue
        s1, f1 = first
        s2, f2 = second
        scal = field.mul_t(s1, s2)
        if f1 is None and f2 is None:
            _mono_add(acc, zero_mono, scal, field)
        elif f1 is None or f2 is None:
            form = f2 if f1 is None else f1
            for i, fi in enumerate(form):
                if fi:
                    mono = tuple(1 if j == i else 0 for j in range(setup.d))
                    _mono_add(acc, mono, field.scale_t(fi, scal), field)
        else:
            for i, fi in enumerate(f1):
                if not fi:
                    continue
                for j, gj in enumerate(f2):
                    if not gj:
                        continue
                    mono = tuple(
                        (1 if k == i else 0) + (1 if k == j else 0) for k in range(setup.d)
                    )
                    _mono_add(acc, mono, field.scale_t(fi * gj, scal), field)
    return all(not any(v) for v in acc.values())


def _mono_add(acc, mono, coeffs, field):
    cur = acc.get(mono)
    acc[mono] = coeffs if cur is None else field.add_t(cur, coeffs)


def _derqt_keys(setup: TorusSetup, box: int) -> list:
    keys = []
    for m in box_points(setup.d, box):
        if setup.is_radical(m):
            keys.extend(("d", m, i) for i in range(setup.d))
        else:
            keys.append(("ad", m))
    return keys


def _derqt_pairs_fast(setup, cache, k1, k2):
    from .algebras import _derqt_pair

    key = (k1, k2)
    hit = cache.get(key)
    if hit is None:
        hit = _derqt_pair(setup, k1, k2)
        cache[key] = hit
    return hit


def _derqt_triple_defect(setup, cache, x, y, z) -> bool:
    field = setup.field
    acc: dict = {}
    for a, b, c in ((x, y, z), (z, x, y), (y, z, x)):
        for mid, c1 in _derqt_pairs_fast(setup, cache, a, b):
            for fin, c2 in _derqt_pairs_fast(setup, cache, mid, c):
                _mono_add(acc, fin, field.mul_t(c1, c2), field)
    return all(not any(v) for v in acc.values())


def _jacobi_chunk(args):
    q, nf, box, context, start, stop = args
    setup = TorusSetup(q, nf)
    cache: dict = {}
    if context == "derqt":
        keys = _derqt_keys(setup, box)
        check = lambda t: _derqt_triple_defect(setup, cache, *t)
    else:
        keys = box_points(setup.d, box)
        check = lambda t: _g_triple_defect(setup, cache, *t)
    units = 0
    for idx, triple in enumerate(combinations(keys, 3)):
        if idx < start:
            continue
        if idx >= stop:
            break
        units += 1
        if not check(triple):
            return units, (idx, triple)
    return units, None


def jacobi_report(setup: TorusSetup, box: int, context: str, threads: int = 1) -> CheckReport:
    """Sweep all unordered basis triples in the box for one algebra.

    Context ``ext`` reuses the g sweep for the graded part (their structure
    constants agree in normal form) and replays the central contributions on
    zero-sum triples through the extended bracket.
    """
    base_context = "g" if context in ("g", "ext") else context
    if base_context == "derqt":
        total = _count_triples(len(_derqt_keys(setup, box)))
    else:
        total = _count_triples(len(box_points(setup.d, box)))
    units = 0
    witness = None
    if threads > 1 and total > 4096:
        chunk = (total + threads - 1) // threads
        args = [
            (setup.q, setup.nf, box, base_context, i * chunk, min((i + 1) * chunk, total))
            for i in range(threads)
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_jacobi_chunk, args))
        hits = [r[1] for r in results if r[1] is not None]
        units = sum(r[0] for r in results)
        if hits:
            witness = min(hits)[1]
    else:
        u, hit = _jacobi_chunk((setup.q, setup.nf, box, base_context, 0, total))
        units = u
        witness = hit[1] if hit else None
    if witness is not None:
        return CheckReport(False, units, witness)
    if context == "ext":
        return _ext_central_jacobi(setup, box, units)
    return CheckReport(True, units)


def _count_triples(n: int) -> int:
    return n * (n - 1) * (n - 2) // 6


def _ext_central_jacobi(setup: TorusSetup, box: int, units: int) -> CheckReport:
    """Full extended-bracket Jacobi on zero-sum triples plus central legs."""
    pts = box_points(setup.d, box)
    els = {m: setup.ext_L(m) for m in pts}
    for i, x in enumerate(pts):
        for y in pts[i:]:
            z = vneg(vadd(x, y))
            if z < y or not in_box(z, box):
                continue
            units += 1
            if not jacobi_defect(els[x], els[y], els[z]).is_zero():
                return CheckReport(False, units, (x, y, z))
    centrals = [setup.ext_c(1)]
    if setup.nf.z >= 1:
        centrals.append(setup.ext_c(2))
    sample = pts[: min(len(pts), 8)]
    for c in centrals:
        for x in sample:
            for y in sample:
                units += 1
                if not jacobi_defect(c, els[x], els[y]).is_zero():
                    return CheckReport(False, units, ("central", x, y))
    return CheckReport(True, units)


def embedding_report(setup: TorusSetup, box: int) -> CheckReport:
    """Bracket preservation and support injectivity of the embedding."""
    pts = box_points(setup.d, box)
    units = 0
    images = {}
    for m in pts:
        img = embed_g(setup.L(m))
        sup = frozenset(img.support())
        if sup in images.values():
            return CheckReport(False, units, ("support-collision", m))
        images[m] = sup
    for i, m in enumerate(pts):
        for n in pts[i:]:
            units += 1
            lhs = embed_g(bracket_g(setup.L(m), setup.L(n)))
            rhs = bracket_derqt(embed_g(setup.L(m)), embed_g(setup.L(n)))
            if lhs != rhs:
                return CheckReport(False, units, (m, n))
    return CheckReport(True, units)


def virasoro_report(setup: TorusSetup, box: int) -> CheckReport:
    """Bracket preservation of the Virasoro image on the centerless part,
    plus the central coefficient law on the extension's radical line."""
    setup._require_ext()
    ks = setup.nf.orders
    rad = [m for m in box_points(setup.d, box) if all(x % k == 0 for x, k in zip(m, ks))]
    units = 0
    for i, m in enumerate(rad):
        for n in rad[i:]:
            units += 1
            lhs = virasoro_embed(bracket_g(setup.L(m), setup.L(n)))
            rhs = bracket_vir(virasoro_embed(setup.L(m)), virasoro_embed(setup.L(n)))
            if centerless(rhs) != lhs:
                return CheckReport(False, units, (m, n))
    # central coefficient on the anchor line: (a^3 - a)/12 under the height map
    from fractions import Fraction

    k1 = ks[0]
    for l in range(-4, 5):
        m = (l * k1,) + (0,) * (setup.d - 1)
        units += 1
        out = bracket_ext(setup.ext_L(m), setup.ext_L(vneg(m)))
        expected = setup.int_(1).scale(Fraction(l**3 - l, 12))
        if out.coefficient(("c", 1)) != expected:
            return CheckReport(False, units, ("central-line", l))
    # general radical points: central term equals (h^3 - h)/12 in the height
    for m in rad:
        units += 1
        h = setup.height(m)
        expected = (h * h * h - h).scale(Fraction(1, 12))
        out = bracket_ext(setup.ext_L(m), setup.ext_L(vneg(m)))
        if out.coefficient(("c", 1)) != expected:
            return CheckReport(False, units, ("central-general", m))
    return CheckReport(True, units)
