"""Acceptance suite: every criterion as one test, one printed verdict line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; all arithmetic is exact, so every tolerance is zero.  The heavy
rank-3 configuration dominates the runtime.
"""

import json
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from qtlie.algebras import TorusSetup, bracket_ext, bracket_g, bracket_vir, centerless, virasoro_embed
from qtlie.cli import main as cli_main
from qtlie.cohomology import closed_form_cocycle, closed_forms_independent, cocycle_defect, solve_cocycles
from qtlie.lattice import NormalFormSpec, box_points, in_box, vadd, vneg
from qtlie.scalars import GammaScalar
from qtlie.symmetry import CanonicalAutomorphism, Character, solve_derivation_space, verify_automorphism
from qtlie.verify import embedding_report, jacobi_report, virasoro_report

K22 = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (2, 2)))
K33 = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (3, 3)))
K331 = TorusSetup.from_normal_form(NormalFormSpec(3, 1, (3, 3, 1)))
Z0 = TorusSetup.from_normal_form(NormalFormSpec(2, 0, (1, 1)))

MAIN_CONFIGS = [("d2 k=(2,2)", K22), ("d2 k=(3,3)", K33), ("d3 k=(3,3,1)", K331)]


def verdict(n, name, ok, detail=""):
    line = f"ACCEPTANCE {n} [{name}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


def test_criterion_1_jacobi_suite():
    """All basis triples in [-2,2]^d satisfy Jacobi exactly in all three
    algebras, for each configuration."""
    details = []
    ok = True
    for name, setup in MAIN_CONFIGS:
        t0 = time.monotonic()
        for ctx in ("g", "derqt", "ext"):
            rep = jacobi_report(setup, 2, ctx)
            if not rep.passed:
                ok = False
                details.append(f"{name}/{ctx} witness {rep.witness}")
        details.append(f"{name}: {time.monotonic() - t0:.0f}s")
    verdict(1, "jacobi", ok, "; ".join(details))


def test_criterion_2_embedding():
    """The derivation-algebra embedding preserves brackets and has disjoint
    image supports on all basis pairs in [-2,2]^d."""
    ok = True
    details = []
    for name, setup in MAIN_CONFIGS:
        rep = embedding_report(setup, 2)
        if not rep.passed:
            ok = False
            details.append(f"{name} witness {rep.witness}")
    verdict(2, "embedding", ok, "; ".join(details))


def _characters(setup):
    exps = {
        2: [(0,) * 2, (1, 0), (0, 1), (1, 1), (1, 2)],
        3: [(0,) * 3, (1, 0, 0), (0, 1, 2), (2, 1, 0), (2, 2, 2)],
    }[setup.d]
    return [Character.from_zeta_exponents(setup, e) for e in exps]


def test_criterion_3_automorphisms():
    """The canonical family verifies at box 2 for both signs and five
    characters; composition and inverse verify; dropping the radical sign
    produces a witness."""
    ok = True
    details = []
    for name, setup in MAIN_CONFIGS:
        for lam in (1, -1):
            for chi in _characters(setup):
                theta = CanonicalAutomorphism(lam, chi)
                rep = verify_automorphism(setup, theta, 2)
                if not rep.passed:
                    ok = False
                    details.append(f"{name} lam={lam} failed")
        chi = _characters(setup)[3]
        t1 = CanonicalAutomorphism(-1, chi)
        t2 = CanonicalAutomorphism(1, _characters(setup)[1])
        if not verify_automorphism(setup, t1.compose(setup, t2), 2).passed:
            ok = False
            details.append(f"{name} composition failed")
        inv = t1.inverse(setup)
        if not verify_automorphism(setup, inv, 2).passed:
            ok = False
            details.append(f"{name} inverse failed")
        ident = t1.compose(setup, inv)
        from qtlie.symmetry import apply_automorphism

        for m in box_points(setup.d, 2):
            if apply_automorphism(setup, ident, setup.L(m)) != setup.L(m):
                ok = False
                details.append(f"{name} inverse not two-sided at {m}")
                break

        class DroppedSign:
            def image_of(self, s, n):
                return vneg(n), GammaScalar.from_int(s.field, s.d, 1)

        rep = verify_automorphism(setup, DroppedSign(), 2)
        if rep.passed or rep.witness is None:
            ok = False
            details.append(f"{name} mutation not caught")
    verdict(3, "automorphisms", ok, "; ".join(details) or "10 maps/config + mutation witnessed")


def _degrees(setup):
    if setup.d == 2:
        return [(1, 0), (0, 1), (-1, 0), (1, 1), (2, 0), (0, -1)]
    return [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (1, 1, 0), (2, 0, 0)]


def test_criterion_4_derivations():
    """Degree-0 space has inner dimension exactly d matching the degree
    derivations; six nonzero degrees have dimension 1 matching the inner
    derivation, at box 3, per configuration."""
    ok = True
    details = []
    for name, setup in MAIN_CONFIGS:
        t0 = time.monotonic()
        res = solve_derivation_space(setup, (0,) * setup.d, 3)
        if res.dimension != setup.d or res.matched != "degree-derivations":
            ok = False
            details.append(f"{name} degree 0: dim {res.dimension} match {res.matched}")
        for deg in _degrees(setup):
            res = solve_derivation_space(setup, deg, 3)
            if res.dimension != 1 or res.matched != "ad":
                ok = False
                details.append(f"{name} degree {deg}: dim {res.dimension} match {res.matched}")
        details.append(f"{name}: {time.monotonic() - t0:.0f}s")
    verdict(4, "derivations", ok, "; ".join(details))


def _zero_sum_defect_sweep(setup, box, alphas):
    """Exact defect on every triple with any opposite pair: m <= n, s = -m-n."""
    pts = box_points(setup.d, box)
    count = 0
    for i, m in enumerate(pts):
        for n in pts[i:]:
            s = vneg(vadd(m, n))
            if not in_box(s, box):
                continue
            count += 1
            for alpha in alphas:
                if not cocycle_defect(setup, alpha, m, n, s).is_zero():
                    return count, (m, n, s)
    return count, None


def _offsum_pair_sweep(setup, box, alphas):
    """Closed forms vanish on non-opposite pairs, so triples with nonzero
    total sum contribute three zero terms; verify the vanishing exactly."""
    pts = box_points(setup.d, box)
    zero = (0,) * setup.d
    for i, m in enumerate(pts):
        for n in pts[i + 1 :]:
            if vadd(m, n) == zero:
                continue
            for alpha in alphas:
                if not alpha.value(m, n).is_zero():
                    return (m, n)
    return None


def test_criterion_5_cocycles():
    """Closed forms are exact cocycles in-box at box 3 and independent
    modulo in-box coboundaries; every truncated-solver basis element matches
    a weight pair plus a coboundary on the inner box; the inner second
    cohomology is 2 when the fundamental domain is nonempty and 1 when the
    radical is everything.

    The inner window of the rank-2 order-3 lattice contains no nonzero
    radical point at box 3, which blinds it to the cubic family; the
    dimension assertion therefore runs on the configurations whose inner
    window sees both families.
    """
    ok = True
    details = []
    sweep_configs = [("d2 k=(2,2)", K22), ("d2 k=(3,3)", K33), ("d3 k=(3,3,1)", K331),
                     ("d2 z=0", Z0)]
    rng = random.Random(20250810)
    for name, setup in sweep_configs:
        alphas = [closed_form_cocycle(setup, 1, 0)]
        if setup.nf.z >= 1:
            alphas.append(closed_form_cocycle(setup, 0, 1))
        count, witness = _zero_sum_defect_sweep(setup, 3, alphas)
        if witness is not None:
            ok = False
            details.append(f"{name} zero-sum defect at {witness}")
        bad_pair = _offsum_pair_sweep(setup, 3, alphas)
        if bad_pair is not None:
            ok = False
            details.append(f"{name} closed form nonzero off opposite pair {bad_pair}")
        pts = box_points(setup.d, 3)
        for _ in range(500):
            m, n, s = (rng.choice(pts) for _ in range(3))
            if not all(in_box(v, 3) for v in (vadd(m, n), vadd(n, s), vadd(m, s))):
                continue
            for alpha in alphas:
                if not cocycle_defect(setup, alpha, m, n, s).is_zero():
                    ok = False
                    details.append(f"{name} sampled defect at {(m, n, s)}")
        if setup.nf.z >= 1:
            pairs = [(m, n) for i, m in enumerate(pts) for n in pts[i + 1 :]]
            if not closed_forms_independent(setup, pairs, include_w2=True):
                ok = False
                details.append(f"{name} closed forms dependent mod in-box coboundaries")
    h2_expect = {"d2 k=(2,2)": 2, "d3 k=(3,3,1)": 2, "d2 z=0": 1}
    for name, setup in sweep_configs:
        t0 = time.monotonic()
        res = solve_cocycles(setup, 3)
        took = time.monotonic() - t0
        if res.mismatches:
            ok = False
            details.append(f"{name} {res.mismatches} basis elements unmatched")
        if name in h2_expect:
            if res.h2_dimension_inner != h2_expect[name]:
                ok = False
                details.append(
                    f"{name} inner H2 {res.h2_dimension_inner} != {h2_expect[name]}"
                )
        details.append(f"{name}: solve dim {res.solution_dimension} in {took:.0f}s")
    verdict(5, "cocycles", ok, "; ".join(details))


def test_criterion_6_recursion_identities():
    """The cubic family takes the exact values (l^3-l)/6 on the anchor line
    for |l| <= 4, and the sideways stepping identity holds for every
    admissible in-box instance (order-3 blocks admit instances)."""
    ok = True
    details = []
    for name, setup in [("d2 k=(2,2)", K22), ("d2 k=(3,3)", K33),
                        ("d3 k=(3,3,1)", K331), ("d2 z=0", Z0)]:
        cf = closed_form_cocycle(setup, 1, 0)
        k1 = setup.nf.orders[0]
        for l in range(-4, 5):
            m = (l * k1,) + (0,) * (setup.d - 1)
            if cf.value(m, vneg(m)) != setup.int_(1).scale(Fraction(l**3 - l, 6)):
                ok = False
                details.append(f"{name} cubic value wrong at l={l}")
    for name, setup in [("d2 k=(3,3)", K33), ("d3 k=(3,3,1)", K331)]:
        for w in ((1, 0), (0, 1)):
            cf = closed_form_cocycle(setup, *w)
            count = 0
            ks = setup.nf.orders
            for i in range(0, 2 * setup.nf.z, 2):
                ki, kip1 = ks[i], ks[i + 1]
                for m in box_points(setup.d, 3):
                    if m[i] % ki == 0:
                        continue
                    for k in range(-3, 4):
                        if k == 0 or ((m[i + 1] - 1) * k) % kip1 == 0:
                            continue
                        if (m[i] - k) % ki == 0:
                            continue
                        step = tuple(x - k if j == i else x for j, x in enumerate(m))
                        if not in_box(step, 3):
                            continue
                        ke = tuple(k if j == i else 0 for j in range(setup.d))
                        tw = setup.zeta_scalar(setup.q.exps[i + 1][i] * (-k * m[i + 1]))
                        sig = setup.zeta_scalar(setup.q.sigma_exp(m, vneg(m)))
                        lhs = cf.value(m, vneg(m))
                        rhs = tw * cf.value(step, vneg(step)) + sig * cf.value(ke, vneg(ke))
                        if lhs != rhs:
                            ok = False
                            details.append(f"{name} step identity fails at {m} i={i} k={k}")
                        count += 1
            if count == 0:
                ok = False
                details.append(f"{name} no admissible stepping instances found")
    verdict(6, "recursion-identities", ok, "; ".join(details) or "all instances exact")


def test_criterion_7_virasoro():
    """The Virasoro image preserves brackets on radical-supported elements
    in [-2,2]^d modulo the center, and the extension reproduces the
    (a^3 - a)/12 central coefficient under the height map for |a| <= 4."""
    ok = True
    details = []
    for name, setup in MAIN_CONFIGS:
        rep = virasoro_report(setup, 2)
        if not rep.passed:
            ok = False
            details.append(f"{name} witness {rep.witness}")
    verdict(7, "virasoro", ok, "; ".join(details))


def test_criterion_8_determinism(tmp_path):
    """Identical config and command give byte-identical reports; the
    structure export round-trips through JSON and replays exactly."""
    ok = True
    details = []
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"normal_form": {"d": 2, "z": 1, "orders": [2, 2]}}))
    for command in (
        ["verify-jacobi", "--box", "1"],
        ["verify-embedding", "--box", "2"],
        ["derivations", "--degree", "1,0", "--box", "2"],
        ["export-structure", "--box", "1"],
    ):
        blobs = []
        for run in (1, 2):
            out = tmp_path / f"{command[0]}-{run}.json"
            code = cli_main(command + ["--config", str(cfg_path), "--out", str(out)])
            if code != 0:
                ok = False
                details.append(f"{command[0]} exited {code}")
            blobs.append(out.read_bytes())
        if blobs[0] != blobs[1]:
            ok = False
            details.append(f"{command[0]} reports differ between runs")
    export = tmp_path / "export-structure-1.json"
    from qtlie.algebras import replay_records

    if not replay_records(K22, json.loads(export.read_text())):
        ok = False
        details.append("structure export does not replay")
    verdict(8, "determinism", ok, "; ".join(details) or "byte-stable, round-trips")
