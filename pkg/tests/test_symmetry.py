import pytest

from qtlie.algebras import DomainError, TorusSetup, bracket_g
from qtlie.lattice import NormalFormSpec, box_points, in_box, vadd, vscale
from qtlie.scalars import Cyclotomic, GammaScalar
from qtlie.symmetry import (
    AdjointDerivation,
    CanonicalAutomorphism,
    Character,
    DegreeDerivation,
    apply_automorphism,
    builtin_derivations,
    derivation_apply,
    leibniz_defect,
    multiplicativity_check,
    solve_derivation_space,
    verify_automorphism,
)

S22 = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (2, 2)))
S33 = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (3, 3)))


def chi_trivial(setup):
    return Character.trivial(setup)


class TestApplyAutomorphism:
    def test_identity(self):
        theta = CanonicalAutomorphism(1, chi_trivial(S22))
        x = S22.L((1, 2)) + S22.L((2, 0)).scale(S22.form((1, 1)))
        assert apply_automorphism(S22, theta, x) == x

    def test_flip_with_radical_sign(self):
        theta = CanonicalAutomorphism(-1, chi_trivial(S22))
        img = apply_automorphism(S22, theta, S22.L((2, 0)))
        assert img == S22.L((-2, 0)).scale(S22.int_(-1))
        img = apply_automorphism(S22, theta, S22.L((1, 0)))
        assert img == S22.L((-1, 0))

    def test_character_twist(self):
        chi = Character.from_zeta_exponents(S22, (1, 0))
        theta = CanonicalAutomorphism(1, chi)
        img = apply_automorphism(S22, theta, S22.L((3, 0)))
        assert img == S22.L((3, 0)).scale(S22.int_(-1))


class TestVerifyAutomorphism:
    def test_identity_passes(self):
        theta = CanonicalAutomorphism(1, chi_trivial(S22))
        assert verify_automorphism(S22, theta, 2).passed

    def test_flip_passes(self):
        theta = CanonicalAutomorphism(-1, chi_trivial(S22))
        assert verify_automorphism(S22, theta, 2).passed

    def test_corrupted_map_fails_with_witness(self):
        class DroppedSign:
            def image_of(self, setup, n):
                return vscale(-1, n), GammaScalar.from_int(setup.field, setup.d, 1)

        report = verify_automorphism(S22, DroppedSign(), 2)
        assert not report.passed
        assert report.witness is not None
        m, n = report.witness
        theta = DroppedSign()
        lhs = apply_automorphism(S22, theta, bracket_g(S22.L(m), S22.L(n)))
        rhs = bracket_g(
            apply_automorphism(S22, theta, S22.L(m)),
            apply_automorphism(S22, theta, S22.L(n)),
        )
        assert lhs != rhs

    def test_composition_and_inverse(self):
        chi = Character.from_zeta_exponents(S33, (1, 2))
        t1 = CanonicalAutomorphism(-1, chi)
        t2 = CanonicalAutomorphism(1, Character.from_zeta_exponents(S33, (2, 0)))
        comp = t1.compose(S33, t2)
        assert verify_automorphism(S33, comp, 2).passed
        for m in box_points(2, 2):
            via_comp = apply_automorphism(S33, comp, S33.L(m))
            via_steps = apply_automorphism(S33, t1, apply_automorphism(S33, t2, S33.L(m)))
            assert via_comp == via_steps
        inv = t1.inverse(S33)
        ident = t1.compose(S33, inv)
        for m in box_points(2, 2):
            assert apply_automorphism(S33, ident, S33.L(m)) == S33.L(m)


class TestMultiplicativity:
    def build_table(self, setup, fn, box=2):
        return {m: fn(m) for m in box_points(setup.d, box)}

    def test_character_table_passes(self):
        chi = Character.from_zeta_exponents(S33, (1, 2))
        table = self.build_table(S33, lambda m: GammaScalar.from_cyclotomic(chi.of(m), 2))
        assert multiplicativity_check(S33, table, 1).passed

    def test_canonical_coefficients_pass_for_minus(self):
        chi = Character.from_zeta_exponents(S22, (1, 1))
        theta = CanonicalAutomorphism(-1, chi)
        table = {m: theta.image_of(S22, m)[1] for m in box_points(2, 2)}
        assert multiplicativity_check(S22, table, -1).passed

    def test_single_corruption_fails(self):
        table = self.build_table(S22, lambda m: S22.one())
        table[(2, 0)] = S22.int_(-1)
        report = multiplicativity_check(S22, table, 1)
        assert not report.passed
        m, n = report.witness
        assert table[vadd(m, n)] != table[m] * table[n]
        # the pair the corruption most directly breaks is among the violations
        assert table[(2, 0)] != table[(1, 0)] * table[(1, 0)]

    def test_zero_value_rejected(self):
        table = self.build_table(S22, lambda m: S22.one())
        table[(1, 1)] = S22.zero()
        with pytest.raises(DomainError):
            multiplicativity_check(S22, table, 1)


class TestBuiltinDerivations:
    def test_degree_derivation(self):
        out = derivation_apply(S22, DegreeDerivation(S22, 0), S22.L((3, 2)))
        assert out == S22.L((3, 2)).scale(S22.int_(3))

    def test_degree_derivation_kills_origin(self):
        for i in range(2):
            assert derivation_apply(S22, DegreeDerivation(S22, i), S22.L((0, 0))).is_zero()

    def test_ad_zero_equals_weighted_degree_sum(self):
        ad0 = AdjointDerivation(S22, (0, 0))
        partials, _ = builtin_derivations(S22)
        for m in box_points(2, 2):
            lhs = derivation_apply(S22, ad0, S22.L(m))
            rhs = S22.zero_element("g")
            for i, p in enumerate(partials):
                rhs = rhs + derivation_apply(S22, p, S22.L(m)).scale(
                    S22.form(tuple(1 if j == i else 0 for j in range(2)))
                )
            assert lhs == rhs

    def test_ad_matches_bracket(self):
        ad = AdjointDerivation(S33, (1, 0))
        for m in box_points(2, 2):
            assert derivation_apply(S33, ad, S33.L(m)) == bracket_g(S33.L((1, 0)), S33.L(m))

    def test_leibniz_for_builtins(self):
        pts = box_points(2, 1)
        cands = [DegreeDerivation(S33, 0), DegreeDerivation(S33, 1), AdjointDerivation(S33, (1, 1))]
        for cand in cands:
            for m in pts:
                for n in pts:
                    assert leibniz_defect(S33, cand, S33.L(m), S33.L(n)).is_zero()


class TestSolveDerivationSpace:
    def test_degree_zero_dimension_d(self):
        res = solve_derivation_space(S22, (0, 0), 3)
        assert res.dimension == 2
        assert res.matched == "degree-derivations"

    def test_degree_zero_additivity(self):
        res = solve_derivation_space(S22, (0, 0), 3)
        inner = [p for p in box_points(2, 2)]
        for cand in res.basis:
            for m in inner:
                for n in inner:
                    mn = vadd(m, n)
                    if not in_box(mn, 2):
                        continue
                    lhs = cand.table.get(mn, S22.zero())
                    rhs = cand.table.get(m, S22.zero()) + cand.table.get(n, S22.zero())
                    assert lhs == rhs

    def test_nonzero_degree_is_ad(self):
        for deg in ((1, 0), (0, 1), (2, 0)):
            res = solve_derivation_space(S22, deg, 3)
            assert res.dimension == 1
            assert res.matched == "ad"

    def test_basis_satisfies_leibniz(self):
        res = solve_derivation_space(S22, (1, 0), 3)
        cand = res.basis[0]
        pts = [m for m in box_points(2, 1)]
        for m in pts:
            for n in pts:
                assert leibniz_defect(S22, cand, S22.L(m), S22.L(n)).is_zero()


class TestLocallyFiniteProbe:
    def test_origin_orbit_stays_bounded(self):
        x = S22.L((0, 0))
        y = S22.L((1, 1))
        cur = y
        for _ in range(6):
            cur = bracket_g(x, cur)
            assert cur.support() <= {(1, 1)}

    def test_nonorigin_orbit_escapes(self):
        x = S22.L((1, 0))
        y = S22.L((0, 1))
        cur = y
        sizes = set()
        for _ in range(6):
            cur = bracket_g(x, cur)
            sizes |= cur.support()
        assert len(sizes) > 1
