"""Walkthrough: the canonical automorphism family and its verification.

Every automorphism acts as L_n -> lam^[n radical] chi(n) L_(lam n) with
lam = +-1 and a character chi into the cyclotomic units.  The verifier
replays the bracket table over a box; dropping the radical sign breaks the
map and the sweep reports the first witness pair.
"""

from qtlie import (
    CanonicalAutomorphism,
    Character,
    GammaScalar,
    NormalFormSpec,
    TorusSetup,
    apply_automorphism,
    verify_automorphism,
)
from qtlie.lattice import vneg

print(__doc__)

S = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (2, 2)))
chi = Character.from_zeta_exponents(S, (1, 0))
theta = CanonicalAutomorphism(-1, chi)

print("images under lam = -1, chi(e_1) = -1:")
for m in ((2, 0), (1, 0), (3, 0)):
    print(f"  L_{m} ->", apply_automorphism(S, theta, S.L(m)))

print("\nverification over the box [-2,2]^2:")
rep = verify_automorphism(S, theta, 2)
print("  passed:", rep.passed, "pairs checked:", rep.checked)

print("\ncomposition and inverse stay in the family:")
inv = theta.inverse(S)
print("  theta o theta^{-1} verifies:", verify_automorphism(S, theta.compose(S, inv), 2).passed)


class DroppedSign:
    """The same map with the radical sign forgotten: not an automorphism."""

    def image_of(self, setup, n):
        return vneg(n), GammaScalar.from_cyclotomic(chi.of(n), setup.d)


rep = verify_automorphism(S, DroppedSign(), 2)
print("\nmutated map (sign dropped): passed =", rep.passed, "witness =", rep.witness)
