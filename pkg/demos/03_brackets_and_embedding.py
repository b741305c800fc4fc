"""Walkthrough: graded brackets and the derivation-algebra embedding.

Basis elements L_m are graded by lattice points.  Radical pairs bracket
through the inner form, mixed pairs through the non-radical weight, and
non-radical pairs through the antisymmetrized commutation factor.  The
whole algebra embeds into the derivations of the twisted Laurent ring:
radical L_m become gamma-weighted degree derivations, the rest become
inner derivations.
"""

from qtlie import (
    NormalFormSpec,
    TorusSetup,
    bracket_derqt,
    bracket_g,
    embed_g,
    jacobi_defect,
)
from qtlie.lattice import box_points

print(__doc__)

S = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (2, 2)))

print("brackets in g:")
print("  [L_(1,0), L_(0,1)] =", bracket_g(S.L((1, 0)), S.L((0, 1))))
print("  [L_(0,0), L_(1,0)] =", bracket_g(S.L((0, 0)), S.L((1, 0))))
print("  [L_(2,0), L_(0,2)] =", bracket_g(S.L((2, 0)), S.L((0, 2))))

print("\nembedding of a radical point and a non-radical point:")
print("  L_(2,0) ->", embed_g(S.L((2, 0))))
print("  L_(1,0) ->", embed_g(S.L((1, 0))))

print("\nthe embedding intertwines the brackets:")
x, y = S.L((2, 0)), S.L((1, 1))
lhs = embed_g(bracket_g(x, y))
rhs = bracket_derqt(embed_g(x), embed_g(y))
print("  embed([x,y]) == [embed x, embed y]:", lhs == rhs)

print("\nJacobi holds exactly; a spot check over the box [-1,1]^2:")
pts = box_points(2, 1)
bad = 0
for i, a in enumerate(pts):
    for b in pts[i + 1 :]:
        for c in pts:
            if c <= b:
                continue
            if not jacobi_defect(S.L(a), S.L(b), S.L(c)).is_zero():
                bad += 1
print("  violations:", bad)
