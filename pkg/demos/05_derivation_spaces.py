"""Walkthrough: solving graded derivation spaces on truncations.

A degree-n derivation sends L_m to phi(m) L_(m+n); the Leibniz rule over
all in-box pairs is a sparse exact linear system.  On the margin-1 inner
box the solution space collapses to the classification: d independent
degree derivations at degree zero, the inner derivation ad L_n elsewhere.
"""

from qtlie import NormalFormSpec, TorusSetup, solve_derivation_space

print(__doc__)

S = TorusSetup.from_normal_form(NormalFormSpec(2, 1, (3, 3)))

res0 = solve_derivation_space(S, (0, 0), 3)
print("degree (0,0): inner dimension =", res0.dimension, "->", res0.matched)
cand = res0.basis[0]
print("  sample values of one basis derivation:")
for m in ((1, 0), (0, 1), (1, 1), (2, 2)):
    print(f"    phi{m} =", cand.table[m])

for deg in ((1, 0), (0, 1), (1, 1), (3, 0)):
    res = solve_derivation_space(S, deg, 3)
    print(f"degree {deg}: inner dimension =", res.dimension, "->", res.matched)
