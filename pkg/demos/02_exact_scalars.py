"""Walkthrough: the exact coefficient field Q(zeta_N)(gamma_1..gamma_d).

The gamma variables are formal, so (gamma | m) = sum m_i gamma_i vanishes
only at m = 0 -- genericity is structural, not numerical.  Denominators are
restricted to products of such inner forms, which keeps every reduction a
linear trial division; everything round-trips bit-exactly through JSON.
"""

import json
from fractions import Fraction

from qtlie import (
    Cyclotomic,
    GammaScalar,
    NormalFormSpec,
    cyclotomic_field,
    inner_form,
    normalized_height,
    scalar_from_json,
    scalar_to_json,
)

print(__doc__)

F3 = cyclotomic_field(3)
z = Cyclotomic.zeta(F3)
print("zeta_3 cubes to", (z**3).is_rational())
print("1/(2 + zeta_3) times (2 + zeta_3) =", ((z + 2).inverse() * (z + 2)).is_rational())

print("\ninner forms:")
print("  (gamma | (2,-1)) =", inner_form(F3, (2, -1)))

print("\nscaled heights (the quantity driving the central extension):")
spec = NormalFormSpec(2, 1, (2, 2))
F2 = cyclotomic_field(2)
print("  m = (4,0):", normalized_height(F2, (4, 0), spec), " (an integer)")
h = normalized_height(F2, (2, 4), spec)
print("  m = (2,4):", h, " (an irreducible ratio)")

print("\ncubic numerator h^3 - h factors through neighbouring forms:")
val = (h * h * h - h).scale(Fraction(1, 6))
print("  (h^3 - h)/6 =", val)

print("\ndivision is exact and raises when it would leave the field:")
x = GammaScalar.from_poly(inner_form(F2, (1, 2)))
y = GammaScalar.from_poly(inner_form(F2, (3, -1)))
print("  ((g|1,2)(g|3,-1)) / (g|3,-1) =", (x * y) / y)
try:
    bad = x * x + y * y
    _ = GammaScalar.from_int(F2, 2, 1) / bad
except ArithmeticError as e:
    print("  1/(sum of squares) ->", type(e).__name__)

print("\nJSON round-trip is bit-exact:")
blob = json.dumps(scalar_to_json(val), sort_keys=True)
back = scalar_from_json(json.loads(blob), F2, 2)
print("  serialized:", blob)
print("  round-trip equal:", back == val)
