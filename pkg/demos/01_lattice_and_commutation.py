"""Walkthrough: the commutation form and the radical subgroup.

A rank-d configuration assigns roots of unity q_ij to coordinate pairs; the
bicharacter sigma(m, n) = prod_{i<j} q_ji^(m_j n_i) measures how monomials
t^m and t^n commute.  The radical R collects the directions that commute
with everything; its basis is computed exactly from the defining
congruences.
"""

from qtlie import (
    NormalFormSpec,
    QMatrixSpec,
    fundamental_domain,
    iota,
    radical_basis,
    radical_contains,
    sigma,
)

print(__doc__)

print("A rank-2 normal form with one order-2 block: q_12 = -1, q_21 = -1.")
nf = NormalFormSpec(2, 1, (2, 2))
q = nf.to_qmatrix()
print("exponent matrix:", q.exps, "mod N =", q.N)

print("\nsigma on the basis vectors:")
for m, n in (((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 0))):
    r = sigma(q, m, n)
    print(f"  sigma({m}, {n}) = zeta_{r.order}^{r.exp}")

print("\nradical basis (Hermite normal form rows):")
print(" ", radical_basis(q))
print("  contains (2,0)?", radical_contains(q, (2, 0)))
print("  contains (1,0)?", radical_contains(q, (1, 0)))

print("\nfundamental domain (non-radical points of the order box):")
print(" ", list(fundamental_domain(nf)))

print("\niota counts how much of {m, n, m+n} is radical:")
for m, n in (((2, 0), (0, 2)), ((1, 0), (1, 0)), ((1, 0), (0, 1))):
    print(f"  iota({m}, {n}) = {iota(q, m, n)}")

print("\nA configuration whose radical is NOT diagonal:")
qpar = QMatrixSpec(3, 2, ((0, 1, 1), (1, 0, 1), (1, 1, 0)))
print("  all off-diagonal entries -1, rank 3")
print("  radical basis:", radical_basis(qpar))
print("  (the constant-parity sublattice: index 4, no diagonal basis)")
