"""Lattice vectors, the commutation form, and the radical subgroup.

A configuration is a d x d matrix of roots of unity q_ij (encoded by integer
exponents relative to a common primitive N-th root) with q_ii = 1 and
q_ij * q_ji = 1.  The bicharacter

    sigma(m, n) = prod_{i<j} q_ji^(m_j * n_i)

controls how monomials of the twisted Laurent ring commute.  The radical

    R = { m : sigma(m, n) = sigma(n, m) for all n }

is the subgroup of "commutative directions"; for root-of-unity input it has
finite index and we compute a canonical (Hermite normal form) basis of it by
solving the defining congruences with a Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterator, Sequence

Vector = tuple[int, ...]


class DimensionError(ValueError):
    """A lattice vector does not match the rank of the configuration."""


def vec(coords: Sequence[int]) -> Vector:
    return tuple(int(c) for c in coords)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vscale(c: int, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def zero_vector(d: int) -> Vector:
    return (0,) * d


def unit_vector(d: int, i: int) -> Vector:
    """Standard basis vector e_{i+1} (0-indexed i)."""
    v = [0] * d
    v[i] = 1
    return tuple(v)


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_N^exp with exact arithmetic on exponents mod N."""

    order: int
    exp: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "exp", self.exp % self.order)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.order != other.order:
            raise ValueError("mismatched root orders")
        return RootOfUnity(self.order, self.exp + other.exp)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exp)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exp * k)

    def is_one(self) -> bool:
        return self.exp == 0


@dataclass(frozen=True)
class QMatrixSpec:
    """Exponent matrix for a root-of-unity commutation matrix.

    ``exps[i][j]`` is the exponent a_ij of q_ij = zeta_N^(a_ij), taken mod N.
    Requires a_ii = 0 and a_ij + a_ji = 0 (mod N), i.e. q_ii = 1 and
    q_ij q_ji = 1.
    """

    d: int
    N: int
    exps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d <= 1:
            raise ValueError("rank d must be > 1")
        if self.N < 1:
            raise ValueError("root order N must be >= 1")
        if len(self.exps) != self.d or any(len(row) != self.d for row in self.exps):
            raise ValueError("exps must be a d x d matrix")
        reduced = tuple(tuple(a % self.N for a in row) for row in self.exps)
        object.__setattr__(self, "exps", reduced)
        for i in range(self.d):
            if reduced[i][i] % self.N != 0:
                raise ValueError(f"q_{i+1}{i+1} must be 1 (diagonal exponent nonzero)")
            for j in range(self.d):
                if (reduced[i][j] + reduced[j][i]) % self.N != 0:
                    raise ValueError(f"q_{i+1}{j+1} * q_{j+1}{i+1} must be 1")

    def check_rank(self, *vectors: Vector) -> None:
        for v in vectors:
            if len(v) != self.d:
                raise DimensionError(f"vector {v} does not have rank {self.d}")

    def sigma_exp(self, m: Vector, n: Vector) -> int:
        """Exponent of sigma(m, n) = prod_{i<j} q_ji^(m_j n_i), mod N."""
        self.check_rank(m, n)
        e = 0
        exps = self.exps
        for j in range(1, self.d):
            mj = m[j]
            if mj:
                row = exps[j]
                for i in range(j):
                    e += row[i] * mj * n[i]
        return e % self.N

    def skew_exp(self, m: Vector, n: Vector) -> int:
        """Exponent of sigma(m, n) / sigma(n, m), mod N."""
        return (self.sigma_exp(m, n) - self.sigma_exp(n, m)) % self.N


@dataclass(frozen=True)
class NormalFormSpec:
    """Diagonalized configuration: commuting pairs (2i-1, 2i) of order k_{2i-1}.

    ``orders`` lists k_1 >= k_2 >= ... >= k_d with k_{i+1} | k_i on the first
    2z entries, k_{2j-1} = k_{2j}, k_l = 1 beyond 2z, and k_i > 1 on the
    block entries when z >= 1.  The radical is then the diagonal sublattice
    spanned by k_i e_i.
    """

    d: int
    z: int
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(k) for k in self.orders))
        if self.d <= 1:
            raise ValueError("rank d must be > 1")
        if self.z < 0 or 2 * self.z > self.d:
            raise ValueError("z must satisfy 0 <= 2z <= d")
        if len(self.orders) != self.d:
            raise ValueError("orders must list one k_i per coordinate")
        ks = self.orders
        if any(k < 1 for k in ks):
            raise ValueError("orders must be positive")
        for i in range(self.d - 1):
            if ks[i] < ks[i + 1]:
                raise ValueError("orders must be non-increasing")
        for i in range(2 * self.z - 1):
            if ks[i] % ks[i + 1] != 0:
                raise ValueError("orders must form a divisibility chain k_{i+1} | k_i")
        for j in range(self.z):
            if ks[2 * j] != ks[2 * j + 1]:
                raise ValueError("orders must pair up: k_{2j-1} = k_{2j}")
        for l in range(2 * self.z, self.d):
            if ks[l] != 1:
                raise ValueError("orders beyond the 2z block must equal 1")
        if self.z >= 1 and ks[2 * self.z - 1] == 1:
            raise ValueError("block orders must exceed 1 when z >= 1")

    @property
    def root_order(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def to_qmatrix(self) -> QMatrixSpec:
        """Expand to the exponent matrix with q_{2i-1,2i} = zeta_{k_{2i-1}}."""
        N = self.root_order
        exps = [[0] * self.d for _ in range(self.d)]
        for i in range(self.z):
            a, b = 2 * i, 2 * i + 1
            e = N // self.orders[a]
            exps[a][b] = e % N
            exps[b][a] = -e % N
        return QMatrixSpec(self.d, N, tuple(tuple(row) for row in exps))

    def in_radical(self, m: Vector) -> bool:
        if len(m) != self.d:
            raise DimensionError(f"vector {m} does not have rank {self.d}")
        return all(mi % k == 0 for mi, k in zip(m, self.orders))


def sigma(q: QMatrixSpec, m: Vector, n: Vector) -> RootOfUnity:
    """The commutation bicharacter sigma(m, n) as an exact root of unity."""
    return RootOfUnity(q.N, q.sigma_exp(m, n))


# --- integer normal forms ------------------------------------------------


def smith_normal_form(
    A: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, S, V) with S = U A V diagonal, U and V unimodular.

    Diagonal entries are nonnegative and form a divisibility chain.
    """
    S = [list(map(int, row)) for row in A]
    rows = len(S)
    cols = len(S[0]) if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
        for M in (S, U):
            ri, rj = M[i], M[j]
            for k in range(len(ri)):
                ri[k], rj[k] = a * ri[k] + b * rj[k], c * ri[k] + d * rj[k]

    def col_op(i, j, a, b, c, d):
        for M in (S, V):
            for r in M:
                r[i], r[j] = a * r[i] + b * r[j], c * r[i] + d * r[j]

    def clear_position(t):
        while True:
            # pick the minimal nonzero entry in the remaining block as pivot
            piv = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if S[i][j] and (piv is None or abs(S[i][j]) < abs(S[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return False
            pi, pj = piv
            if pi != t:
                row_op(t, pi, 0, 1, 1, 0)
            if pj != t:
                col_op(t, pj, 0, 1, 1, 0)
            dirty = False
            for i in range(t + 1, rows):
                if S[i][t]:
                    qq = S[i][t] // S[t][t]
                    row_op(i, t, 1, -qq, 0, 1)
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if S[t][j]:
                    qq = S[t][j] // S[t][t]
                    col_op(j, t, 1, -qq, 0, 1)
                    if S[t][j]:
                        dirty = True
            if not dirty:
                return True

    r = min(rows, cols)
    for t in range(r):
        if not clear_position(t):
            break
    # divisibility chain, then a final sign pass
    changed = True
    while changed:
        changed = False
        for t in range(r - 1):
            a, b = S[t][t], S[t + 1][t + 1]
            if a and b and b % a != 0:
                # standard trick: add column t+1 into column t, re-clear
                col_op(t, t + 1, 1, 1, 0, 1)
                clear_position(t)
                changed = True
    for t in range(r):
        if S[t][t] < 0:
            for k in range(cols):
                S[t][k] = -S[t][k]
            for k in range(rows):
                U[t][k] = -U[t][k]
    return U, S, V


def hermite_normal_form(rows_in: Sequence[Vector]) -> list[Vector]:
    """Row-style Hermite normal form of the lattice spanned by ``rows_in``.

    Pivots are positive, entries below a pivot are zero and entries above it
    are reduced into [0, pivot).  Zero rows are dropped.
    """
    rows = [list(map(int, r)) for r in rows_in]
    if not rows:
        return []
    cols = len(rows[0])
    h: list[list[int]] = []
    work = rows
    pivot_col = {}
    r = 0
    for c in range(cols):
        # gather rows with nonzero entry in column c at or below position r
        idx = None
        for i in range(r, len(work)):
            if work[i][c]:
                idx = i
                break
        if idx is None:
            continue
        work[r], work[idx] = work[idx], work[r]
        for i in range(r + 1, len(work)):
            while work[i][c]:
                qq = work[r][c] // work[i][c]
                work[r] = [x - qq * y for x, y in zip(work[r], work[i])]
                work[r], work[i] = work[i], work[r]
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        pivot_col[r] = c
        r += 1
    work = work[:r]
    # reduce entries above each pivot
    for i in range(r - 1, -1, -1):
        c = pivot_col[i]
        p = work[i][c]
        for i2 in range(i):
            qq = work[i2][c] // p
            if qq:
                work[i2] = [x - qq * y for x, y in zip(work[i2], work[i])]
    return [tuple(row) for row in work]


# --- radical -------------------------------------------------------------


def _skew_matrix(q: QMatrixSpec) -> list[list[int]]:
    """C with sigma(m,n)/sigma(n,m) = zeta^(m^T C n); C antisymmetric mod N."""
    C = [[0] * q.d for _ in range(q.d)]
    for j in range(q.d):
        for i in range(j):
            C[j][i] = q.exps[j][i] % q.N
            C[i][j] = -q.exps[j][i] % q.N
    return C


@lru_cache(maxsize=None)
def radical_basis(q: QMatrixSpec) -> tuple[Vector, ...]:
    """HNF basis of R = { m : sigma(m, n) = sigma(n, m) for all n }.

    The congruences C^T m = 0 (mod N) are solved by a Smith normal form of
    C^T; the resulting generators (including N Z^d, which always lies in R)
    are put into Hermite normal form.  For normal-form input this equals
    { k_i e_i }.
    """
    d, N = q.d, q.N
    C = _skew_matrix(q)
    A = [[C[j][i] for j in range(d)] for i in range(d)]  # A = C^T
    _, S, V = smith_normal_form(A)
    gens = []
    for i in range(d):
        s = S[i][i] % N
        # column i of V scaled by N/gcd(s, N) solves S w = 0 mod N
        t = N // gcd(s, N) if s else 1
        gens.append(tuple(t * V[r][i] for r in range(d)))
    return tuple(hermite_normal_form(gens))


def radical_contains(q: QMatrixSpec, m: Vector) -> bool:
    """delta(m, R): whether sigma(m, e_j) = sigma(e_j, m) for every j."""
    q.check_rank(m)
    for j in range(q.d):
        ej = unit_vector(q.d, j)
        if q.skew_exp(m, ej) != 0:
            return False
    return True


def commutation_subgroup_contains(q: QMatrixSpec, r: Vector, n: Vector) -> bool:
    """Membership of n in G_r = { n : sigma(r, n) = sigma(n, r) }.

    For r in the radical, G_r is all of Z^d and the call trivially returns
    True; callers who care can test ``radical_contains(q, r)`` first.
    """
    q.check_rank(r, n)
    return q.skew_exp(r, n) == 0


def iota(q: QMatrixSpec, m: Vector, n: Vector) -> int:
    """Number of elements of the set {m, n, m+n} lying in the radical."""
    pts = {m, n, vadd(m, n)}
    return sum(1 for p in pts if radical_contains(q, p))


def fundamental_domain(spec: NormalFormSpec) -> Iterator[Vector]:
    """Non-radical points of the box prod [0, k_i), in lexicographic order.

    Empty for z = 0 (the radical is everything).
    """
    for m in product(*(range(k) for k in spec.orders)):
        if any(m):
            yield m


def box_points(d: int, b: int) -> list[Vector]:
    """All lattice points of [-b, b]^d in lexicographic order."""
    return list(product(range(-b, b + 1), repeat=d))


def in_box(m: Vector, b: int) -> bool:
    return all(-b <= x <= b for x in m)
