"""Exact linear solving over the gamma scalar field.

The derivation and cocycle systems are huge but extremely sparse (two or
three unknowns per equation), and their pivot coefficients are structure
constants, i.e. cyclotomic units times inner forms, which invert inside the
restricted scalar field.  The solver therefore works by substitution: rows
with a single unresolved unknown assign it, rows that close define relations
among the surviving parameters, and stalls promote the lexicographically
lowest unknown to a free parameter.  The result expresses every unknown as
an exact linear combination of free parameters.

Dense fraction-free (Bareiss) elimination over polynomials backs the small
rank computations; rows are cleared of denominators first, which does not
change spans.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Sequence

from .scalars import (
    GammaPolynomial,
    GammaScalar,
    UnsupportedDenominatorError,
    gpoly_divmod,
    inner_form,
)

Key = Hashable
Row = Sequence[tuple[Key, GammaScalar]]


class InconsistentSystem(Exception):
    """An affine system admits no solution; carries a witness row tag."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SolverHardCase(Exception):
    """A residual relation needed a division outside the scalar field."""


class LinearSolution:
    """Every unknown as a combination of free parameters.

    ``expr[u]`` maps parameters to coefficients; parameters are their own
    expression.  ``vector(p)`` gathers the solution obtained by setting
    parameter p to 1 and the others to 0; the reverse index makes it sparse.
    """

    def __init__(self, params: list, expr: dict, order_key, users: dict):
        self.params = params
        self.expr = expr
        self._order_key = order_key
        self._users = users

    def value(self, u, assignment: dict) -> GammaScalar | None:
        e = self.expr.get(u)
        if e is None:
            return None
        total = None
        for p, c in e.items():
            contrib = c * assignment[p] if p in assignment else None
            if contrib is None:
                continue
            total = contrib if total is None else total + contrib
        return total

    def vector(self, p) -> dict:
        out = {}
        for u in self._users.get(p, ()):
            e = self.expr.get(u)
            if e is None:
                continue
            c = e.get(p)
            if c is not None and not c.is_zero():
                out[u] = c
        return out


def solve_linear(
    rows: Iterable[Row],
    order_key: Callable[[Key], object],
    unknowns: Iterable[Key] = (),
    forbid_pivot: frozenset | set = frozenset(),
    pre_params: Iterable[Key] = (),
) -> LinearSolution:
    """Null space of a sparse homogeneous system by substitution.

    ``pre_params`` are assigned as parameters up front (used for the affine
    constant); ``forbid_pivot`` keys are never eliminated by relations, and a
    relation supported only on them raises InconsistentSystem.
    """
    expr: dict = {}
    users: dict = {}
    params: set = set()
    parked: dict = {}
    hard: list[dict] = []
    queue: deque = deque()

    def wake(u):
        rows_ = parked.pop(u, None)
        if rows_:
            queue.extend(rows_)

    def promote(u):
        params.add(u)
        expr[u] = {u: _one_like(u)}
        users.setdefault(u, set()).add(u)
        wake(u)

    one_cache: dict = {}

    def _one_like(_u):
        return one_cache["one"]

    def substitute(row):
        acc: dict = {}
        unassigned = []
        for key, c in row:
            e = expr.get(key)
            if e is None:
                unassigned.append((key, c))
                continue
            for p, v in e.items():
                add = c * v
                if add.is_zero():
                    continue
                s = acc.get(p)
                s2 = add if s is None else s + add
                if s2.is_zero():
                    acc.pop(p, None)
                else:
                    acc[p] = s2
        return acc, unassigned

    def assign(u, mapping):
        expr[u] = mapping
        for p in mapping:
            users.setdefault(p, set()).add(u)
        wake(u)

    def eliminate(p, repl: dict):
        params.discard(p)
        affected = users.pop(p, set())
        for key in affected:
            e = expr[key]
            c = e.pop(p, None)
            if c is None or c.is_zero():
                continue
            for p2, v in repl.items():
                add = c * v
                if add.is_zero():
                    continue
                s = e.get(p2)
                s2 = add if s is None else s + add
                if s2.is_zero():
                    e.pop(p2, None)
                else:
                    e[p2] = s2
                    users.setdefault(p2, set()).add(key)
        for rel in hard:
            c = rel.pop(p, None)
            if c is None or c.is_zero():
                continue
            for p2, v in repl.items():
                add = c * v
                if add.is_zero():
                    continue
                s = rel.get(p2)
                s2 = add if s is None else s + add
                if s2.is_zero():
                    rel.pop(p2, None)
                else:
                    rel[p2] = s2

    def handle_relation(acc):
        items = sorted(acc.items(), key=lambda t: order_key(t[0]))
        live = [(p, c) for p, c in items if not c.is_zero()]
        if not live:
            return
        if all(p in forbid_pivot for p, _ in live):
            raise InconsistentSystem("relation forces a forbidden parameter", live)
        for p, c in live:
            if p in forbid_pivot:
                continue
            try:
                cinv = c.inverse()
            except UnsupportedDenominatorError:
                continue
            repl = {p2: -(v * cinv) for p2, v in live if p2 != p}
            eliminate(p, repl)
            return
        hard.append(dict(live))

    queue.extend(rows)
    if not queue:
        raise ValueError("solve_linear needs at least one row")
    one_cache["one"] = _unit_scalar(queue[0])
    for p in pre_params:
        promote(p)

    while True:
        while queue:
            row = queue.popleft()
            acc, unassigned = substitute(row)
            if len(unassigned) >= 2:
                unassigned.sort(key=lambda t: order_key(t[0]))
                parked.setdefault(unassigned[0][0], []).append(row)
                continue
            if len(unassigned) == 1:
                u, c = unassigned[0]
                try:
                    cinv = c.inverse()
                except UnsupportedDenominatorError:
                    parked.setdefault(u, []).append(row)
                    continue
                mapping = {}
                for p, v in acc.items():
                    coeff = -(v * cinv)
                    if not coeff.is_zero():
                        mapping[p] = coeff
                assign(u, mapping)
                continue
            handle_relation(acc)
        if parked:
            u = min(parked, key=order_key)
            promote(u)
            continue
        break

    for u in unknowns:
        if u not in expr:
            promote(u)

    if hard:
        _resolve_hard(hard, params, expr, users, forbid_pivot, order_key, one_cache["one"])

    ordered = sorted(params, key=order_key)
    return LinearSolution(ordered, expr, order_key, users)


def _unit_scalar(row) -> GammaScalar:
    c = row[0][1]
    field, d = c.num.field, c.num.d
    return GammaScalar.from_int(field, d, 1)


def _resolve_hard(hard, params, expr, users, forbid_pivot, order_key, one):
    """Residual relations among parameters, solved densely.

    Expected to be unreachable for the shipped systems; exists so that a
    surprise relation fails loudly instead of being dropped.
    """
    field, d = one.num.field, one.num.d
    cols = sorted({p for rel in hard for p in rel}, key=order_key)
    matrix = []
    for rel in hard:
        cleared = _clear_denominators([rel.get(p, None) for p in cols], field, d)
        matrix.append(cleared)
    basis = polynomial_nullspace(matrix)
    if basis is None:
        raise SolverHardCase("residual relations needed unsupported divisions")
    live = [p for p in cols if p not in forbid_pivot]
    if len(basis) < len(cols) and any(p in forbid_pivot for p in cols):
        # a forbidden parameter must stay free in every surviving direction
        for p in cols:
            if p in forbid_pivot:
                idx = cols.index(p)
                if all(v[idx].is_zero() for v in basis):
                    raise InconsistentSystem(
                        "residual relations force a forbidden parameter", p
                    )
    # rewrite: old params in `cols` become combinations of fresh parameters
    fresh = [("#free", i) for i in range(len(basis))]
    repl = {p: {} for p in cols}
    for j, vecp in enumerate(basis):
        for i, p in enumerate(cols):
            if not vecp[i].is_zero():
                repl[p][fresh[j]] = vecp[i]
    for p in cols:
        params.discard(p)
        affected = users.pop(p, set())
        for key in affected:
            e = expr[key]
            c = e.pop(p, None)
            if c is None or c.is_zero():
                continue
            for p2, v in repl[p].items():
                add = c * v
                if add.is_zero():
                    continue
                s = e.get(p2)
                s2 = add if s is None else s + add
                if s2.is_zero():
                    e.pop(p2, None)
                else:
                    e[p2] = s2
                    users.setdefault(p2, set()).add(key)
    for f in fresh:
        params.add(f)
        expr.setdefault(f, {f: one})
    hard.clear()


def _clear_denominators(entries, field, d):
    """Scale a row of optional GammaScalars to polynomial entries."""
    dens: dict = {}
    for e in entries:
        if e is None:
            continue
        for v, m in e.den:
            dens[v] = max(dens.get(v, 0), m)
    mult = GammaPolynomial.const(field, d, 1)
    for v, m in dens.items():
        form = inner_form(field, v)
        for _ in range(m):
            mult = mult * form
    out = []
    for e in entries:
        if e is None or e.is_zero():
            out.append(GammaPolynomial.zero(field, d))
            continue
        p = e.num
        for v, m in dens.items():
            need = m - dict(e.den).get(v, 0)
            form = inner_form(field, v)
            for _ in range(need):
                p = p * form
        out.append(p)
    return out


def polynomial_rank(matrix: list[list[GammaPolynomial]]) -> int:
    """Rank over the fraction field, by fraction-free (Bareiss) elimination."""
    if not matrix:
        return 0
    rows = [list(r) for r in matrix]
    ncols = len(rows[0])
    field, d = rows[0][0].field, rows[0][0].d
    one = GammaPolynomial.const(field, d, 1)
    prev = one
    rank = 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pval = rows[r][c]
        for i in range(r + 1, len(rows)):
            if rows[i][c].is_zero() and prev == one:
                continue
            new_row = []
            for j in range(ncols):
                num = rows[i][j] * pval - rows[i][c] * rows[r][j]
                q, rem = gpoly_divmod(num, prev)
                if not rem.is_zero():
                    raise AssertionError("Bareiss division was not exact")
                new_row.append(q)
            rows[i] = new_row
        prev = pval
        rank += 1
        r += 1
        if r == len(rows):
            break
    return rank


def polynomial_nullspace(matrix: list[list[GammaPolynomial]]):
    """Null space basis of a small polynomial matrix, or None on failure.

    Entries of the returned vectors are GammaScalars; divisions by pivots go
    through the restricted field and may fail, in which case None is returned.
    """
    if not matrix:
        return []
    rows = [list(r) for r in matrix]
    ncols = len(rows[0])
    field, d = rows[0][0].field, rows[0][0].d
    one = GammaPolynomial.const(field, d, 1)
    prev = one
    pivots = []  # (row, col)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pval = rows[r][c]
        for i in range(r + 1, len(rows)):
            new_row = []
            for j in range(ncols):
                num = rows[i][j] * pval - rows[i][c] * rows[r][j]
                q, rem = gpoly_divmod(num, prev)
                if not rem.is_zero():
                    raise AssertionError("Bareiss division was not exact")
                new_row.append(q)
            rows[i] = new_row
        prev = pval
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        vec = [GammaScalar.zero(field, d) for _ in range(ncols)]
        vec[f] = GammaScalar.from_int(field, d, 1)
        try:
            for ri, ci in reversed(pivots):
                s = GammaScalar.zero(field, d)
                for j in range(ci + 1, ncols):
                    if rows[ri][j].is_zero() or vec[j].is_zero():
                        continue
                    s = s + GammaScalar.from_poly(rows[ri][j]) * vec[j]
                if s.is_zero():
                    continue
                vec[ci] = -(s / GammaScalar.from_poly(rows[ri][ci]))
        except UnsupportedDenominatorError:
            return None
        basis.append(vec)
    return basis


def gs_rank(vectors: list[dict], keys: list) -> int:
    """Rank of sparse GammaScalar vectors over the given coordinate order."""
    if not vectors:
        return 0
    field = d = None
    for v in vectors:
        for c in v.values():
            field, d = c.num.field, c.num.d
            break
        if field:
            break
    if field is None:
        return 0
    matrix = []
    for v in vectors:
        entries = [v.get(k) for k in keys]
        matrix.append(_clear_denominators(entries, field, d))
    return polynomial_rank(matrix)


def gs_independent_subset(vectors: list[dict], keys: list) -> list[int]:
    """Indices of a greedy maximal independent subset (deterministic)."""
    chosen: list[int] = []
    current: list[dict] = []
    rank = 0
    for i, v in enumerate(vectors):
        if not v:
            continue
        cand = current + [v]
        r = gs_rank(cand, keys)
        if r > rank:
            chosen.append(i)
            current = cand
            rank = r
    return chosen
