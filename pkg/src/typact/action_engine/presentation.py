"""Finitely generated abelian groups ``Z^m / R`` given by generators and relations.

A generator may carry a declared finite order ``n`` (the relation
``n e_i = 0``) or :data:`~typact.group_model.OMEGA`.  Everything reduces to
the Smith normal form of the relation matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..group_model import OMEGA, Extent, GroupError

Vector = tuple[int, ...]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(D, U, V)`` with ``U A V = D`` diagonal, ``d_1 | d_2 | ...``.

    ``A`` is ``k x m`` with integer entries; ``U`` and ``V`` are unimodular.
    Plain elimination with gcd pivots; fine for the small matrices used here.
    """
    rows = [list(r) for r in a]
    k = len(rows)
    m = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    A = [r[:] for r in rows]
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):  # col_dst += c * col_src
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    t = 0
    while t < min(k, m):
        # pivot: smallest non-zero absolute entry in the remaining block
        best = None
        for i in range(t, k):
            for j in range(t, m):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, k):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: the pivot must divide the rest of the block
                for i in range(t + 1, k):
                    for j in range(t + 1, m):
                        if A[i][j] % A[t][t]:
                            add_row(i, t, 1)
                            done = False
                            break
                    if not done:
                        break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def inverse_unimodular(v: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1."""
    from fractions import Fraction

    n = len(v)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(v)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[x for x in row[n:]] for row in M]
    if any(x.denominator != 1 for row in out for x in row):
        raise GroupError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Generators of ``{x in Z^ncols : A x = 0}``."""
    D, U, V = smith_normal_form(a, ncols)
    rank = sum(1 for i in range(min(len(D), ncols)) if D[i][i] != 0)
    return [tuple(V[r][c] for r in range(ncols)) for c in range(rank, ncols)]


@dataclass(frozen=True)
class Presentation:
    """Abelian group on generators ``e_1..e_m`` with declared orders and relations."""

    orders: tuple[Extent, ...]
    relations: tuple[Vector, ...] = ()

    def __post_init__(self):
        for o in self.orders:
            if o is not OMEGA and (isinstance(o, bool) or not isinstance(o, int) or o < 1):
                raise GroupError(f"declared order must be a positive integer or OMEGA, got {o!r}")
        for r in self.relations:
            if len(r) != len(self.orders):
                raise GroupError(f"relation {r} has the wrong length")

    @property
    def rank(self) -> int:
        return len(self.orders)

    def all_relations(self) -> list[Vector]:
        m = self.rank
        out = [tuple(o if j == i else 0 for j in range(m)) for i, o in enumerate(self.orders) if o is not OMEGA]
        out.extend(tuple(r) for r in self.relations)
        return out

    @cached_property
    def _snf(self):
        rels = self.all_relations()
        m = self.rank
        if not rels:
            rels_m = [[0] * m]
        else:
            rels_m = [list(r) for r in rels]
        D, U, V = smith_normal_form(rels_m, m)
        diag = [abs(D[i][i]) if i < len(D) else 0 for i in range(m)]
        return diag, V, inverse_unimodular(V) if m else []

    def coordinates(self, x: Sequence[int]) -> Vector:
        """Coordinates ``x V`` in the diagonal basis (reduced mod the factors)."""
        diag, V, _ = self._snf
        y = [sum(x[i] * V[i][j] for i in range(self.rank)) for j in range(self.rank)]
        return tuple(yj % d if d else yj for yj, d in zip(y, diag))

    def invariant_factors(self) -> tuple[tuple[int, ...], int]:
        """``((d_1, ..., d_s), free_rank)`` with units dropped."""
        diag = self._snf[0]
        return tuple(d for d in diag if d > 1), sum(1 for d in diag if d == 0)

    def is_finite(self) -> bool:
        return self.invariant_factors()[1] == 0

    def group_order(self) -> Extent:
        fs, free = self.invariant_factors()
        return OMEGA if free else math.prod(fs)

    def element_order(self, x: Sequence[int]) -> Extent:
        diag = self._snf[0]
        out = 1
        for yj, d in zip(self.coordinates(x), diag):
            if d == 0:
                if yj:
                    return OMEGA
            else:
                out = math.lcm(out, d // math.gcd(d, yj))
        return out

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.coordinates(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero(tuple(a - b for a, b in zip(x, y)))

    def basis(self) -> list[tuple[Vector, Extent]]:
        """Generators of the cyclic factors, as integer vectors over ``e_i``, with their orders.

        These are the rows of ``V^-1`` for the non-unit diagonal entries, in
        ascending divisibility order, followed by the free generators.
        """
        diag, _, Vinv = self._snf
        fin = [(tuple(Vinv[j]), d) for j, d in enumerate(diag) if d > 1]
        free = [(tuple(Vinv[j]), OMEGA) for j, d in enumerate(diag) if d == 0]
        return fin + free

    def extend(self, order: Extent, relation: Sequence[int] | None = None) -> "Presentation":
        """Add a generator (and optionally one relation on the enlarged list)."""
        rels = tuple(tuple(r) + (0,) for r in self.relations)
        if relation is not None:
            if len(relation) != self.rank + 1:
                raise GroupError("relation must cover the enlarged generator list")
            rels = rels + (tuple(relation),)
        return Presentation(self.orders + (order,), rels)

    def to_json(self) -> dict:
        return {
            "orders": ["inf" if o is OMEGA else o for o in self.orders],
            "relations": [list(r) for r in self.relations],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Presentation":
        orders = tuple(OMEGA if o in ("inf", None) else int(o) for o in d["orders"])
        return cls(orders, tuple(tuple(int(x) for x in r) for r in d.get("relations", ())))


def cyclic_presentation(*orders: Extent) -> Presentation:
    return Presentation(tuple(orders))


def kernel_relations(images: Sequence[Sequence[int]], factors: Sequence[int]) -> list[Vector]:
    """Generators of the kernel of ``Z^m -> sum Z/n_i``, ``e_j -> images[j]``."""
    m = len(images)
    r = len(factors)
    # columns: the m generators, then r columns for multiples of n_i
    a = [[images[j][i] for j in range(m)] + [-(factors[i]) if t == i else 0 for t in range(r)] for i in range(r)]
    if r == 0:
        return [tuple(int(i == j) for j in range(m)) for i in range(m)]
    kern = integer_kernel(a, m + r)
    out = []
    for v in kern:
        proj = tuple(v[:m])
        if any(proj):
            out.append(proj)
    return out
