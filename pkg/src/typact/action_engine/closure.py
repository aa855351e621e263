"""Centralizers and the marked-block parametrization of transitive finite actions.

For an action that is transitive on blocks and in which fixing one block
forces the identity, ``phi(P_g) = P_g C_1`` identifies the acting group with
the blocks.  Every block permutation commuting with the action is then some
``P_g``; :func:`weak_closure_witness` finds that ``g``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .. import _kernels
from ..group_model import OMEGA
from . import perm as P
from .action import ActionError, FiniteAction
from .metric import BudgetError, budget
from .presentation import Presentation

FULL_SEARCH_MAX_Q = 10


# ------------------------------------------------------------ centralizer
def _centralizer_orbit(gens: Sequence[P.Perm], q: int) -> list[P.Perm]:
    """Backtracking over images of orbit representatives.

    A commuting ``c`` is determined on an orbit by the image ``y`` of its
    representative: ``c(g x) = g c(x)``.  Each choice is propagated along
    the generators, checking consistency and injectivity.
    """
    orbs = P.orbits(gens, q)
    reps = [o[0] for o in orbs]
    out = []
    c = [-1] * q
    used = [False] * q

    def assign(rep, y):
        """Propagate ``c(rep) = y``; return the blocks set, or None on conflict."""
        placed = []
        stack = [(rep, y)]
        while stack:
            x, img = stack.pop()
            if c[x] != -1:
                if c[x] != img:
                    return placed, False
                continue
            if used[img]:
                return placed, False
            c[x] = img
            used[img] = True
            placed.append(x)
            for g in gens:
                stack.append((g[x], g[img]))
        return placed, True

    def undo(placed):
        for x in placed:
            used[c[x]] = False
            c[x] = -1

    def rec(i):
        if i == len(reps):
            out.append(tuple(c))
            return
        for y in range(q):
            if used[y]:
                continue
            placed, ok = assign(reps[i], y)
            if ok:
                rec(i + 1)
            undo(placed)

    rec(0)
    return sorted(out)


def centralizer_brute(a: FiniteAction, method: str = "auto", max_q: int | None = None) -> list[P.Perm]:
    """All block permutations commuting with every generator, sorted.

    ``method="full"`` scans the whole symmetric group (``q <= max_q``,
    default 10); ``"orbit"`` backtracks over orbit representatives;
    ``"auto"`` uses the full scan for ``q <= 7``.
    """
    q = a.q
    if method == "auto":
        method = "full" if q <= 7 else "orbit"
    if method == "full":
        limit = max_q if max_q is not None else budget("full_q", FULL_SEARCH_MAX_Q)
        if q > limit:
            raise BudgetError(f"full symmetric-group search needs q <= {limit}, got {q}")
        return _kernels.centralizer_full(list(a.gens), q)
    if method == "orbit":
        limit = max_q if max_q is not None else budget("orbit_q", 256)
        if q > limit:
            raise BudgetError(f"orbit search needs q <= {limit}, got {q}")
        return _centralizer_orbit(a.gens, q)
    raise ValueError(f"unknown method {method!r}")


# ------------------------------------------------------- parametrization
def require_finite_transitive(a: FiniteAction):
    if not a.is_transitive():
        raise ActionError("action is not transitive on blocks")
    if not a.fixed_block_condition():
        raise ActionError("a non-identity element fixes a block")


@dataclass(frozen=True)
class Parametrization:
    """``P_{sum c_i w_i} C_1 = labels[c]`` for ``0 <= c_i < orders[i]``.

    ``basis[i]`` is ``w_i`` as an integer vector over the action's generators.
    """

    basis: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]
    labels: dict
    marked: int

    def element(self, coords: Sequence[int]) -> tuple[int, ...]:
        """The group element ``sum c_i w_i`` over the original generators."""
        m = len(self.basis[0]) if self.basis else 0
        out = [0] * m
        for c, w in zip(coords, self.basis):
            for j in range(m):
                out[j] += c * w[j]
        return tuple(out)

    def coords_of_block(self, block: int) -> tuple[int, ...]:
        return self.inverse[block]

    @property
    def inverse(self) -> dict:
        return {b: c for c, b in self.labels.items()}

    def to_json(self) -> dict:
        return {
            "basis": [list(w) for w in self.basis],
            "orders": list(self.orders),
            "marked_block": self.marked + 1,
            "labels": [{"coords": list(c), "block": b + 1} for c, b in sorted(self.labels.items())],
        }


def block_words(a: FiniteAction) -> dict[int, tuple[int, ...]]:
    """For each reachable block a vector ``v`` with ``P_v C_marked = block`` (BFS)."""
    m = a.rank
    words = {a.marked: (0,) * m}
    queue = [a.marked]
    for b in queue:
        for i, g in enumerate(a.gens):
            y = g[b]
            if y not in words:
                v = list(words[b])
                v[i] += 1
                words[y] = tuple(v)
                queue.append(y)
    return words


def relation_lattice(a: FiniteAction) -> list[tuple[int, ...]]:
    """Generators of ``{v : P_v = id}`` for a transitive action with the
    fixed-block condition: fundamental cycles of the Schreier graph plus
    declared orders."""
    words = block_words(a)
    m = a.rank
    rels = []
    for b, v in words.items():
        for i, g in enumerate(a.gens):
            w = list(v)
            w[i] += 1
            target = words[g[b]]
            r = tuple(x - y for x, y in zip(w, target))
            if any(r):
                rels.append(r)
    for i, o in enumerate(a.presentation.orders):
        if o is not OMEGA:
            rels.append(tuple(o if j == i else 0 for j in range(m)))
    return sorted(set(rels))


def canonical_parametrization(a: FiniteAction) -> Parametrization:
    """Invariant-factor decomposition of the acting group and the block labelling.

    The basis comes from the Smith normal form of the relation lattice, so
    the orders are the invariant factors in ascending divisibility order;
    their product is ``q``.
    """
    require_finite_transitive(a)
    m = a.rank
    pres = Presentation((OMEGA,) * m, tuple(relation_lattice(a)))
    facs, free = pres.invariant_factors()
    if free or math.prod(facs) != a.q:  # pragma: no cover - excluded by the checks above
        raise ActionError("acting group does not match the block count")
    basis = tuple(w for w, _ in pres.basis())
    steps = [a.element(w) for w in basis]
    labels = {}

    def fill(i, block, prefix):
        if i == len(facs):
            labels[prefix] = block
            return
        for c in range(facs[i]):
            fill(i + 1, block, prefix + (c,))
            block = steps[i][block]

    fill(0, a.marked, ())
    if len(set(labels.values())) != a.q:  # pragma: no cover
        raise ActionError("parametrization is not a bijection")
    return Parametrization(basis, tuple(facs), labels, a.marked)


@dataclass(frozen=True)
class Witness:
    coords: tuple[int, ...]
    element: tuple[int, ...]

    def to_json(self) -> dict:
        return {"coords": list(self.coords), "element": list(self.element)}


def weak_closure_witness(a: FiniteAction, s: Sequence[int], param: Parametrization | None = None) -> Witness:
    """The group element ``g`` (in the parametrization's index set) with ``P_g = s``."""
    s = P.check_perm(s, a.q)
    require_finite_transitive(a)
    if not a.commutes_with(s):
        raise ActionError("permutation does not commute with the action")
    param = param or canonical_parametrization(a)
    coords = param.inverse[s[a.marked]]
    g = param.element(coords)
    if a.element(g) != s:  # pragma: no cover - impossible for a regular action
        raise ActionError("no action element realises the permutation")
    return Witness(coords, g)


# ----------------------------------------------------------------- defect
def window_size(orders: Sequence[int]) -> int:
    return math.prod(4 * p + 1 for p in orders)


def _defect_terms(target: FiniteAction, p: FiniteAction, param: Parametrization):
    """Yield ``(coords, mismatched fine blocks)`` over the unfolded window.

    Only the images of the marked block are tracked: the last coordinate is
    stepped by applying ``P_{w_last}`` once per term.
    """
    t = target.q // p.q
    c1 = list(range(p.marked * t, p.marked * t + t))
    orders = param.orders
    if not orders:  # trivial group, single block
        yield (), 0
        return
    *head, last = orders
    w_last = param.basis[-1]
    step_t = target.element(w_last)
    step_p = p.element(w_last)
    for prefix in product(*(range(-2 * o, 2 * o + 1) for o in head)):
        g0 = list(param.element(tuple(prefix) + (-2 * last,)))
        tg = target.element(g0)
        pts = [tg[x] for x in c1]
        blk = p.element(g0)[p.marked]
        for c in range(-2 * last, 2 * last + 1):
            img = set(pts)
            lo = blk * t
            mism = sum(1 for x in img if not lo <= x < lo + t) * 2
            yield tuple(prefix) + (c,), mism
            pts = [step_t[x] for x in pts]
            blk = step_p[blk]


def _check_defect_inputs(target: FiniteAction, p: FiniteAction):
    require_finite_transitive(p)
    if target.q % p.q:
        raise ActionError(f"target level {target.q} does not refine level {p.q}")
    if target.rank != p.rank:
        raise ActionError("target and approximation must have the same generators")


def good_approx_defect(target: FiniteAction, p: FiniteAction, param: Parametrization | None = None) -> Fraction:
    """``omega^2 * sum_{|c_i| <= 2 p_i} mu(T_g C_1 Δ P_g C_1)`` with
    ``g = sum c_i w_i`` and ``omega = q`` the number of blocks of ``p``.

    The window is not folded modulo the orders.  ``target`` must act by the
    same generators on a refinement of ``p``'s blocks.
    """
    _check_defect_inputs(target, p)
    param = param or canonical_parametrization(p)
    total = sum(m for _, m in _defect_terms(target, p, param))
    return Fraction(p.q * p.q * total, target.q)


def defect_rows(target: FiniteAction, p: FiniteAction):
    """Per-element terms ``(coords, mu)`` of :func:`good_approx_defect` (for CSV output)."""
    _check_defect_inputs(target, p)
    param = canonical_parametrization(p)
    for coords, m in _defect_terms(target, p, param):
        yield coords, Fraction(m, target.q)
