"""Extending a finite action by one new generator.

Given a finite action ``P`` of a group ``H`` on ``q`` blocks and a new
generator ``g`` whose least multiple in ``H`` is ``k g = h`` (``k`` may be
OMEGA when no multiple lands in ``H``), build an action of ``<H, g>``:

* ``k = OMEGA``: ``g`` acts as the identity on the unchanged blocks.
* ``k`` finite: every block ``r`` is split into ``k`` sub-blocks
  ``(r, 0..k-1)``; ``g`` climbs ``(r, i) -> (r, i+1)`` and the last
  sub-block goes to ``(P_h r, 0)``, so ``P_g^k`` is the lift of ``P_h``.

Blocks are processed per class of points with equal orbits (the stabilizer
of a point is constant along its orbit), and within a class the formula is
applied orbit by orbit; it commutes with the lifted base because ``H`` is
abelian.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..group_model import OMEGA, Extent
from . import perm as P
from .action import ActionError, FiniteAction


@dataclass(frozen=True)
class Extension:
    action: FiniteAction
    k: Extent
    h: tuple[int, ...] | None
    orbit_classes: tuple[tuple[tuple[int, ...], ...], ...]


def orbit_classes(base: FiniteAction) -> list[list[list[int]]]:
    """Orbits grouped by their stabilizer (equal-orbit-type classes)."""
    classes: dict[frozenset, list[list[int]]] = {}
    for orb in base.orbits():
        r = orb[0]
        stab = frozenset(p for p in base.image if p[r] == r)
        classes.setdefault(stab, []).append(orb)
    return sorted(classes.values(), key=lambda c: c[0][0])


def extend_finite_action(
    base: FiniteAction, k: Extent, h: Sequence[int] | None = None, order: Extent | None = None
) -> Extension:
    """Adjoin a generator ``g`` with ``k g = h``.

    ``order`` is an optional declared order for ``g``; it must equal
    ``k * ord(h)``.  The enlarged presentation gets the relation
    ``k e_new - h = 0``.
    """
    pres = base.presentation
    classes = orbit_classes(base)
    frozen_classes = tuple(tuple(tuple(o) for o in c) for c in classes)
    if k is OMEGA:
        if h is not None:
            raise ActionError("no base element can be given when no multiple lands in the base")
        if order is not None and order is not OMEGA:
            raise ActionError("a generator with no multiple in the base has infinite order")
        new = FiniteAction(
            base.q, base.gens + (P.identity(base.q),), pres.extend(OMEGA), base.marked
        )
        return Extension(new, OMEGA, None, frozen_classes)
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ActionError(f"multiple must be a positive integer or OMEGA, got {k!r}")
    if h is None or len(h) != pres.rank:
        raise ActionError("base element h must be given over the base generators")
    h = tuple(int(x) for x in h)
    ord_h = pres.element_order(h)
    expected = OMEGA if ord_h is OMEGA else k * ord_h
    if order is not None and order != expected:
        raise ActionError(f"declared order {order} contradicts k * ord(h) = {expected}")
    ph = base.element(h)
    q = base.q
    g = [0] * (q * k)
    for cls in classes:
        for orb in cls:
            for r in orb:
                for i in range(k - 1):
                    g[r * k + i] = r * k + i + 1
                g[r * k + k - 1] = ph[r] * k
    gens = tuple(P.lift(x, k) for x in base.gens) + (tuple(g),)
    rel = tuple(-x for x in h) + (k,)
    new = FiniteAction(q * k, gens, pres.extend(expected, rel), base.marked * k)
    return Extension(new, k, h, frozen_classes)


def restriction_is_lift(ext: Extension, base: FiniteAction) -> bool:
    t = ext.action.q // base.q
    return ext.action.gens[: base.rank] == tuple(P.lift(x, t) for x in base.gens)


def relations_hold(a: FiniteAction) -> bool:
    """Every defining relation (declared orders included) acts trivially."""
    for rel in a.presentation.all_relations():
        if not P.is_identity(a.element(rel)):
            return False
    return all(P.commute(x, y) for i, x in enumerate(a.gens) for y in a.gens[i + 1:])
