"""Finite actions of finitely generated abelian groups by block permutations.

The unit interval is cut into ``q`` equal half-open blocks and every group
element moves blocks onto blocks by translation, so an action is captured
by one permutation of ``range(q)`` per generator.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from ..group_model import OMEGA, GroupError
from . import perm as P
from .presentation import Presentation

Perm = P.Perm


class ActionError(GroupError):
    """A block-permutation assignment violates the action axioms."""


@dataclass(frozen=True)
class FiniteAction:
    """Action of ``presentation`` on ``q`` blocks.

    ``gens[i]`` is the permutation assigned to the i-th generator and
    ``marked`` the marked block (0-indexed internally, 1 in JSON).
    """

    q: int
    gens: tuple[Perm, ...]
    presentation: Presentation
    marked: int = 0
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.q < 1:
            raise ActionError("an action needs at least one block")
        object.__setattr__(self, "gens", tuple(P.check_perm(g, self.q) for g in self.gens))
        if len(self.gens) != self.presentation.rank:
            raise ActionError("one permutation per generator is required")
        if not 0 <= self.marked < self.q:
            raise ActionError(f"marked block {self.marked} out of range")
        if self.check:
            self.validate()

    # -- construction --------------------------------------------------------
    @classmethod
    def of(cls, q: int, gens: Sequence[Sequence[int]], orders=None, relations=(), marked: int = 0) -> "FiniteAction":
        gens = tuple(P.check_perm(g, q) for g in gens)
        if orders is None:
            orders = tuple(P.order(g) for g in gens)
        return cls(q, gens, Presentation(tuple(orders), tuple(tuple(r) for r in relations)), marked)

    @classmethod
    def regular(cls, factors: Sequence[int]) -> "FiniteAction":
        """Regular action of ``Z/n_1 + ... + Z/n_r`` on its own elements
        (mixed radix, last coordinate fastest); generator ``i`` adds ``e_i``."""
        from ..finite import FiniteAbelian

        g = FiniteAbelian(factors)
        gens = []
        for i in range(len(g.factors)):
            e = tuple(int(j == i) for j in range(len(g.factors)))
            gens.append(tuple(g.index(g.add(x, e)) for x in g.elements))
        return cls(max(g.order, 1), tuple(gens), Presentation(tuple(g.factors)))

    # -- validation ----------------------------------------------------------
    def validate(self):
        for i, a in enumerate(self.gens):
            for b in self.gens[i + 1:]:
                if not P.commute(a, b):
                    raise ActionError("assigned permutations do not commute")
        for g, o in zip(self.gens, self.presentation.orders):
            if o is not OMEGA and o % P.order(g):
                raise ActionError(f"permutation order {P.order(g)} does not divide declared order {o}")
        for r in self.presentation.relations:
            if not P.is_identity(self.element(r)):
                raise ActionError(f"relation {r} does not act trivially")

    # -- evaluation ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.gens)

    def element(self, c: Sequence[int]) -> Perm:
        """Permutation of the group element ``sum c_i e_i``."""
        if len(c) != self.rank:
            raise ActionError(f"element {tuple(c)} has the wrong length")
        out = P.identity(self.q)
        for g, ci in zip(self.gens, c):
            if ci:
                out = P.compose(P.power(g, ci), out)
        return out

    def lift(self, t: int) -> "FiniteAction":
        """Same action with every block split into ``t`` sub-blocks."""
        return FiniteAction(
            self.q * t, tuple(P.lift(g, t) for g in self.gens), self.presentation, self.marked * t, check=False
        )

    @cached_property
    def image(self) -> frozenset:
        """All permutations ``P_g`` (closure of the generators)."""
        start = P.identity(self.q)
        seen = {start}
        queue = [start]
        for x in queue:
            for g in self.gens:
                y = P.compose(g, x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def orbits(self) -> list[list[int]]:
        return P.orbits(self.gens, self.q)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def fixed_block_condition(self) -> bool:
        """Does fixing one block force the identity?  For a transitive action
        this is equivalent to ``|image| == q``."""
        return all(P.is_identity(p) for p in self.image if p[self.marked] == self.marked)

    def is_finite_transitive(self) -> bool:
        return self.is_transitive() and len(self.image) == self.q

    def commutes_with(self, s: Perm) -> bool:
        return all(P.commute(g, s) for g in self.gens)

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "q": self.q,
            "generators": [
                {"order": "inf" if o is OMEGA else o, "permutation": P.to_one_line(g)}
                for g, o in zip(self.gens, self.presentation.orders)
            ],
            "relations": [list(r) for r in self.presentation.relations],
            "marked_block": self.marked + 1,
        }

    @classmethod
    def from_json(cls, d: dict | str) -> "FiniteAction":
        if isinstance(d, str):
            d = json.loads(d)
        gens = tuple(P.from_one_line(g["permutation"]) for g in d["generators"])
        orders = tuple(OMEGA if g.get("order", "inf") in ("inf", None) else int(g["order"]) for g in d["generators"])
        rels = tuple(tuple(int(x) for x in r) for r in d.get("relations", ()))
        return cls(int(d["q"]), gens, Presentation(orders, rels), int(d.get("marked_block", 1)) - 1)
