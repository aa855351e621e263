"""The families of block actions preserving a fixed partition level.

``build_Lnk(pres, q)`` lists every assignment of block permutations to the
generators of ``pres`` that is an action (commuting, orders and relations
respected).  With ``transitive=True`` only block-transitive members are kept.
Enumeration is exact up to a budget; larger levels use a seeded sampler.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Sequence

from ..group_model import OMEGA
from . import perm as P
from .action import ActionError, FiniteAction
from .metric import DEFAULT_LEVELS, BudgetError, LevelError, LevelSequence, MetricValue, budget, metric_d
from .presentation import Presentation

ENUM_MAX_Q = 7


def _fits(pres: Presentation, i: int, g: P.Perm) -> bool:
    o = pres.orders[i]
    return o is OMEGA or o % P.order(g) == 0


def _relations_ok(pres: Presentation, gens: Sequence[P.Perm], q: int) -> bool:
    for r in pres.relations:
        acc = P.identity(q)
        for g, c in zip(gens, r):
            if c:
                acc = P.compose(P.power(g, c), acc)
        if not P.is_identity(acc):
            return False
    return True


def enumerate_Lnk(pres: Presentation, q: int, transitive: bool = False, max_q: int | None = None) -> Iterator[FiniteAction]:
    """Every member at level ``q``, in lexicographic order of the generator tuple."""
    limit = max_q if max_q is not None else budget("lnk_q", ENUM_MAX_Q)
    if q > limit:
        raise BudgetError(f"enumeration at q = {q} exceeds the limit {limit}")
    if transitive and pres.is_finite() and pres.group_order() < q:
        return
    allp = sorted(permutations(range(q)))
    r = pres.rank
    chosen: list[P.Perm] = []

    def rec(i, pool):
        if i == r:
            if _relations_ok(pres, chosen, q):
                if not transitive or len(P.orbits(chosen, q)) == 1:
                    yield FiniteAction(q, tuple(chosen), pres, check=False)
            return
        for g in pool:
            if _fits(pres, i, g):
                chosen.append(g)
                yield from rec(i + 1, [h for h in pool if P.commute(g, h)])
                chosen.pop()

    yield from rec(0, allp)


# ---------------------------------------------------------------- sampler
def _abelian_of_order(m: int) -> list[tuple[int, ...]]:
    from ..finite import abelian_groups_of_order

    return [tuple(f) for f in abelian_groups_of_order(m)]


def _transitive_piece(pres: Presentation, m: int, rng: random.Random, tries: int = 64):
    """A regular action of a random order-``m`` quotient of ``pres`` on ``m`` points,
    as generator images ``(factors, images)``; None if none was found."""
    from ..finite import FiniteAbelian

    if m == 1:
        return (), [()] * pres.rank
    shapes = _abelian_of_order(m)
    for _ in range(tries):
        a = FiniteAbelian(rng.choice(shapes))
        imgs = []
        for o in pres.orders:
            cand = [x for x in a.elements if o is OMEGA or not any(a.scale(o, x))]
            imgs.append(rng.choice(cand))
        ok = all(
            not any(_lin(a, r, imgs)) for r in pres.relations
        )
        if ok and len(a.generated(imgs)) == a.order:
            return tuple(a.factors), imgs
    return None


def _lin(a, coeffs, imgs):
    out = a.zero()
    for c, x in zip(coeffs, imgs):
        out = a.add(out, a.scale(c, x))
    return out


def _piece_perms(factors, imgs):
    from ..finite import FiniteAbelian

    a = FiniteAbelian(factors)
    if a.order == 1:
        return [(0,)] * len(imgs)
    return [tuple(a.index(a.add(x, y)) for x in a.elements) for y in imgs]


def sample_Lnk(
    pres: Presentation, q: int, count: int, seed: int, transitive: bool = False
) -> list[FiniteAction]:
    """``count`` random members (duplicates possible).

    A sample is a disjoint union of transitive pieces, each a regular action
    of a random quotient, followed by a uniformly random relabelling of the
    blocks.  Returns ``[]`` when the level admits no transitive member.
    """
    rng = random.Random(seed)
    if transitive and pres.is_finite() and pres.group_order() < q:
        return []
    out = []
    for _ in range(count):
        if transitive:
            sizes = [q]
        else:
            sizes, left = [], q
            while left:
                s = rng.randint(1, left)
                sizes.append(s)
                left -= s
        gens = [[] for _ in range(pres.rank)]
        offset = 0
        failed = False
        for s in sizes:
            piece = _transitive_piece(pres, s, rng)
            if piece is None:
                if transitive:
                    failed = True
                    break
                piece_perms = [tuple(range(s))] * pres.rank  # identity piece keeps the size
            else:
                piece_perms = _piece_perms(*piece)
            for i, pp in enumerate(piece_perms):
                gens[i].extend(offset + x for x in pp)
            offset += s
        if failed:
            continue
        relabel = list(range(q))
        rng.shuffle(relabel)
        inv = P.inverse(tuple(relabel))
        gens = [P.compose(tuple(relabel), P.compose(tuple(g), inv)) for g in gens]
        out.append(FiniteAction(q, tuple(gens), pres))
    return out


def build_Lnk(
    pres: Presentation,
    q: int,
    transitive: bool = False,
    mode: str = "auto",
    count: int = 100,
    seed: int | None = None,
    max_q: int | None = None,
) -> list[FiniteAction]:
    """Members at level ``q``: all of them (``mode="enumerate"``), ``count``
    samples (``"sample"``, needs ``seed``), or enumeration when within budget."""
    limit = max_q if max_q is not None else budget("lnk_q", ENUM_MAX_Q)
    if mode == "auto":
        mode = "enumerate" if q <= limit else "sample"
    if mode == "enumerate":
        return list(enumerate_Lnk(pres, q, transitive, limit))
    if mode == "sample":
        if seed is None:
            raise ValueError("sampling needs a seed")
        return sample_Lnk(pres, q, count, seed, transitive)
    raise ValueError(f"unknown mode {mode!r}")


def is_member(a: FiniteAction, transitive: bool = False) -> bool:
    try:
        FiniteAction(a.q, a.gens, a.presentation, a.marked)
    except ActionError:
        return False
    return not transitive or a.is_transitive()


# ------------------------------------------------------------------ probe
@dataclass
class ProbeResult:
    best: FiniteAction | None
    distance: MetricValue | None
    level: int | None
    success: bool
    exhausted: bool
    checked: int
    announced_bound: MetricValue | None = None
    levels_searched: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "best": self.best.to_json() if self.best else None,
            "distance": self.distance.to_json() if self.distance is not None else None,
            "level": self.level,
            "success": self.success,
            "exhausted": self.exhausted,
            "checked": self.checked,
            "announced_bound": self.announced_bound.to_json() if self.announced_bound is not None else None,
            "levels_searched": self.levels_searched,
        }


def action_distance(a: FiniteAction, b: FiniteAction, gens: Sequence[int] | None = None, levels=DEFAULT_LEVELS) -> MetricValue:
    """Largest generator-wise distance over the chosen generator indices."""
    idx = range(a.rank) if gens is None else gens
    best = MetricValue()
    for i in idx:
        d = metric_d(a.gens[i], b.gens[i], levels)
        if d > best:
            best = d
    return best


def rounded_candidate(target: FiniteAction, q: int) -> FiniteAction | None:
    """Coarsen by ``b -> target(b t) // t``; None if that is not an action at level ``q``."""
    t = target.q // q
    gens = []
    for g in target.gens:
        img = tuple(g[b * t] // t for b in range(q))
        if len(set(img)) != q:
            return None
        gens.append(img)
    try:
        return FiniteAction(q, tuple(gens), target.presentation)
    except ActionError:
        return None


def probe_levels(target_q: int, levels: LevelSequence) -> list[int]:
    out, n = [], 1
    while True:
        q = levels.q(n)
        if q > target_q:
            break
        if target_q % q == 0 and q not in out:
            out.append(q)
        if q == target_q:
            break
        n += 1
    return out


def density_probe(
    target: FiniteAction,
    eps,
    gens: Sequence[int] | None = None,
    levels: LevelSequence = DEFAULT_LEVELS,
    candidate_levels: Sequence[int] | None = None,
    transitive: bool = False,
    samples: int = 50,
    seed: int = 0,
    max_candidates: int | None = None,
) -> ProbeResult:
    """Bounded search for the member of the families closest to ``target``.

    Candidate levels are those of ``levels`` dividing the target's block
    count (or ``candidate_levels``).  Small levels are enumerated, larger
    ones contribute the rounded coarsening plus ``samples`` random members.
    ``announced_bound`` is the distance of the rounded coarsening at the
    finest candidate level below the target, when that coarsening is an
    action.  Running out of budget sets ``exhausted`` instead of raising.
    """
    if levels is not None:
        try:
            levels.first_index(target.q)
        except LevelError:
            pass
    cand_levels = list(candidate_levels) if candidate_levels is not None else probe_levels(target.q, levels)
    for q in cand_levels:
        if target.q % q:
            raise LevelError(f"candidate level {q} does not divide target level {target.q}")
    cap = max_candidates if max_candidates is not None else budget("probe", 20000)
    eps_v = MetricValue._coerce(eps) if not isinstance(eps, MetricValue) else eps
    best = best_d = best_q = None
    checked = 0
    exhausted = False
    bound = None
    lim = budget("lnk_q", ENUM_MAX_Q)

    def consider(c, q):
        nonlocal best, best_d, best_q, checked
        checked += 1
        d = action_distance(target, c, gens, levels)
        if best_d is None or d < best_d:
            best, best_d, best_q = c, d, q
        return d

    below = [q for q in cand_levels if q < target.q]
    if below:
        rc = rounded_candidate(target, max(below))
        if rc is not None:
            bound = action_distance(target, rc, gens, levels)
    for q in cand_levels:
        if exhausted:
            break
        if q <= lim:
            pool = enumerate_Lnk(target.presentation, q, transitive, lim)
        else:
            pool = []
            rc = rounded_candidate(target, q)
            if rc is not None and (not transitive or rc.is_transitive()):
                pool.append(rc)
            pool.extend(sample_Lnk(target.presentation, q, samples, seed + q, transitive))
        for c in pool:
            if checked >= cap:
                exhausted = True
                break
            d = consider(c, q)
            if d.is_zero():
                break
        if best_d is not None and best_d.is_zero():
            break
    success = best_d is not None and best_d < eps_v
    return ProbeResult(best, best_d, best_q, success, exhausted, checked, bound, cand_levels)
