"""Relation-guided extension of a finite action by new generators.

A base action ``S`` of ``H`` at level ``q`` is extended to ``<H, g_1..g_r>``
where the smallest positive multiple ``s_i g_i`` lying in
``<H, g_1..g_{i-1}>`` is ``h(i) + sum_{j<i} k_j(i) g_j`` (``s_i`` may be
OMEGA).  Every block is cut into ``s~_1 ... s~_r`` sub-blocks with
mixed-radix coordinates ``(j_1, .., j_r)``, ``j_1`` most significant
(``s~_i = s_i``, or 1 when ``s_i`` is OMEGA).  With ``Delta_i`` advancing
``j_i`` cyclically, the new generator acts as

* ``T_{h_i}`` if ``s_i`` is OMEGA,
* the composite ``C_i = T_{h(i)} prod_j T_{g_j}^{k_j(i)}`` if ``s_i = 1``,
* ``T_{h_i} Delta_i`` where ``j_i != s_i - 1`` and
  ``C_i T_{h_i}^{1 - s_i} Delta_i`` where ``j_i = s_i - 1`` otherwise,

so ``T_{g_i}^{s_i} = C_i`` holds exactly.  ``h_1..h_r`` are elements of ``H``
approximating the new generators.  Distances to a reference action ``T`` of
the whole group are compared against ``gamma / lambda`` with
``lambda = 36 (3c)^r``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..group_model import OMEGA, Extent
from . import perm as P
from .action import ActionError, FiniteAction
from .metric import LevelSequence, dn_at_q, metric_d, zeta2_tail_bounds
from .presentation import Presentation, kernel_relations

Vector = tuple[int, ...]


@dataclass(frozen=True)
class RelationData:
    """``s[i] g_i = h[i] + sum_{j<i} k[i][j] g_j``; ``h[i]`` is over the base generators.

    For ``s[i] = OMEGA`` the entries ``h[i]`` and ``k[i]`` are ignored (None / ()).
    """

    s: tuple[Extent, ...]
    h: tuple[Vector | None, ...]
    k: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        r = len(self.s)
        if len(self.h) != r or len(self.k) != r:
            raise ActionError("relation data needs s, h and k for every new generator")
        for i, (s, h, k) in enumerate(zip(self.s, self.h, self.k)):
            if s is OMEGA:
                continue
            if isinstance(s, bool) or not isinstance(s, int) or s < 1:
                raise ActionError(f"s_{i + 1} must be a positive integer or OMEGA, got {s!r}")
            if h is None:
                raise ActionError(f"relation {i + 1} is missing its base element")
            if len(k) != i:
                raise ActionError(f"relation {i + 1} needs {i} exponents, got {len(k)}")

    @property
    def r(self) -> int:
        return len(self.s)

    @property
    def finite(self) -> list[int]:
        return [i for i, s in enumerate(self.s) if s is not OMEGA]

    @property
    def c(self) -> int:
        """``max |k_j(i)|``, and at least 1 (so ``lambda`` stays positive)."""
        ks = [abs(x) for i in self.finite for x in self.k[i]]
        return max([1] + ks)

    @property
    def lam(self) -> int:
        return 36 * (3 * self.c) ** self.r

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(1 if s is OMEGA else s for s in self.s)

    def to_json(self) -> dict:
        return {
            "s": ["inf" if s is OMEGA else s for s in self.s],
            "h": [None if h is None else list(h) for h in self.h],
            "k": [list(k) for k in self.k],
            "c": self.c,
            "lambda": self.lam,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RelationData":
        s = tuple(OMEGA if x in ("inf", None) else int(x) for x in d["s"])
        h = tuple(None if x is None else tuple(int(v) for v in x) for x in d["h"])
        k = tuple(tuple(int(v) for v in x) for x in d["k"])
        return cls(s, h, k)


# ------------------------------------------------------------- helpers
def _elem(a: FiniteAction, v: Sequence[int]) -> P.Perm:
    return a.element(tuple(v))


def _mix(q: int, widths: Sequence[int]):
    S = math.prod(widths)
    w = [math.prod(widths[i + 1:]) for i in range(len(widths))]
    return S, w


def delta(q: int, widths: Sequence[int], i: int) -> P.Perm:
    """Cyclic shift of sub-block coordinate ``j_i`` inside every block."""
    S, w = _mix(q, widths)
    s = widths[i]
    out = [0] * (q * S)
    for x in range(q * S):
        ji = (x % S) // w[i] % s
        out[x] = x + ((ji + 1) % s - ji) * w[i]
    return tuple(out)


def _coord(x: int, S: int, w: Sequence[int], widths, i: int) -> int:
    return (x % S) // w[i] % widths[i]


@dataclass
class RGEResult:
    action: FiniteAction
    base_rank: int
    rel: RelationData
    gamma: Fraction
    levels: LevelSequence
    cut_index: int
    relations_exact: bool
    commuting: bool
    hypotheses: dict = field(default_factory=dict)
    bound19: list = field(default_factory=list)
    contraction: list = field(default_factory=list)

    @property
    def new_gens(self) -> tuple[P.Perm, ...]:
        return self.action.gens[self.base_rank:]

    @property
    def hypotheses_hold(self) -> bool | None:
        if not self.hypotheses:
            return None
        return all(self.hypotheses[k] for k in ("14", "16", "17", "18"))

    @property
    def bound_holds(self) -> bool:
        return all(ok for _, _, ok in self.bound19)

    def to_json(self) -> dict:
        return {
            "action": self.action.to_json(),
            "relation_data": self.rel.to_json(),
            "gamma": str(self.gamma),
            "levels": self.levels.to_json(),
            "cut_index": self.cut_index,
            "relations_exact": self.relations_exact,
            "commuting": self.commuting,
            "hypotheses": self.hypotheses,
            "hypotheses_hold": self.hypotheses_hold,
            "bound19": [{"value": v.to_json(), "bound": str(b), "holds": ok} for v, b, ok in self.bound19],
            "contraction": self.contraction,
        }


def default_levels(q: int, gamma: Fraction, rel: RelationData, prefix: int = 0) -> tuple[LevelSequence, int]:
    """Levels ``1 (prefix times), q (enough times), then q * s~ geometrically``.

    The base level is repeated until its last index ``n`` satisfies the tail
    condition ``zeta(2) - H2(n) < gamma / lambda`` (every ``d_n <= 1``).
    Returns the sequence and that index.
    """
    n0 = tail_index(gamma / rel.lam)
    runs = []
    if prefix:
        runs.append((1, prefix))
    count = max(1, n0 - prefix)
    runs.append((q, count))
    factor = max(2, math.prod(rel.widths))
    return LevelSequence(runs, factor), prefix + count


def tail_index(eps: Fraction) -> int:
    """Least ``n`` with ``zeta(2) - H2(n) < eps``, certified with the upper tail bound."""
    if eps <= 0:
        raise ValueError("tail bound must be positive")
    # zeta(2) - H2(n) < 1/n, > 1/(n+1); start near 1/eps
    n = max(1, int(1 / eps) - 2)
    while not (_tail_upper(n) < eps):
        n += 1
    while n > 1 and _tail_upper(n - 1) < eps:
        n -= 1
    return n


def _tail_upper(n: int) -> Fraction:
    """Certified upper bound on ``zeta(2) - H2(n)``."""
    return zeta2_tail_bounds(n)[1]


# ---------------------------------------------------------- construction
def relation_guided_extension(
    base: FiniteAction,
    approx: Sequence[Sequence[int]],
    rel: RelationData,
    gamma,
    reference: FiniteAction | None = None,
    levels: LevelSequence | None = None,
    prefix: int = 0,
) -> RGEResult:
    """Extend ``base`` (an action of ``H``) by ``rel.r`` new generators.

    ``approx[i]`` is ``h_i`` over the base generators.  ``reference`` is an
    optional action ``T`` of the enlarged group at the base level, with the
    base generators first; when given, the hypotheses on ``T`` and ``S`` are
    evaluated and reported.  The extended action's presentation has the
    base generators followed by the new ones (declared orders OMEGA) and
    the defining relations.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    m, r = base.rank, rel.r
    if len(approx) != r or any(len(h) != m for h in approx):
        raise ActionError("one approximating base element per new generator is required")
    for i in rel.finite:
        if len(rel.h[i]) != m:
            raise ActionError(f"h({i + 1}) has the wrong length")
    for i, x in enumerate(base.gens):
        for y in base.gens[i + 1:]:
            if not P.commute(x, y):
                raise ActionError("base action does not commute")
    q = base.q
    widths = rel.widths
    S, w = _mix(q, widths)
    Q = q * S
    lifted = FiniteAction(Q, tuple(P.lift(g, S) for g in base.gens), base.presentation, base.marked * S, check=False)

    def comp(i, new):
        """``T_{h(i)} prod_{j<i} T_{g_j}^{k_j(i)}`` at the fine level."""
        acc = _elem(lifted, rel.h[i])
        for j, kj in enumerate(rel.k[i]):
            if kj:
                acc = P.compose(P.power(new[j], kj), acc)
        return acc

    new: list[P.Perm] = []
    for i in range(r):
        th = _elem(lifted, approx[i])
        s = rel.s[i]
        if s is OMEGA:
            new.append(th)
            continue
        c = comp(i, new)
        if s == 1:
            new.append(c)
            continue
        d = delta(q, widths, i)
        top = P.compose(c, P.compose(P.power(th, 1 - s), d))
        low = P.compose(th, d)
        g = tuple(top[x] if _coord(x, S, w, widths, i) == s - 1 else low[x] for x in range(Q))
        new.append(g)

    # presentation of the enlarged group
    rels = list(base.presentation.relations)
    rels = [tuple(v) + (0,) * r for v in rels]
    for i in rel.finite:
        v = [0] * (m + r)
        for j, x in enumerate(rel.h[i]):
            v[j] -= x
        for j, kj in enumerate(rel.k[i]):
            v[m + j] -= kj
        v[m + i] += rel.s[i]
        rels.append(tuple(v))
    orders = tuple(base.presentation.orders) + (OMEGA,) * r
    pres = Presentation(orders, tuple(rels))
    action = FiniteAction(Q, lifted.gens + tuple(new), pres, lifted.marked, check=False)

    all_gens = action.gens
    commuting = all(P.commute(a, b) for i, a in enumerate(all_gens) for b in all_gens[i + 1:])
    exact = all(P.power(new[i], rel.s[i]) == comp(i, new) for i in rel.finite)
    exact = exact and all(P.is_identity(action.element(v)) for v in rels)

    if levels is None:
        levels, cut = default_levels(q, gamma, rel, prefix)
    else:
        cut = _cut_index(levels, q)
    result = RGEResult(action, m, rel, gamma, levels, cut, exact, commuting)

    c = rel.c
    for i in range(r):
        th = _elem(lifted, approx[i])
        bound = gamma / (3 * (3 * c) ** (r - 1 - i))
        val = metric_d(new[i], th, levels)
        result.bound19.append((val, bound, val < bound))
        if rel.s[i] is not OMEGA:
            s = rel.s[i]
            lhs = [s * dn_at_q(new[i], th, qq) for qq in _coarse_levels(levels, cut)]
            rhs = [dn_at_q(P.power(th, s), comp(i, new), qq) for qq in _coarse_levels(levels, cut)]
            result.contraction.append({"generator": i + 1, "holds": lhs == rhs})

    if reference is not None:
        result.hypotheses = hypotheses(reference, base, approx, rel, gamma, levels, cut)
    return result


def _cut_index(levels: LevelSequence, q: int) -> int:
    n = levels.first_index(q)
    for v, a, b in levels.segments_through(n):
        if a <= n <= b:
            return b
    return n  # pragma: no cover


def _coarse_levels(levels: LevelSequence, cut: int) -> list[int]:
    return sorted({v for v, a, b in levels.segments_through(cut)})


def hypotheses(
    ref: FiniteAction, base: FiniteAction, approx, rel: RelationData, gamma: Fraction, levels: LevelSequence, cut: int
) -> dict:
    """Evaluate the closeness hypotheses of ``S = base`` to ``T = ref``."""
    m, r = base.rank, rel.r
    if ref.rank != m + r or ref.q != base.q:
        raise ActionError("reference action must act on the base blocks with base and new generators")
    lam = rel.lam
    c = rel.c

    def T(v):
        return ref.element(tuple(v) + (0,) * r)

    def Tg(i):
        return ref.gens[m + i]

    def Sx(v):
        return base.element(tuple(v))

    out = {}
    out["14"] = all(metric_d(T(approx[i]), Tg(i), levels) < gamma / (lam * (1 + r * c)) for i in range(r))
    out["15"] = _tail_upper(cut) < gamma / lam
    out["16"] = all(metric_d(T(approx[i]), Sx(approx[i]), levels) < gamma / lam for i in range(r))
    ok17 = ok18 = True
    for i in rel.finite:
        s = rel.s[i]
        ok17 &= metric_d(P.power(T(approx[i]), s), P.power(Sx(approx[i]), s), levels) < gamma / lam
        ct, cs = T(rel.h[i]), Sx(rel.h[i])
        for j, kj in enumerate(rel.k[i]):
            if kj:
                ct = P.compose(P.power(T(approx[j]), kj), ct)
                cs = P.compose(P.power(Sx(approx[j]), kj), cs)
        ok18 &= metric_d(ct, cs, levels) < gamma / lam
    out["17"] = bool(ok17)
    out["18"] = bool(ok18)
    # the reference must satisfy the relations it is compared against
    consistent = True
    for i in rel.finite:
        lhs = P.power(Tg(i), rel.s[i])
        rhs = T(rel.h[i])
        for j, kj in enumerate(rel.k[i]):
            if kj:
                rhs = P.compose(P.power(Tg(j), kj), rhs)
        consistent &= lhs == rhs
    out["reference_consistent"] = bool(consistent)
    return out


# -------------------------------------------------------- relation data
def relation_data_from_group(factors: Sequence[int], h_gens: Sequence[Vector], new_gens: Sequence[Vector]) -> RelationData:
    """Relation data of ``new_gens`` over ``<h_gens>`` inside a finite group.

    ``s_i`` is the least ``m > 0`` with ``m g_i`` in ``<H, g_1..g_{i-1}>``.
    Among the representations the exponents are chosen in symmetric residue
    ranges, minimising ``max |k_j|`` and then ``sum |k_j|``.
    """
    from ..finite import FiniteAbelian

    G = FiniteAbelian(factors)
    h_gens = [G.reduce(x) for x in h_gens]
    new_gens = [G.reduce(x) for x in new_gens]
    hord = [G.element_order(x) for x in h_gens]
    hcoords: dict = {}
    for cs in product(*(range(o) for o in hord)):
        x = G.zero()
        for c, g in zip(cs, h_gens):
            x = G.add(x, G.scale(c, g))
        hcoords.setdefault(x, cs)
    s_list, h_list, k_list = [], [], []
    for i, g in enumerate(new_gens):
        prev = new_gens[:i]
        ranges = []
        for p in prev:
            o = G.element_order(p)
            ranges.append(sorted(range(-(o // 2), o - o // 2), key=lambda v: (abs(v), -v)))
        found = None
        for mult in range(1, G.element_order(g) + 1):
            best = None
            for ks in product(*ranges):
                x = G.scale(mult, g)
                for kj, p in zip(ks, prev):
                    x = G.add(x, G.scale(-kj, p))
                if x in hcoords:
                    key = (max([0] + [abs(v) for v in ks]), sum(abs(v) for v in ks))
                    if best is None or key < best[0]:
                        best = (key, ks, hcoords[x])
            if best is not None:
                found = (mult, best[2], best[1])
                break
        mult, hc, ks = found
        s_list.append(mult)
        h_list.append(tuple(hc))
        k_list.append(tuple(ks))
    return RelationData(tuple(s_list), tuple(h_list), tuple(k_list))


@dataclass
class RGEInstance:
    base: FiniteAction
    reference: FiniteAction
    approx: tuple[Vector, ...]
    rel: RelationData
    gamma: Fraction
    prefix: int

    def run(self) -> RGEResult:
        return relation_guided_extension(self.base, self.approx, self.rel, self.gamma, self.reference, prefix=self.prefix)


def random_instance(seed: int, r: int = 2, factors: Sequence[int] | None = None) -> RGEInstance:
    """A finite group acting regularly, a subgroup ``H``, ``r`` new generators
    and a conjugated copy of the action of ``H`` as base.

    The long stretch of trivial levels (``prefix``) shrinks all distances so
    that a good share of instances meet the hypotheses.
    """
    from ..finite import FiniteAbelian

    rng = random.Random(seed)
    if factors is None:
        factors = rng.choice([(8,), (2, 4), (2, 2, 2), (4,), (2, 2), (6,), (2, 6), (9,), (3, 3), (12,)])
    G = FiniteAbelian(factors)
    reg = FiniteAction.regular(G.factors)
    q = reg.q
    elems = list(G.elements)
    nz = [x for x in elems if any(x)] or elems
    h_gens = [rng.choice(nz) for _ in range(rng.randint(1, 2))]
    new_gens = [rng.choice(elems) for _ in range(r)]
    # T: the regular action evaluated on H generators followed by the new ones
    def perm_of(x):
        return reg.element(x)

    h_pres = Presentation((OMEGA,) * len(h_gens), tuple(kernel_relations(h_gens, G.factors)))
    t_h = tuple(perm_of(x) for x in h_gens)
    t_new = tuple(perm_of(x) for x in new_gens)
    ref_rels = kernel_relations(list(h_gens) + list(new_gens), G.factors)
    reference = FiniteAction(q, t_h + t_new, Presentation((OMEGA,) * (len(h_gens) + r), tuple(ref_rels)))
    # base S: conjugate of T|_H by a random transposition (or the identity)
    sigma = list(range(q))
    if rng.random() < 2 / 3 and q > 1:
        a, b = rng.sample(range(q), 2)
        sigma[a], sigma[b] = sigma[b], sigma[a]
    sigma = tuple(sigma)
    sinv = P.inverse(sigma)
    base = FiniteAction(q, tuple(P.compose(sigma, P.compose(g, sinv)) for g in t_h), h_pres)
    rel = relation_data_from_group(G.factors, h_gens, new_gens)
    # h_i: element of H closest to g_i under T
    horders = [G.element_order(x) for x in h_gens]
    cands = list(product(*(range(o) for o in horders)))
    gamma = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])
    prefix = rng.choice([0, 20, 2500])
    levels, _ = default_levels(q, gamma, rel, prefix)
    approx = []
    for i in range(r):
        best = None
        for cs in cands:
            d = metric_d(reference.element(tuple(cs) + (0,) * r), t_new[i], levels)
            if best is None or d < best[0]:
                best = (d, cs)
        approx.append(tuple(best[1]))
    return RGEInstance(base, reference, tuple(approx), rel, gamma, prefix)
