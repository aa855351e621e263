"""Exact values of the weak-topology metric on block-translation maps.

For a divisibility sequence ``q_1 | q_2 | ...`` let ``xi_n`` cut [0,1) into
``q_n`` equal blocks and

    d_n(T, S) = max over xi_n-measurable A of mu(TA Δ SA),
    d(T, S)   = sum_n d_n(T, S) / n^2.

If a level refines both maps, ``d_n`` only depends on ``rho = S^-1 T`` and
equals ``(2/q_n) sum_cycles floor(L/2)``; it is then constant for all finer
levels, so ``d`` is a rational plus a rational multiple of zeta(2).  On
coarser levels the maximum is a directed max-cut problem on the
block-transfer matrix, solved exactly.
"""
from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from .. import _kernels
from ..group_model import GroupError
from . import perm as P

ZETA2_LO = Fraction(1644934066, 10**9)
ZETA2_HI = Fraction(1644934068, 10**9)


class LevelError(GroupError):
    """The configured sequence has no level refining the given maps."""


class BudgetError(RuntimeError):
    """A search or exact maximisation exceeded its configured budget."""


def budget(name: str, default: int) -> int:
    """Budget value, overridable through ``TYPACT_BUDGET`` (``name=value,...``
    or a single integer applied to every budget)."""
    raw = os.environ.get("TYPACT_BUDGET", "").strip()
    if not raw:
        return default
    if raw.isdigit():
        return int(raw)
    for part in raw.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            if k.strip() == name:
                return int(v)
    return default


# ------------------------------------------------------------ level sequence
class LevelSequence:
    """Divisibility sequence ``q_1 | q_2 | ...`` (1-indexed).

    ``runs`` is an explicit prefix of ``(value, count)`` pairs.  After it the
    ``tail`` continues either as ``"lcm"`` (``q_n = lcm(q_{n-1}, j)`` with a
    counter ``j = 1, 2, ...``) or geometrically with an integer factor.  The
    default is ``q_n = lcm(1..n)``.
    """

    def __init__(self, runs: Iterable[tuple[int, int]] = (), tail: str | int = "lcm"):
        self.runs = tuple((int(v), int(c)) for v, c in runs)
        prev = 1
        for v, c in self.runs:
            if v < 1 or c < 1 or v % prev:
                raise LevelError(f"runs must be positive and form a divisibility chain: {self.runs}")
            prev = v
        if tail != "lcm" and (isinstance(tail, bool) or not isinstance(tail, int) or tail < 2):
            raise LevelError(f"tail must be 'lcm' or an integer factor >= 2, got {tail!r}")
        self.tail = tail
        self._segments: list[tuple[int, int, int]] = []  # (q, first n, last n)
        self._state = None
        self._lock = threading.Lock()

    @classmethod
    def geometric(cls, factor: int, start: int | None = None) -> "LevelSequence":
        """``start * factor^(n-1)``; by default ``factor^n``."""
        if start is None:
            return cls((), factor)
        return cls(((start, 1),), factor)

    def __repr__(self):
        return f"LevelSequence(runs={list(self.runs)}, tail={self.tail!r})"

    def __eq__(self, other):
        return isinstance(other, LevelSequence) and (self.runs, self.tail) == (other.runs, other.tail)

    def __hash__(self):
        return hash((self.runs, self.tail))

    def to_json(self) -> dict:
        return {"runs": [list(r) for r in self.runs], "tail": self.tail}

    def _grow(self):
        """Append the next maximal constant segment."""
        segs = self._segments
        if self._state is None:
            n = 1
            for v, c in self.runs:
                if segs and segs[-1][0] == v:
                    q0, a, b = segs[-1]
                    segs[-1] = (q0, a, b + c)
                else:
                    segs.append((v, n, n + c - 1))
                n += c
            self._state = (n, self.runs[-1][0] if self.runs else 1, 1)
            if segs:
                return
        n, last, j = self._state
        if self.tail == "lcm":
            v = math.lcm(last, j)
            j += 1
            count = 1
            while math.lcm(v, j) == v:
                j += 1
                count += 1
        else:
            v = last * self.tail
            count = 1
        if segs and segs[-1][0] == v:
            q0, a, b = segs[-1]
            segs[-1] = (q0, a, b + count)
        else:
            segs.append((v, n, n + count - 1))
        self._state = (n + count, v, j)

    def segments_through(self, n: int) -> list[tuple[int, int, int]]:
        with self._lock:
            while not self._segments or self._segments[-1][2] < n:
                self._grow()
            return [s for s in self._segments if s[1] <= n]

    def q(self, n: int) -> int:
        if n < 1:
            raise LevelError("levels are indexed from 1")
        for v, a, b in self.segments_through(n):
            if a <= n <= b:
                return v
        raise AssertionError("unreachable")

    def first_index(self, target: int, max_segments: int = 100000) -> int:
        """Smallest ``n`` with ``target | q_n``."""
        with self._lock:
            i = 0
            while True:
                while i >= len(self._segments):
                    if len(self._segments) > max_segments:
                        raise LevelError(f"no level divisible by {target} within the configured sequence")
                    self._grow()
                v, a, _ = self._segments[i]
                if v % target == 0:
                    return a
                if self.tail != "lcm" and self._state is not None and i == len(self._segments) - 1:
                    rest = target // math.gcd(target, v)
                    g = math.gcd(rest, self.tail)
                    while g > 1:
                        rest //= g
                        g = math.gcd(rest, self.tail)
                    if rest > 1:
                        raise LevelError(f"no level of {self!r} is divisible by {target}")
                i += 1


DEFAULT_LEVELS = LevelSequence()


# ------------------------------------------------------------ zeta(2) sums
class _H2:
    """Cached exact partial sums ``sum_{m <= n} 1/m^2``."""

    def __init__(self):
        self.sums = [Fraction(0)]
        self.lock = threading.Lock()

    def __call__(self, n: int) -> Fraction:
        with self.lock:
            s = self.sums
            while len(s) <= n:
                m = len(s)
                s.append(s[-1] + Fraction(1, m * m))
            return s[n]


H2 = _H2()


def zeta2_tail_bounds(n: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``sum_{m > n} 1/m^2`` from the Euler-Maclaurin expansion."""
    N = Fraction(n)
    upper = 1 / N - 1 / (2 * N**2) + 1 / (6 * N**3)
    lower = upper - 1 / (30 * N**5)
    return lower, upper


def zeta2_enclosure(n: int | None = None) -> tuple[Fraction, Fraction]:
    if n is None:
        return ZETA2_LO, ZETA2_HI
    lo, hi = zeta2_tail_bounds(n)
    h = H2(n)
    return h + lo, h + hi


def _sign(a: Fraction, b: Fraction) -> int:
    """Sign of ``a + b zeta(2)``; exact because zeta(2) is irrational."""
    if b == 0:
        return (a > 0) - (a < 0)
    n = None
    while True:
        lo, hi = zeta2_enclosure(n)
        x, y = a + b * lo, a + b * hi
        lo_v, hi_v = min(x, y), max(x, y)
        if lo_v > 0:
            return 1
        if hi_v < 0:
            return -1
        n = 16 if n is None else n * 2
        if n > 1 << 14:  # pragma: no cover - never reached at desk scale
            raise ArithmeticError("comparison undecided after refinement")


@total_ordering
@dataclass(frozen=True)
class MetricValue:
    """The number ``a + b * zeta(2)`` with rational ``a``, ``b``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def _coerce(x) -> "MetricValue":
        if isinstance(x, MetricValue):
            return x
        if isinstance(x, (int, Fraction)):
            return MetricValue(Fraction(x), Fraction(0))
        raise TypeError(f"cannot compare MetricValue with {type(x).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return MetricValue(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return MetricValue(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, c):
        c = Fraction(c)
        return MetricValue(self.a * c, self.b * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def sign(self) -> int:
        return _sign(self.a, self.b)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __float__(self):
        return float(self.a) + float(self.b) * 1.6449340668482264

    def bounds(self) -> tuple[Fraction, Fraction]:
        lo, hi = (self.a + self.b * ZETA2_LO, self.a + self.b * ZETA2_HI)
        return min(lo, hi), max(lo, hi)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "approx": float(self)}

    def __str__(self):
        a = str(self.a)
        if len(a) > 40:
            a = f"<{len(a)}-char rational>"
        return f"{a} + {self.b}*zeta(2) (~{float(self):.9g})"


# ------------------------------------------------------------------ d_n
def _rho(s: P.Perm, t: P.Perm, q: int) -> P.Perm:
    """``s^-1 t`` lifted to ``q`` blocks."""
    s_f = P.lift(s, q // len(s))
    t_f = P.lift(t, q // len(t))
    return P.compose(P.inverse(s_f), t_f)


def dn_cycle(rho: P.Perm) -> Fraction:
    """``max_A |rho A Δ A| / q`` over unions of blocks, via the cycle formula."""
    return Fraction(2 * _kernels.half_cycle_sum(rho), len(rho))


def dn_brute(rho: P.Perm) -> Fraction:
    """The same maximum by enumerating every subset of blocks."""
    q = len(rho)
    best = 0
    for mask in range(1 << q):
        img = 0
        for i in range(q):
            if (mask >> i) & 1:
                img |= 1 << rho[i]
        best = max(best, (img ^ mask).bit_count())
    return Fraction(best, q)


def transfer_matrix(rho: P.Perm, coarse: int) -> list[list[int]]:
    """``W[B][C] = #{x in B : rho x in C}`` for ``coarse`` equal groups of fine blocks."""
    t = len(rho) // coarse
    w = [[0] * coarse for _ in range(coarse)]
    for x, y in enumerate(rho):
        w[x // t][y // t] += 1
    return w


def _components(w):
    m = len(w)
    adj = [set() for _ in range(m)]
    for b, row in enumerate(w):
        for c in [c for c, v in enumerate(row) if v]:
            if b != c:
                adj[b].add(c)
                adj[c].add(b)
    seen = [False] * m
    comps = []
    for s in range(m):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        for x in comp:
            for y in sorted(adj[x]):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
        comps.append(comp)
    return comps, adj


def _frontier_plan(w, nodes, adj):
    """Steps for :func:`typact._kernels.frontier_max` along ``nodes`` and the
    largest frontier width reached."""
    pos = {v: i for i, v in enumerate(nodes)}
    last_use = {v: max([pos[v]] + [pos[u] for u in adj[v]]) for v in nodes}
    frontier: list[int] = []
    steps = []
    width = 0
    for i, v in enumerate(nodes):
        nbrs = [(k, w[v][u], w[u][v]) for k, u in enumerate(frontier) if u in adj[v]]
        frontier.append(v)
        width = max(width, len(frontier))
        keep = [k for k, u in enumerate(frontier) if last_use[u] > i]
        steps.append((nbrs, keep))
        frontier = [frontier[k] for k in keep]
    return steps, width


def _frontier_max(w, nodes, adj, max_states, plan=None):
    """Exact max of ``sum_{B in A, C not in A} w[B][C]`` on one component by
    dynamic programming over a BFS vertex order; states are the membership
    bits of already-placed vertices that still have unplaced neighbours."""
    steps, _ = plan or _frontier_plan(w, nodes, adj)
    best = _kernels.frontier_max(steps, max_states)
    if best is None:
        raise BudgetError(
            f"exact coarse-level maximisation needs more than {max_states} states; "
            "use a level sequence with smaller coarse levels"
        )
    return best


def max_leaving(w: list[list[int]]) -> int:
    """Exact ``max_A sum_{B in A, C not in A} w[B][C]``.

    Each component uses the Gray-code scan (``2^m`` subsets) or the frontier
    DP (about ``m 2^width`` states), whichever is smaller; the scan is only
    allowed up to the ``gray`` budget.
    """
    comps, adj = _components(w)
    limit = budget("gray", 22)
    total = 0
    for comp in comps:
        m = len(comp)
        if m == 1:
            continue
        plan = _frontier_plan(w, comp, adj) if m > 8 else None
        if m <= limit and (plan is None or (1 << m) <= m << plan[1]):
            sub = [[w[b][c] for c in comp] for b in comp]
            total += _kernels.max_leaving(sub)
        else:
            total += _frontier_max(w, comp, adj, budget("states", 1 << 18), plan)
    return total


def dn_at_q(s: P.Perm, t: P.Perm, q: int) -> Fraction:
    """``d_n`` at a level with ``q`` blocks."""
    fine = math.lcm(len(s), len(t))
    if q % fine == 0:
        return dn_cycle(_rho(s, t, fine))
    if q == 1:
        return Fraction(0)
    return _coarse_dn(_rho(s, t, math.lcm(fine, q)), q)


@lru_cache(maxsize=8192)
def _coarse_dn(rho: P.Perm, q: int) -> Fraction:
    return Fraction(2 * max_leaving(transfer_matrix(rho, q)), len(rho))


def metric_dn(s: P.Perm, t: P.Perm, m: int, levels: LevelSequence = DEFAULT_LEVELS) -> Fraction:
    """``d_m(s, t)`` for block permutations ``s``, ``t`` (any block counts whose
    least common multiple divides some level of ``levels``)."""
    levels.first_index(math.lcm(len(s), len(t)))  # compatibility check
    return dn_at_q(s, t, levels.q(m))


@lru_cache(maxsize=4096)
def _metric_cached(s, t, levels):
    fine = math.lcm(len(s), len(t))
    N = levels.first_index(fine)
    d_N = dn_cycle(_rho(s, t, fine))
    a = Fraction(0)
    for q, lo, hi in levels.segments_through(N - 1) if N > 1 else []:
        hi = min(hi, N - 1)
        if lo > hi:
            continue
        d = dn_at_q(s, t, q)
        if d != d_N:
            a += (d - d_N) * (H2(hi) - H2(lo - 1))
    return MetricValue(a, d_N)


def metric_d(s: P.Perm, t: P.Perm, levels: LevelSequence = DEFAULT_LEVELS) -> MetricValue:
    """Exact ``d(s, t) = a + b zeta(2)``.  With ``N`` the first level refining
    both maps, ``b = d_N`` and ``a = sum_{n<N} (d_n - d_N)/n^2``."""
    s = P.check_perm(s)
    t = P.check_perm(t)
    if s == t:
        return MetricValue()
    return _metric_cached(s, t, levels)


def product_inequality_check(pairs: Sequence[tuple[P.Perm, P.Perm]], levels: LevelSequence = DEFAULT_LEVELS):
    """Evaluate ``d(T_1...T_n, S_1...S_n) <= sum d(T_i, S_i)``.

    All maps must lie in one abelian group (pairwise commuting) and share a
    block count.  Returns ``(lhs, rhs, holds)``.
    """
    maps = [m for pair in pairs for m in pair]
    if not maps:
        raise ValueError("need at least one pair")
    q = len(maps[0])
    if any(len(m) != q for m in maps):
        raise ValueError("all maps must act on the same blocks")
    for i, a in enumerate(maps):
        for b in maps[i + 1:]:
            if not P.commute(a, b):
                raise ValueError("inputs do not commute")
    lhs = metric_d(P.product([t for t, _ in pairs], q), P.product([s for _, s in pairs], q), levels)
    rhs = sum((metric_d(t, s, levels) for t, s in pairs), MetricValue())
    return lhs, rhs, lhs <= rhs
