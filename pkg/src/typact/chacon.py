"""Selecting a row of a 0/1 matrix that overlaps a heavily covered column set.

Given a ``k x n`` 0/1 matrix ``x``, weights ``b`` summing to 1, a column set
``H`` and ``eta`` in (0, 1) such that every column of ``H`` has weighted
coverage ``sum_j b_j x_ji >= 1 - eta``, some row ``gamma`` satisfies

    score(gamma) = sum_{i in H} sum_j b_j x_ji x_gamma,i >= #H (1 - 2 eta).

The ``b``-average of the scores is ``sum_{i in H} cov(i)^2``, which is at
least ``#H (1 - eta)^2``; the maximising row therefore meets the bound.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction


class ChaconError(ValueError):
    """Malformed instance or row index."""


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise ChaconError("weights must be exact rationals (use strings like '1/3')")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ChaconError(f"not a rational: {v!r}") from e


@dataclass(frozen=True)
class ChaconInstance:
    """Columns in ``H`` are 0-indexed here and 1-indexed in JSON."""

    x: tuple[tuple[int, ...], ...]
    b: tuple[Fraction, ...]
    H: tuple[int, ...]
    eta: Fraction

    def __post_init__(self):
        x = tuple(tuple(int(v) for v in row) for row in self.x)
        if not x or not x[0]:
            raise ChaconError("matrix must be non-empty")
        n = len(x[0])
        if any(len(row) != n for row in x):
            raise ChaconError("matrix rows must have equal length")
        if any(v not in (0, 1) for row in x for v in row):
            raise ChaconError("matrix entries must be 0 or 1")
        b = tuple(_frac(v) for v in self.b)
        if len(b) != len(x):
            raise ChaconError(f"need one weight per row: {len(x)} rows, {len(b)} weights")
        if any(v < 0 for v in b):
            raise ChaconError("weights must be nonnegative")
        if sum(b) != 1:
            raise ChaconError(f"weights must sum to 1, got {sum(b)}")
        H = tuple(sorted(set(int(i) for i in self.H)))
        if any(not 0 <= i < n for i in H):
            raise ChaconError(f"column index out of range 1..{n}")
        eta = _frac(self.eta)
        if not 0 < eta < 1:
            raise ChaconError("eta must lie strictly between 0 and 1")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "eta", eta)

    @property
    def k(self) -> int:
        return len(self.x)

    @property
    def n(self) -> int:
        return len(self.x[0])

    def coverage(self, i: int) -> Fraction:
        return sum((bj for bj, row in zip(self.b, self.x) if row[i]), Fraction(0))

    def hypothesis(self) -> bool:
        return all(self.coverage(i) >= 1 - self.eta for i in self.H)

    def bound(self) -> Fraction:
        return len(self.H) * (1 - 2 * self.eta)

    def score(self, gamma: int) -> Fraction:
        if not 0 <= gamma < self.k:
            raise ChaconError(f"row index {gamma + 1} out of range 1..{self.k}")
        return sum((self.coverage(i) for i in self.H if self.x[gamma][i]), Fraction(0))

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.x],
            "b": [str(v) for v in self.b],
            "H": [i + 1 for i in self.H],
            "eta": str(self.eta),
        }

    @classmethod
    def from_json(cls, d: dict | str) -> "ChaconInstance":
        if isinstance(d, str):
            d = json.loads(d)
        try:
            return cls(
                tuple(tuple(r) for r in d["matrix"]),
                tuple(d["b"]),
                tuple(int(i) - 1 for i in d["H"]),
                d["eta"],
            )
        except KeyError as e:
            raise ChaconError(f"missing field {e.args[0]!r}") from None

    @classmethod
    def load(cls, path) -> "ChaconInstance":
        with open(path) as f:
            return cls.from_json(json.load(f))


def chacon_select(inst: ChaconInstance) -> tuple[int, Fraction]:
    """Best row (0-indexed, smallest index on ties) and its score."""
    cov = {i: inst.coverage(i) for i in inst.H}
    best, best_score = 0, None
    for g, row in enumerate(inst.x):
        sc = sum((cov[i] for i in inst.H if row[i]), Fraction(0))
        if best_score is None or sc > best_score:
            best, best_score = g, sc
    return best, best_score


@dataclass(frozen=True)
class ChaconReport:
    gamma: int
    score: Fraction
    bound: Fraction
    hypothesis: bool
    meets_bound: bool

    @property
    def ok(self) -> bool:
        """Pass unless the hypothesis holds and the bound is missed."""
        return self.meets_bound or not self.hypothesis

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma + 1,
            "score": str(self.score),
            "bound": str(self.bound),
            "hypothesis": self.hypothesis,
            "meets_bound": self.meets_bound,
            "ok": self.ok,
        }


def chacon_verify(inst: ChaconInstance, gamma: int) -> ChaconReport:
    sc = inst.score(gamma)
    bd = inst.bound()
    return ChaconReport(gamma, sc, bd, inst.hypothesis(), sc >= bd)


def averaging_identity(inst: ChaconInstance) -> tuple[Fraction, Fraction]:
    """``(sum_g b_g score(g), sum_{i in H} cov(i)^2)``; equal on every instance."""
    lhs = sum((bg * inst.score(g) for g, bg in enumerate(inst.b)), Fraction(0))
    rhs = sum((inst.coverage(i) ** 2 for i in inst.H), Fraction(0))
    return lhs, rhs


def random_weights(rng: random.Random, k: int, denom: int = 12) -> tuple[Fraction, ...]:
    cuts = sorted(rng.randint(0, denom) for _ in range(k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    return tuple(Fraction(p, denom) for p in parts)


def random_instance(rng: random.Random, max_k: int = 8, max_n: int = 8, hypothesis: bool = True) -> ChaconInstance:
    """A random instance; with ``hypothesis`` the column set is the set of
    sufficiently covered columns for a random ``eta`` (possibly empty)."""
    k = rng.randint(1, max_k)
    n = rng.randint(1, max_n)
    dens = rng.choice([0.5, 0.7, 0.9])
    x = tuple(tuple(int(rng.random() < dens) for _ in range(n)) for _ in range(k))
    b = random_weights(rng, k, rng.choice([6, 12, 60]))
    eta = Fraction(rng.randint(1, 11), 12)
    cols = list(range(n))
    if hypothesis:
        base = ChaconInstance(x, b, (), eta)
        cols = [i for i in cols if base.coverage(i) >= 1 - eta]
    H = tuple(i for i in cols if rng.random() < 0.8)
    return ChaconInstance(x, b, H, eta)


def brute_best(inst: ChaconInstance) -> tuple[int, Fraction]:
    """Reference maximiser by direct double sum over all rows."""
    best = None
    for g in range(inst.k):
        sc = Fraction(0)
        for i in inst.H:
            for j in range(inst.k):
                sc += inst.b[j] * inst.x[j][i] * inst.x[g][i]
        if best is None or sc > best[1]:
            best = (g, sc)
    return best
