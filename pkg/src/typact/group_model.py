"""Symbolic countable abelian groups.

A :class:`GroupDesc` describes a group of the form::

    Z^r  +  sum_{p,k} (Z/p^k)^{m(p^k)}  +  sum_p C(p^inf)^{a_p}  +  sum_{p in towers} T(p)

where every multiplicity is an :data:`Extent` (a natural number or
:data:`OMEGA`) and ``T(p)`` is the "tower" ``Z/p + Z/p^2 + Z/p^3 + ...`` with
one summand of each order.  This class is closed under direct sums and
multiplication by integers and covers every group the classification
theorems are stated for; groups such as ``Q`` or reduced p-groups of
non-trivial Ulm length are not representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Mapping, NamedTuple, Union


class GroupError(ValueError):
    """Invalid group data."""


class UnboundedGroupError(GroupError):
    """An operation that needs a bounded group got an unbounded one."""


@total_ordering
class _Omega:
    """The countably infinite extent.  Singleton; compare with ``is``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("OMEGA")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        _check_operand(other)
        return False

    def __gt__(self, other):
        _check_operand(other)
        return other is not self

    def __add__(self, other):
        _check_operand(other)
        return self

    __radd__ = __add__

    def __sub__(self, other):
        _check_operand(other)
        if other is self:
            raise ArithmeticError("OMEGA - OMEGA is undefined")
        return self

    def __rsub__(self, other):
        _check_operand(other)
        raise ArithmeticError("finite - OMEGA is undefined")

    def __mul__(self, other):
        _check_operand(other)
        if other == 0:
            return 0
        return self

    __rmul__ = __mul__

    def __reduce__(self):
        return (_Omega, ())


def _check_operand(other):
    if other is OMEGA:
        return
    if isinstance(other, bool) or not isinstance(other, int):
        raise TypeError(f"not an extent: {other!r}")


OMEGA = _Omega()

Extent = Union[int, _Omega]


def check_extent(value) -> Extent:
    if value is OMEGA:
        return value
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise GroupError(f"extent must be a natural number or OMEGA, got {value!r}")
    return value


def extent_str(value: Extent) -> str:
    return "inf" if value is OMEGA else str(value)


def extent_sub(a: Extent, b: Extent) -> Extent:
    """``a - b`` for ``b <= a``; rejects ``OMEGA - OMEGA``."""
    if not b <= a:
        raise ArithmeticError(f"negative extent {a} - {b}")
    return a - b


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise GroupError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PrimePower(NamedTuple):
    p: int
    k: int

    @property
    def value(self) -> int:
        return self.p ** self.k

    def __str__(self):
        return f"{self.p}^{self.k}"


def prime_power(p: int, k: int) -> PrimePower:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise GroupError(f"exponent must be >= 1, got {k!r}")
    return PrimePower(p, k)


@dataclass(frozen=True)
class MultiplicityMap:
    """Finitely supported map ``p^k -> Extent``.

    ``tails`` lists primes at which the value is OMEGA for *every* exponent;
    it is only non-empty for cumulative maps of groups with towers.  Entries
    are normalized (no zeros, sorted, tail primes excluded from ``entries``).
    """

    entries: tuple[tuple[PrimePower, Extent], ...] = ()
    tails: tuple[int, ...] = ()

    @classmethod
    def from_items(cls, items: Iterable[tuple], tails: Iterable[int] = ()) -> "MultiplicityMap":
        acc: dict[PrimePower, Extent] = {}
        for key, val in items:
            pp = prime_power(*key)
            acc[pp] = acc.get(pp, 0) + check_extent(val)
        tl = tuple(sorted(set(tails)))
        for p in tl:
            if not is_prime(p):
                raise GroupError(f"{p} is not prime")
        entries = tuple(sorted((k, v) for k, v in acc.items() if v != 0 and k.p not in tl))
        return cls(entries, tl)

    def __getitem__(self, key) -> Extent:
        p, k = key
        if p in self.tails:
            return OMEGA
        for pp, v in self.entries:
            if pp == (p, k):
                return v
        return 0

    def as_dict(self) -> dict[PrimePower, Extent]:
        return dict(self.entries)

    def primes(self) -> list[int]:
        return sorted({pp.p for pp, _ in self.entries} | set(self.tails))

    def max_exponent(self, p: int) -> int:
        return max((pp.k for pp, _ in self.entries if pp.p == p), default=0)

    def __bool__(self):
        return bool(self.entries or self.tails)

    def leq(self, other: "MultiplicityMap") -> bool:
        """Pointwise ``self <= other`` on all prime powers."""
        for p in set(self.primes()) | set(other.primes()):
            if p in self.tails and p not in other.tails:
                return False
            top = max(self.max_exponent(p), other.max_exponent(p)) + 1
            for k in range(1, top + 1):
                if not self[p, k] <= other[p, k]:
                    return False
        return True

    def __str__(self):
        parts = [f"{pp}:{extent_str(v)}" for pp, v in self.entries]
        parts += [f"{p}^*:inf" for p in self.tails]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class GroupDesc:
    """Symbolic description; use :func:`group` or :func:`normalize` to build one.

    Equality of normalized descriptions is isomorphism of the described groups.
    """

    free_rank: Extent = 0
    cyclic: tuple[tuple[PrimePower, Extent], ...] = ()
    prufer: tuple[tuple[int, Extent], ...] = ()
    towers: tuple[int, ...] = ()

    # -- views -------------------------------------------------------------
    @property
    def m(self) -> MultiplicityMap:
        """The multiplicity map of the cyclic summands (towers excluded)."""
        return MultiplicityMap(tuple(self.cyclic))

    def cyclic_dict(self) -> dict[PrimePower, Extent]:
        return dict(self.cyclic)

    def prufer_dict(self) -> dict[int, Extent]:
        return dict(self.prufer)

    def prufer_at(self, p: int) -> Extent:
        return self.prufer_dict().get(p, 0)

    def cyclic_at(self, p: int, k: int) -> Extent:
        return self.cyclic_dict().get(PrimePower(p, k), 0)

    def primes(self) -> list[int]:
        """Primes carrying torsion of any kind."""
        ps = {pp.p for pp, _ in self.cyclic} | {p for p, _ in self.prufer} | set(self.towers)
        return sorted(ps)

    def max_exponent(self, p: int) -> int:
        return max((pp.k for pp, _ in self.cyclic if pp.p == p), default=0)

    # -- predicates --------------------------------------------------------
    def is_bounded(self) -> bool:
        return self.free_rank == 0 and not self.prufer and not self.towers

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    def is_finite(self) -> bool:
        return self.is_bounded() and all(v is not OMEGA for _, v in self.cyclic)

    def is_trivial(self) -> bool:
        return self == GroupDesc()

    def order(self) -> int:
        if not self.is_finite():
            raise GroupError("infinite group has no finite order")
        out = 1
        for pp, v in self.cyclic:
            out *= pp.value ** v
        return out

    def torsion_part(self) -> "GroupDesc":
        return GroupDesc(0, self.cyclic, self.prufer, self.towers)

    def __str__(self):
        from .grammar import format_group

        return format_group(self)


def normalize(raw: GroupDesc) -> GroupDesc:
    """Canonical form: merged keys, zero multiplicities dropped, sorted keys."""
    free = check_extent(raw.free_rank)
    cyc: dict[PrimePower, Extent] = {}
    for key, val in raw.cyclic:
        pp = prime_power(*key)
        cyc[pp] = cyc.get(pp, 0) + check_extent(val)
    pru: dict[int, Extent] = {}
    for p, val in raw.prufer:
        if not is_prime(p):
            raise GroupError(f"{p} is not prime")
        pru[p] = pru.get(p, 0) + check_extent(val)
    towers = []
    for p in raw.towers:
        if not is_prime(p):
            raise GroupError(f"{p} is not prime")
        towers.append(p)
    if len(set(towers)) != len(towers):
        raise GroupError("repeated tower at the same prime is not representable")
    return GroupDesc(
        free,
        tuple(sorted((k, v) for k, v in cyc.items() if v != 0)),
        tuple(sorted((p, v) for p, v in pru.items() if v != 0)),
        tuple(sorted(towers)),
    )


def group(
    free_rank: Extent = 0,
    cyclic: Mapping | Iterable | None = None,
    prufer: Mapping | Iterable | None = None,
    towers: Iterable[int] = (),
) -> GroupDesc:
    """Build a normalized description.

    ``cyclic`` maps ``(p, k)`` to a multiplicity; ``prufer`` maps ``p`` to a
    multiplicity.  Either may also be an iterable of pairs (repeats are merged).
    """
    def pairs(x):
        if x is None:
            return ()
        if isinstance(x, Mapping):
            return tuple(x.items())
        return tuple(x)

    return normalize(GroupDesc(free_rank, pairs(cyclic), pairs(prufer), tuple(towers)))


def cyclic_group(n: int, multiplicity: Extent = 1) -> GroupDesc:
    """``(Z/n)^multiplicity`` via the primary decomposition of ``n``."""
    if n < 1:
        raise GroupError(f"Z/{n} is not a finite cyclic group")
    return group(cyclic={(p, k): multiplicity for p, k in factorize(n).items()})


def from_invariant_factors(factors: Iterable[int]) -> GroupDesc:
    out = GroupDesc()
    for n in factors:
        out = direct_sum(out, cyclic_group(n))
    return out


def invariant_factors(g: GroupDesc) -> tuple[int, ...]:
    """Invariant factors ``n_1 | n_2 | ... `` of a finite group (units dropped)."""
    if not g.is_finite():
        raise GroupError("invariant factors need a finite group")
    per_prime: dict[int, list[int]] = {}
    for pp, v in g.cyclic:
        per_prime.setdefault(pp.p, []).extend([pp.k] * v)
    rank = max((len(v) for v in per_prime.values()), default=0)
    factors = [1] * rank
    for p, exps in per_prime.items():
        exps = sorted(exps, reverse=True)
        for i, e in enumerate(exps):
            factors[rank - 1 - i] *= p ** e
    return tuple(factors)


def direct_sum(a: GroupDesc, b: GroupDesc) -> GroupDesc:
    towers = list(a.towers) + list(b.towers)
    return normalize(GroupDesc(a.free_rank + b.free_rank, a.cyclic + b.cyclic, a.prufer + b.prufer, tuple(towers)))


def m_bar(g: GroupDesc) -> MultiplicityMap:
    """Cumulative multiplicities ``m_bar(p^k) = sum_{n >= k} m(p^n)``.

    A tower at ``p`` contributes one summand of every order, so the value is
    OMEGA at every exponent of ``p``.  Prüfer summands do not contribute.
    """
    items = []
    for p in sorted({pp.p for pp, _ in g.cyclic}):
        if p in g.towers:
            continue
        top = g.max_exponent(p)
        running: Extent = 0
        for k in range(top, 0, -1):
            running = running + g.cyclic_at(p, k)
            items.append(((p, k), running))
    return MultiplicityMap.from_items(items, tails=g.towers)


def exponent(g: GroupDesc) -> int:
    if not g.is_bounded():
        raise UnboundedGroupError("exponent of an unbounded group")
    return math.lcm(1, *(pp.value for pp, _ in g.cyclic))


def multiply(g: GroupDesc, d: int) -> GroupDesc:
    """Description of the subgroup ``d*g``."""
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise GroupError(f"multiplier must be a positive integer, got {d!r}")
    cyc = []
    for pp, v in g.cyclic:
        k = pp.k - min(pp.k, valuation(d, pp.p))
        if k > 0:
            cyc.append(((pp.p, k), v))
    # A shifted tower still has exactly one summand of each order.
    return normalize(GroupDesc(g.free_rank, tuple(cyc), g.prufer, g.towers))


@dataclass(frozen=True)
class BoundedSplit:
    d_p: dict[int, int]
    H_gt: GroupDesc
    H_le: GroupDesc
    d: int = field(default=1)


def bounded_split(h: GroupDesc) -> BoundedSplit:
    """Split a bounded group as ``H^> + H^<=`` around the threshold orders ``d_p``.

    ``d_p`` is the largest order ``p^k`` with infinite multiplicity (1 when the
    p-part is finite); ``H^>`` collects the summands of larger order.
    """
    if not h.is_bounded():
        raise UnboundedGroupError("bounded_split needs a bounded group")
    d_p: dict[int, int] = {}
    gt, le = [], []
    for p in sorted({pp.p for pp, _ in h.cyclic}):
        ks = [pp.k for pp, v in h.cyclic if pp.p == p and v is OMEGA]
        threshold = max(ks, default=0)
        d_p[p] = p ** threshold
        for pp, v in h.cyclic:
            if pp.p != p:
                continue
            (gt if pp.k > threshold else le).append((pp, v))
    d = math.prod(d_p.values())
    return BoundedSplit(d_p, normalize(GroupDesc(0, tuple(gt))), normalize(GroupDesc(0, tuple(le))), d)
