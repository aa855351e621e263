"""Explicit finite abelian groups ``Z/n_1 + ... + Z/n_r``.

Elements are residue tuples; internally each element also has an integer
index (mixed radix, last coordinate fastest) so subgroups can be stored as
bitmasks.  Used by the brute-force oracle and by the character computations.
"""
from __future__ import annotations

import math
from array import array
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import _kernels
from .group_model import GroupDesc, GroupError, factorize, group

DEFAULT_MAX_ORDER = 256


class OrderBoundError(GroupError):
    """A finite computation was asked for a group above its size bound."""


def _check_chain(factors: Sequence[int]) -> tuple[int, ...]:
    fs = tuple(int(n) for n in factors)
    if any(n < 1 for n in fs):
        raise GroupError(f"invariant factors must be positive: {fs}")
    fs = tuple(n for n in fs if n != 1)
    for a, b in zip(fs, fs[1:]):
        if b % a:
            raise GroupError(f"invariant factors must form a divisibility chain: {fs}")
    return fs


class FiniteAbelian:
    """``Z/n_1 + ... + Z/n_r`` with ``n_1 | n_2 | ... | n_r``.

    Unit factors are dropped, so ``FiniteAbelian([])`` is the trivial group.
    """

    def __init__(self, factors: Iterable[int]):
        self.factors = _check_chain(list(factors))
        self.order = math.prod(self.factors)

    def __repr__(self):
        return f"FiniteAbelian({list(self.factors)})"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelian) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    @classmethod
    def from_desc(cls, g: GroupDesc) -> "FiniteAbelian":
        from .group_model import invariant_factors

        return cls(invariant_factors(g))

    def desc(self) -> GroupDesc:
        from .group_model import from_invariant_factors

        return from_invariant_factors(self.factors)

    # -- elements ----------------------------------------------------------
    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(n) for n in self.factors)))

    def index(self, x: Sequence[int]) -> int:
        if len(x) != len(self.factors):
            raise GroupError(f"element {tuple(x)} has wrong length for {self!r}")
        i = 0
        for xi, n in zip(x, self.factors):
            i = i * n + (int(xi) % n)
        return i

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == len(self.factors) and all(0 <= xi < n for xi, n in zip(x, self.factors))

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != len(self.factors):
            raise GroupError(f"element {tuple(x)} has wrong length for {self!r}")
        return tuple(int(xi) % n for xi, n in zip(x, self.factors))

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % n for a, n in zip(x, self.factors))

    def scale(self, c: int, x):
        return tuple((c * a) % n for a, n in zip(x, self.factors))

    def zero(self):
        return (0,) * len(self.factors)

    def element_order(self, x) -> int:
        return math.lcm(1, *(n // math.gcd(n, a) for a, n in zip(x, self.factors)))

    @cached_property
    def orders(self) -> list[int]:
        return [self.element_order(x) for x in self.elements]

    @cached_property
    def add_table(self) -> array:
        """Flattened addition table on element indices."""
        n = self.order
        idx = self.index
        els = self.elements
        tab = array("i", [0]) * (n * n)
        for i, x in enumerate(els):
            for j in range(i, n):
                k = idx(self.add(x, els[j]))
                tab[i * n + j] = k
                tab[j * n + i] = k
        return tab

    # -- subgroups ---------------------------------------------------------
    def _require(self, max_order):
        if self.order > max_order:
            raise OrderBoundError(f"group order {self.order} exceeds bound {max_order}")

    def cyclic_indices(self, i: int) -> list[int]:
        tab, n = self.add_table, self.order
        out = [0]
        cur = i
        while cur != 0:
            out.append(cur)
            cur = tab[cur * n + i]
        return out

    def join(self, members: Sequence[int], i: int) -> list[int]:
        """Indices of ``S + <x>`` for a subgroup ``S`` (as sorted indices) and index ``i``."""
        return _kernels.sumset(self.add_table, self.order, members, self.cyclic_indices(i))

    def generated(self, gens: Iterable[Sequence[int]]) -> list[int]:
        """Sorted indices of the subgroup generated by ``gens``."""
        members = [0]
        mask = 1
        for x in gens:
            if not self.contains(x):
                raise GroupError(f"{tuple(x)} is not an element of {self!r}")
            i = self.index(x)
            if not (mask >> i) & 1:
                members = self.join(members, i)
                mask = _mask(members)
        return members

    def subgroups(self, max_order: int = DEFAULT_MAX_ORDER) -> list[int]:
        """Every subgroup exactly once, as a bitmask over element indices.

        Breadth-first closure: each subgroup ``S`` is extended by one
        representative of every non-trivial coset of ``S``.
        """
        self._require(max_order)
        n = self.order
        start = 1
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for mask in frontier:
                members = _members(mask)
                covered = mask
                for i in range(n):
                    if (covered >> i) & 1:
                        continue
                    joined = self.join(members, i)
                    jm = _mask(joined)
                    # the coset i + S lies inside the join; skip its other elements
                    for s in members:
                        covered |= 1 << self.add_table[i * n + s]
                    if jm not in seen:
                        seen.add(jm)
                        nxt.append(jm)
            frontier = nxt
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def subgroup_type(self, mask: int) -> GroupDesc:
        """Isomorphism type of a subgroup, read off from its element orders.

        ``log_p |A[p^j]| = sum_k min(j, k) m(p^k)``, so consecutive
        differences give the cumulative counts and then the multiplicities.
        """
        orders = [self.orders[i] for i in _members(mask)]
        size = len(orders)
        cyc = {}
        for p in factorize(size) if size > 1 else {}:
            logs = [0]
            j = 0
            while True:
                j += 1
                count = sum(1 for o in orders if (p ** j) % o == 0)
                logs.append(_ilog(count, p))
                if logs[-1] == logs[-2]:
                    break
            mbar = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
            for k in range(1, len(mbar)):
                v = mbar[k - 1] - mbar[k]
                if v:
                    cyc[(p, k)] = v
        return group(cyclic=cyc)


def _ilog(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise GroupError("subgroup torsion count is not a prime power")
        n //= p
        e += 1
    return e


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def members(mask: int) -> list[int]:
    return _members(mask)


def to_mask(indices: Iterable[int]) -> int:
    return _mask(indices)


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def abelian_groups_of_order(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor lists of all abelian groups of order ``n``."""
    per_prime = []
    for p, e in sorted(factorize(n).items()) if n > 1 else []:
        per_prime.append([(p, part) for part in _partitions(e)])
    out = []
    for combo in product(*per_prime):
        rank = max((len(part) for _, part in combo), default=0)
        fs = [1] * rank
        for p, part in combo:
            for i, k in enumerate(part):
                fs[rank - 1 - i] *= p ** k
        out.append(tuple(fs))
    return sorted(out)


def abelian_groups_up_to(n: int) -> list[tuple[int, ...]]:
    out = []
    for m in range(1, n + 1):
        out.extend(abelian_groups_of_order(m))
    return out
