"""Block permutations as 0-indexed tuples; ``p[i]`` is the image of block ``i``.

Composition follows function composition: ``compose(a, b)[i] == a[b[i]]``.
JSON uses 1-indexed one-line arrays.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

Perm = tuple[int, ...]


class PermError(ValueError):
    pass


def check_perm(p: Sequence[int], q: int | None = None) -> Perm:
    p = tuple(int(x) for x in p)
    if q is not None and len(p) != q:
        raise PermError(f"permutation has {len(p)} entries, expected {q}")
    if sorted(p) != list(range(len(p))):
        raise PermError(f"not a permutation: {p}")
    return p


def identity(q: int) -> Perm:
    return tuple(range(q))


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[i] for i in b)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inverse(p), -k
    out = identity(len(p))
    base = p
    while k:
        if k & 1:
            out = compose(base, out)
        base = compose(base, base)
        k >>= 1
    return out


def product(perms: Iterable[Perm], q: int) -> Perm:
    out = identity(q)
    for p in perms:
        out = compose(p, out)
    return out


def lift(p: Perm, t: int) -> Perm:
    """Refine every block into ``t`` sub-blocks: ``b -> p[b // t] * t + b % t``."""
    return tuple(p[b // t] * t + b % t for b in range(len(p) * t))


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = []
        i = s
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p[i]
        out.append(tuple(cyc))
    return out


def order(p: Perm) -> int:
    return math.lcm(1, *(len(c) for c in cycles(p)))


def commute(a: Perm, b: Perm) -> bool:
    return all(a[b[i]] == b[a[i]] for i in range(len(a)))


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def to_one_line(p: Perm) -> list[int]:
    return [x + 1 for x in p]


def from_one_line(arr: Sequence[int]) -> Perm:
    return check_perm([int(x) - 1 for x in arr])


def orbits(gens: Sequence[Perm], q: int) -> list[list[int]]:
    """Orbits of the group generated by ``gens`` on ``range(q)``, sorted."""
    seen = [False] * q
    out = []
    for s in range(q):
        if seen[s]:
            continue
        orb = [s]
        seen[s] = True
        for x in orb:
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        out.append(sorted(orb))
    return out
