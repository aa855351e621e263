"""Reference implementations of the hot loops.

The compiled module ``_ckernels`` exports the same functions with the same
signatures; these versions are used when it is unavailable.
"""
from __future__ import annotations

from itertools import permutations


def sumset(add, n, a, b):
    """Sorted distinct elements ``x + y`` for ``x`` in ``a``, ``y`` in ``b``.

    ``add`` is the flattened ``n`` by ``n`` addition table.
    """
    seen = bytearray(n)
    for x in a:
        row = x * n
        for y in b:
            seen[add[row + y]] = 1
    return [i for i in range(n) if seen[i]]


def half_cycle_sum(rho):
    """Sum of ``floor(L/2)`` over the cycles of the permutation ``rho``."""
    q = len(rho)
    seen = bytearray(q)
    total = 0
    for start in range(q):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = 1
            i = rho[i]
            length += 1
        total += length // 2
    return total


def max_leaving(w):
    """Max over subsets ``A`` of ``sum_{B in A, C not in A} w[B][C]``.

    Subsets are visited in Gray-code order so each step costs O(len(w)).
    """
    m = len(w)
    inside = [False] * m
    cur = 0
    best = 0
    for step in range(1, 1 << m):
        b = (step & -step).bit_length() - 1
        row = w[b]
        if inside[b]:
            # removing b
            inside[b] = False
            for c in range(m):
                if inside[c]:
                    cur += w[c][b]
                elif c != b:
                    cur -= row[c]
        else:
            for c in range(m):
                if inside[c]:
                    cur -= w[c][b]
                elif c != b:
                    cur += row[c]
            inside[b] = True
        if cur > best:
            best = cur
    return best


def centralizer_full(gens, q):
    """All permutations of ``range(q)`` commuting with every generator."""
    out = []
    for c in permutations(range(q)):
        ok = True
        for g in gens:
            for i in range(q):
                if c[g[i]] != g[c[i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(c))
    return out


def frontier_max(steps, max_states):
    """Exact dynamic program for :func:`max_leaving` along a vertex order.

    ``steps[i] = (nbrs, keep)``: ``nbrs`` lists ``(slot, w_out, w_in)`` for
    frontier vertices adjacent to the new vertex (``w_out`` counts when only
    the new vertex is inside, ``w_in`` when only the old one is); ``keep`` lists
    the slots (the new vertex has slot ``len(frontier)``) that stay on the
    frontier.  States are bitmasks over the frontier slots.  Returns ``None``
    when a frontier needs more than ``max_states`` states.
    """
    # every assignment of the frontier bits is reachable, so states are dense
    # lists indexed by bitmask; keep is always increasing, so projecting drops
    # bits from the highest slot down
    vals = [0]
    width = 0
    for nbrs, keep in steps:
        if (1 << len(keep)) > max_states:
            return None
        wout = [0] * width
        win = [0] * width
        for k, a, b in nbrs:
            wout[k] += a
            win[k] += b
        # gain with the new vertex outside (only its inside neighbours count)
        gin = [0]
        # gain with it inside (its outside neighbours count)
        gout = [sum(wout)]
        for k in range(width):
            gin = gin + [x + win[k] for x in gin]
            gout = gout + [x - wout[k] for x in gout]
        vals = [v + g for v, g in zip(vals, gin)] + [v + g for v, g in zip(vals, gout)]
        width += 1
        kept = set(keep)
        for k in range(width - 1, -1, -1):
            if k in kept:
                continue
            if k == 0:
                lo, hi = vals[0::2], vals[1::2]
            else:
                step = 1 << k
                span = step << 1
                lo = [x for i in range(0, len(vals), span) for x in vals[i:i + step]]
                hi = [x for i in range(step, len(vals), span) for x in vals[i:i + step]]
            vals = [a if a > b else b for a, b in zip(lo, hi)]
            width -= 1
    return max(vals)
