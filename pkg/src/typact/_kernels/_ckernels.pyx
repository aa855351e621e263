# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
from libc.stdlib cimport malloc, free, calloc


def sumset(const int[::1] add, int n, a, b):
    cdef int na = len(a), nb = len(b), i, j, row
    cdef int *av = <int *> malloc((na + 1) * sizeof(int))
    cdef int *bv = <int *> malloc((nb + 1) * sizeof(int))
    cdef char *seen = <char *> calloc(n, 1)
    try:
        for i in range(na):
            av[i] = a[i]
        for i in range(nb):
            bv[i] = b[i]
        for i in range(na):
            row = av[i] * n
            for j in range(nb):
                seen[add[row + bv[j]]] = 1
        return [i for i in range(n) if seen[i]]
    finally:
        free(av); free(bv); free(seen)


def half_cycle_sum(rho):
    cdef int q = len(rho), start, i, length
    cdef long total = 0
    cdef int *r = <int *> malloc((q + 1) * sizeof(int))
    cdef char *seen = <char *> calloc(q + 1, 1)
    try:
        for i in range(q):
            r[i] = rho[i]
        for start in range(q):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = 1
                i = r[i]
                length += 1
            total += length // 2
        return total
    finally:
        free(r); free(seen)


def max_leaving(w):
    cdef int m = len(w), b, c
    cdef long long step, cur = 0, best = 0
    if m == 0:
        return 0
    cdef long long *wv = <long long *> malloc(m * m * sizeof(long long))
    cdef char *inside = <char *> calloc(m, 1)
    try:
        for b in range(m):
            for c in range(m):
                wv[b * m + c] = w[b][c]
        for step in range(1, (<long long> 1) << m):
            b = 0
            while not (step >> b) & 1:
                b += 1
            if inside[b]:
                inside[b] = 0
                for c in range(m):
                    if inside[c]:
                        cur += wv[c * m + b]
                    elif c != b:
                        cur -= wv[b * m + c]
            else:
                for c in range(m):
                    if inside[c]:
                        cur -= wv[c * m + b]
                    elif c != b:
                        cur += wv[b * m + c]
                inside[b] = 1
            if cur > best:
                best = cur
        return best
    finally:
        free(wv); free(inside)


def centralizer_full(gens, int q):
    # Heap's algorithm over Sym(q), testing commutation with every generator.
    cdef int ng = len(gens), i, k, t, ok
    cdef int *g = <int *> malloc((ng * q + 1) * sizeof(int))
    cdef int *c = <int *> malloc((q + 1) * sizeof(int))
    cdef int *st = <int *> calloc(q + 1, sizeof(int))
    out = []
    try:
        for k in range(ng):
            for i in range(q):
                g[k * q + i] = gens[k][i]
        for i in range(q):
            c[i] = i

        i = 0
        while True:
            ok = 1
            for k in range(ng):
                for t in range(q):
                    if c[g[k * q + t]] != g[k * q + c[t]]:
                        ok = 0
                        break
                if not ok:
                    break
            if ok:
                out.append(tuple([c[t] for t in range(q)]))
            # advance to the next permutation
            while i < q:
                if st[i] < i:
                    if i % 2 == 0:
                        t = c[0]; c[0] = c[i]; c[i] = t
                    else:
                        t = c[st[i]]; c[st[i]] = c[i]; c[i] = t
                    st[i] += 1
                    i = 0
                    break
                else:
                    st[i] = 0
                    i += 1
            if i >= q:
                break
        return sorted(out)
    finally:
        free(g); free(c); free(st)


def frontier_max(steps, long long max_states):
    cdef int width = 0, nw, k, j, low, nsteps
    cdef long long size, st, key, v, total_out
    cdef long long *vals = <long long *> calloc(1, sizeof(long long))
    cdef long long *new = NULL
    cdef long long *proj = NULL
    cdef long long *gin = NULL
    cdef long long *gout = NULL
    cdef long long wout[64]
    cdef long long win[64]
    cdef int kp[64]
    try:
        for nbrs, keep in steps:
            size = (<long long> 1) << width
            for k in range(width):
                wout[k] = 0
                win[k] = 0
            for item in nbrs:
                k = item[0]
                wout[k] += item[1]
                win[k] += item[2]
            total_out = 0
            for k in range(width):
                total_out += wout[k]
            nw = len(keep)
            if nw > 60 or ((<long long> 1) << nw) > max_states:
                return None
            gin = <long long *> malloc(size * sizeof(long long))
            gout = <long long *> malloc(size * sizeof(long long))
            new = <long long *> malloc(2 * size * sizeof(long long))
            gin[0] = 0
            gout[0] = 0
            for st in range(1, size):
                low = 0
                while not (st >> low) & 1:
                    low += 1
                gin[st] = gin[st & (st - 1)] + win[low]
                gout[st] = gout[st & (st - 1)] + wout[low]
            for st in range(size):
                v = vals[st]
                if v < 0:
                    new[st] = -1
                    new[st | size] = -1
                else:
                    new[st] = v + gin[st]
                    new[st | size] = v + total_out - gout[st]
            free(gin); gin = NULL
            free(gout); gout = NULL
            for j in range(nw):
                kp[j] = keep[j]
            proj = <long long *> malloc(((<long long> 1) << nw) * sizeof(long long))
            for st in range((<long long> 1) << nw):
                proj[st] = -1
            for st in range(2 * size):
                key = 0
                for j in range(nw):
                    if (st >> kp[j]) & 1:
                        key |= (<long long> 1) << j
                if new[st] > proj[key]:
                    proj[key] = new[st]
            free(new); new = NULL
            free(vals)
            vals = proj
            proj = NULL
            width = nw
        v = -1
        for st in range((<long long> 1) << width):
            if vals[st] > v:
                v = vals[st]
        return v
    finally:
        free(vals); free(new); free(proj); free(gin); free(gout)
