"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each line
shows the best-of-N time per call for both backends and the speedup.
"""
import argparse
import random
import timeit

from typact import _kernels
from typact.action_engine.metric import _components, transfer_matrix
from typact.finite import FiniteAbelian


def _perm(rng, q):
    p = list(range(q))
    rng.shuffle(p)
    return tuple(p)


def _frontier_steps():
    # a 24-cycle lifted to 840 fine blocks, read at 60 coarse blocks
    rho = tuple((x + 14) % 840 for x in range(840))
    w = transfer_matrix(rho, 60)
    comps, adj = _components(w)
    nodes = max(comps, key=len)
    captured = []
    real = _kernels.frontier_max
    _kernels.frontier_max = lambda steps, m: captured.append(steps) or real(steps, m)
    try:
        from typact.action_engine.metric import _frontier_max

        _frontier_max(w, nodes, adj, 1 << 18)
    finally:
        _kernels.frontier_max = real
    return captured[0]


def cases():
    rng = random.Random(0)
    g = FiniteAbelian((4, 12))
    a = rng.sample(range(g.order), 20)
    b = rng.sample(range(g.order), 20)
    rho = _perm(rng, 5000)
    w = [[rng.randint(0, 3) if i != j else 0 for j in range(16)] for i in range(16)]
    gens = [tuple((i + 1) % 8 for i in range(8))]
    steps = _frontier_steps()
    return [
        ("sumset 48x20x20", "sumset", (g.add_table, g.order, a, b)),
        ("half_cycle_sum q=5000", "half_cycle_sum", (rho,)),
        ("max_leaving m=16", "max_leaving", (w,)),
        ("centralizer_full q=8", "centralizer_full", (gens, 8)),
        ("frontier_max 60 coarse", "frontier_max", (steps, 1 << 18)),
    ]


def _canon(v):
    return sorted(v) if isinstance(v, list) else v


def best_time(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*args))
    n, _ = t.autorange()
    return min(t.repeat(repeat, n)) / n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled kernels not built; only the Python backend is timed")
    print(f"{'kernel':26} {'python':>12} {'cython':>12} {'speedup':>8}")
    for label, name, call in cases():
        fp = getattr(_kernels.python, name)
        tp = best_time(fp, call, args.repeat)
        if _kernels.compiled is not None:
            fc = getattr(_kernels.compiled, name)
            if _canon(fc(*call)) != _canon(fp(*call)):
                raise SystemExit(f"backends disagree on {label}")
            tc = best_time(fc, call, args.repeat)
            print(f"{label:26} {tp * 1e3:10.3f}ms {tc * 1e3:10.3f}ms {tp / tc:7.1f}x")
        else:
            print(f"{label:26} {tp * 1e3:10.3f}ms {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
