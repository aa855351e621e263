import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from typact.action_engine import perm as P
from typact.action_engine.action import FiniteAction
from typact.action_engine.metric import (
    DEFAULT_LEVELS,
    LevelError,
    LevelSequence,
    MetricValue,
    dn_at_q,
    dn_brute,
    dn_cycle,
    metric_d,
    metric_dn,
    product_inequality_check,
    zeta2_enclosure,
)

GEOM2 = LevelSequence.geometric(2)


def rand_perm(rng, q):
    p = list(range(q))
    rng.shuffle(p)
    return tuple(p)


class TestDn:
    def test_identity(self):
        assert metric_dn((1, 0, 2), (1, 0, 2), 3) == 0

    def test_four_cycle(self):
        rho = (1, 2, 3, 0)
        assert dn_cycle(rho) == 1 == dn_brute(rho)

    def test_three_cycle(self):
        rho = (1, 2, 0)
        assert dn_cycle(rho) == Fraction(2, 3) == dn_brute(rho)

    @given(st.integers(1, 10), st.randoms(use_true_random=False))
    def test_cycle_formula(self, q, rng):
        rho = rand_perm(rng, q)
        assert dn_cycle(rho) == dn_brute(rho)

    def test_coarse_level(self):
        # at a coarse level only unions of coarse blocks count
        s, t = (1, 0, 2, 3), P.identity(4)
        assert dn_at_q(s, t, 2) == dn_brute_coarse(s, t, 2)

    @given(st.sampled_from([4, 6, 8, 12]), st.sampled_from([1, 2, 3, 4, 6]), st.randoms(use_true_random=False))
    def test_coarse_vs_brute(self, q, c, rng):
        if q % c:
            return
        s, t = rand_perm(rng, q), rand_perm(rng, q)
        assert dn_at_q(s, t, c) == dn_brute_coarse(s, t, c)

    def test_incompatible(self):
        with pytest.raises(LevelError):
            metric_dn((1, 0, 2), P.identity(3), 1, GEOM2)


def dn_brute_coarse(s, t, c):
    q = len(s)
    w = q // c
    best = 0
    for mask in range(1 << c):
        A = {x for b in range(c) if mask >> b & 1 for x in range(b * w, b * w + w)}
        sa, ta = {s[x] for x in A}, {t[x] for x in A}
        best = max(best, len(sa ^ ta))
    return Fraction(best, q)


class TestMetricD:
    def test_self(self):
        assert metric_d((1, 2, 0), (1, 2, 0)).is_zero()

    def test_swap_vs_identity(self):
        assert metric_d((1, 0), (0, 1), GEOM2) == MetricValue(0, 1)

    def test_stability(self):
        s, t = (1, 0), (0, 1)
        assert [dn_at_q(s, t, q) for q in (2, 4, 8)] == [1, 1, 1]
        rng = random.Random(3)
        for _ in range(20):
            s, t = rand_perm(rng, 6), rand_perm(rng, 6)
            vals = {dn_at_q(s, t, q) for q in (6, 12, 24)}
            assert len(vals) == 1

    def test_enclosure(self):
        lo, hi = zeta2_enclosure()
        assert lo < Fraction(math.pi**2 / 6) < hi

    def test_ordering(self):
        assert MetricValue(Fraction(-1, 2), 1) > MetricValue(1, 0)
        assert MetricValue(0, 1) < 2
        assert MetricValue(Fraction(-16449, 10000), 1) > 0

    @given(st.randoms(use_true_random=False))
    def test_triangle(self, rng):
        q = rng.choice([2, 3, 4, 6, 12])
        a, b, c = (rand_perm(rng, q) for _ in range(3))
        assert metric_d(a, c) <= metric_d(a, b) + metric_d(b, c)

    @given(st.randoms(use_true_random=False))
    def test_symmetric(self, rng):
        a, b = rand_perm(rng, 6), rand_perm(rng, 6)
        assert metric_d(a, b) == metric_d(b, a)

    def test_mixed_block_counts(self):
        assert metric_d((1, 0), P.lift((1, 0), 3)).is_zero()

    def test_lcm_tail(self):
        d = metric_d((1, 2, 0), P.identity(3), DEFAULT_LEVELS)
        assert d.b == Fraction(2, 3) and d.a < 0


class TestProductInequality:
    def test_single_pair_equality(self):
        lhs, rhs, ok = product_inequality_check([((1, 2, 0), (0, 1, 2))])
        assert ok and lhs == rhs

    def test_equal_pairs(self):
        a = FiniteAction.regular((12,))
        g = a.gens[0]
        lhs, rhs, ok = product_inequality_check([(g, g), (P.power(g, 5), P.power(g, 5))])
        assert ok and lhs.is_zero() and rhs.is_zero()

    @given(st.sampled_from([(12,), (2, 6)]), st.randoms(use_true_random=False))
    def test_commuting_q12(self, factors, rng):
        img = sorted(FiniteAction.regular(factors).image)
        pairs = [(rng.choice(img), rng.choice(img)) for _ in range(rng.randint(1, 4))]
        assert product_inequality_check(pairs)[2]

    def test_non_commuting(self):
        with pytest.raises(ValueError):
            product_inequality_check([((1, 0, 2), (0, 2, 1))])


class TestLevels:
    def test_default(self):
        assert [DEFAULT_LEVELS.q(n) for n in range(1, 7)] == [1, 2, 6, 12, 60, 60]

    def test_geometric(self):
        assert [GEOM2.q(n) for n in (1, 2, 3)] == [2, 4, 8]
        assert LevelSequence.geometric(2, 3).q(2) == 6

    def test_first_index(self):
        assert DEFAULT_LEVELS.first_index(4) == 4
        with pytest.raises(LevelError):
            GEOM2.first_index(3)

    def test_runs_must_divide(self):
        with pytest.raises(LevelError):
            LevelSequence(((2, 1), (3, 1)))
