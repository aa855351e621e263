import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from typact.action_engine import perm as P
from typact.action_engine.action import ActionError, FiniteAction
from typact.action_engine.closure import (
    canonical_parametrization,
    centralizer_brute,
    defect_rows,
    good_approx_defect,
    weak_closure_witness,
    window_size,
)
from typact.action_engine.metric import BudgetError
from typact.action_engine.presentation import Presentation
from typact.group_model import OMEGA

from helpers import SMALL, conjugate


class TestCentralizer:
    def test_z5(self):
        a = FiniteAction.regular((5,))
        assert centralizer_brute(a) == sorted(a.image)
        assert centralizer_brute(a, "orbit") == centralizer_brute(a, "full")

    def test_identity_action(self):
        a = FiniteAction.of(4, [P.identity(4)])
        assert len(centralizer_brute(a)) == 24

    def test_klein(self):
        a = FiniteAction.regular((2, 2))
        assert centralizer_brute(a) == sorted(a.image)

    def test_budget(self):
        a = FiniteAction.regular((11,))
        with pytest.raises(BudgetError):
            centralizer_brute(a, "full")

    @given(st.randoms(use_true_random=False))
    def test_orbit_matches_full_on_intransitive(self, rng):
        q = rng.randint(2, 6)
        p = list(range(q))
        rng.shuffle(p)
        a = FiniteAction.of(q, [tuple(p)])
        assert centralizer_brute(a, "orbit") == centralizer_brute(a, "full")

    @given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
    def test_regular_equals_image(self, factors, rng):
        a = FiniteAction.regular(factors)
        sigma = list(range(a.q))
        rng.shuffle(sigma)
        a = conjugate(a, tuple(sigma))
        assert centralizer_brute(a) == sorted(a.image)


class TestParametrization:
    def test_z4(self):
        p = canonical_parametrization(FiniteAction.regular((4,)))
        assert p.orders == (4,)

    def test_z2_z3(self):
        p = canonical_parametrization(FiniteAction.of(6, [FiniteAction.regular((6,)).element((3,)), FiniteAction.regular((6,)).element((2,))]))
        assert p.orders == (6,)
        assert sorted(p.labels.values()) == list(range(6))

    def test_non_transitive(self):
        with pytest.raises(ActionError):
            canonical_parametrization(FiniteAction.of(4, [(1, 0, 2, 3)]))

    @given(st.sampled_from(SMALL))
    def test_labels_match_elements(self, factors):
        a = FiniteAction.regular(factors)
        p = canonical_parametrization(a)
        assert math.prod(p.orders) == a.q
        for c, b in p.labels.items():
            assert a.element(p.element(c))[a.marked] == b


class TestWitness:
    def test_identity(self):
        a = FiniteAction.regular((6,))
        w = weak_closure_witness(a, P.identity(6))
        assert P.is_identity(a.element(w.element))

    def test_rotation_by_two(self):
        a = FiniteAction.regular((6,))
        w = weak_closure_witness(a, a.element((2,)))
        assert w.element == (2,)

    def test_non_commuting(self):
        a = FiniteAction.regular((3,))
        with pytest.raises(ActionError):
            weak_closure_witness(a, (1, 0, 2))

    def test_non_transitive(self):
        with pytest.raises(ActionError):
            weak_closure_witness(FiniteAction.of(2, [(0, 1)]), (0, 1))


def rotation(n, k):
    return FiniteAction(n, (tuple((x + k) % n for x in range(n)),), Presentation((OMEGA,)))


def hand_defect(target, p, window):
    """Direct count: for each c in the window compare T^c C_1 with P^c C_1 block by block."""
    t = target.q // p.q
    total = 0
    for c in window:
        tc = P.power(target.gens[0], c)
        pc = P.power(p.gens[0], c)
        img = {tc[x] for x in range(p.marked * t, p.marked * t + t)}
        want = set(range(pc[p.marked] * t, pc[p.marked] * t + t))
        total += len(img ^ want)
    return Fraction(p.q**2 * total, target.q)


class TestDefect:
    @given(st.sampled_from(SMALL), st.integers(1, 3))
    def test_lift_is_zero(self, factors, t):
        p = FiniteAction.regular(factors)
        assert good_approx_defect(p.lift(t), p) == 0

    def test_rotation_hand_count(self):
        # p: rotation by 1 on q = 4 blocks; target: rotation by 3 on 8 sub-blocks
        p = FiniteAction(4, ((1, 2, 3, 0),), Presentation((4,)))
        target = rotation(8, 3)
        got = good_approx_defect(target, p)
        assert got == hand_defect(target, p, range(-8, 9))
        assert got > 0

    def test_window_size(self):
        assert window_size((5,)) == 21
        rows = list(defect_rows(FiniteAction.regular((5,)).lift(2), FiniteAction.regular((5,))))
        assert len(rows) == 21
        assert window_size((2, 3)) == 9 * 13

    def test_incompatible_levels(self):
        with pytest.raises(ActionError):
            good_approx_defect(rotation(6, 1), FiniteAction.regular((4,)))
