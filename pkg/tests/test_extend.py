import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from typact.action_engine import perm as P
from typact.action_engine.action import ActionError, FiniteAction
from typact.action_engine.extend import extend_finite_action, orbit_classes, relations_hold, restriction_is_lift
from typact.action_engine.presentation import Presentation
from typact.group_model import OMEGA

from helpers import random_action


def test_infinite_multiple_is_identity():
    base = FiniteAction.regular((3,))
    ext = extend_finite_action(base, OMEGA)
    assert P.is_identity(ext.action.gens[-1]) and ext.action.q == 3
    assert relations_hold(ext.action)


def test_square_root_of_swap():
    base = FiniteAction.of(2, [(1, 0)])
    ext = extend_finite_action(base, 2, (1,))
    g = ext.action.gens[-1]
    assert ext.action.q == 4
    assert len(P.cycles(g)) == 1 and P.order(g) == 4
    assert P.power(g, 2) == P.lift((1, 0), 2)
    assert relations_hold(ext.action) and restriction_is_lift(ext, base)


def test_order_three_on_trivial():
    base = FiniteAction(1, (), Presentation(()))
    ext = extend_finite_action(base, 3, ())
    assert ext.action.gens == ((1, 2, 0),)
    assert ext.action.presentation.group_order() == 3


def test_declared_order_mismatch():
    base = FiniteAction.of(2, [(1, 0)])
    with pytest.raises(ActionError):
        extend_finite_action(base, 2, (1,), order=3)


def test_bad_inputs():
    base = FiniteAction.of(2, [(1, 0)])
    with pytest.raises(ActionError):
        extend_finite_action(base, OMEGA, (1,))
    with pytest.raises(ActionError):
        extend_finite_action(base, 0, (1,))
    with pytest.raises(ActionError):
        extend_finite_action(base, 2, None)


def test_orbit_classes_group_equal_stabilizers():
    a = FiniteAction.of(4, [(1, 0, 2, 3)])
    classes = orbit_classes(a)
    # the two fixed blocks share a stabilizer, the swapped pair has its own
    assert sorted(sorted(len(o) for o in c) for c in classes) == [[1, 1], [2]]


@given(st.randoms(use_true_random=False), st.integers(1, 3))
def test_random_chain(rng, steps):
    base = random_action(rng)
    a = base
    for _ in range(steps):
        k = rng.choice([OMEGA, 1, 2, 3])
        h = None if k is OMEGA else tuple(rng.randint(-3, 3) for _ in range(a.rank))
        ext = extend_finite_action(a, k, h)
        assert relations_hold(ext.action)
        assert restriction_is_lift(ext, a)
        if k is not OMEGA:
            assert P.power(ext.action.gens[-1], k) == P.lift(a.element(h), k)
        a = ext.action
    assert a.q % base.q == 0
