import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from typact.chacon import (
    ChaconError,
    ChaconInstance,
    averaging_identity,
    brute_best,
    chacon_select,
    chacon_verify,
    random_instance,
)

F = Fraction


def test_identity_like():
    inst = ChaconInstance(((1, 0), (0, 1)), (F(1, 2), F(1, 2)), (0, 1), F(1, 2))
    assert inst.hypothesis() and all(inst.coverage(i) == 1 - inst.eta for i in inst.H)
    rep = chacon_verify(inst, 0)
    assert rep.bound == 0 and rep.ok and rep.meets_bound


def test_all_ones():
    inst = ChaconInstance(((1, 1, 1),) * 3, (F(1, 3),) * 3, (0, 1, 2), F(1, 10))
    for g in range(3):
        assert inst.score(g) == 3 >= inst.bound()


def test_empty_h():
    inst = ChaconInstance(((1, 0),), (F(1),), (), F(1, 3))
    g, sc = chacon_select(inst)
    assert (g, sc, inst.bound()) == (0, 0, 0)


def test_hypothesis_violation():
    inst = ChaconInstance(((1, 0), (0, 0)), (F(1, 2), F(1, 2)), (0, 1), F(1, 4))
    rep = chacon_verify(inst, 1)
    assert not rep.hypothesis and not rep.meets_bound and rep.ok


def test_row_out_of_range():
    inst = ChaconInstance(((1,),), (F(1),), (0,), F(1, 2))
    with pytest.raises(ChaconError):
        chacon_verify(inst, 1)


@pytest.mark.parametrize(
    "x,b,H,eta",
    [
        ((), (), (), F(1, 2)),
        (((1, 0), (1,)), (F(1, 2), F(1, 2)), (), F(1, 2)),
        (((2,),), (F(1),), (), F(1, 2)),
        (((1,),), (F(1, 2),), (), F(1, 2)),
        (((1,),), (F(1),), (1,), F(1, 2)),
        (((1,),), (F(1),), (), F(1)),
        (((1,),), (0.5,), (), F(1, 2)),
    ],
)
def test_validation(x, b, H, eta):
    with pytest.raises(ChaconError):
        ChaconInstance(x, b, H, eta)


def test_random_4x6_matches_brute():
    rng = random.Random(11)
    found = 0
    while found < 20:
        x = tuple(tuple(int(rng.random() < 0.8) for _ in range(6)) for _ in range(4))
        inst = ChaconInstance(x, (F(1, 4),) * 4, tuple(range(6)), F(1, 4))
        H = tuple(i for i in range(6) if inst.coverage(i) >= F(3, 4))
        inst = ChaconInstance(x, inst.b, H, F(1, 4))
        assert inst.hypothesis()
        g, sc = chacon_select(inst)
        assert (g, sc) == brute_best(inst)
        assert sc >= inst.bound()
        found += 1


@given(st.integers(0, 10**9))
def test_select_meets_bound(seed):
    inst = random_instance(random.Random(seed))
    assert inst.hypothesis()
    g, sc = chacon_select(inst)
    assert chacon_verify(inst, g).meets_bound
    lhs, rhs = averaging_identity(inst)
    assert lhs == rhs


@given(st.integers(0, 10**9))
def test_averaging_without_hypothesis(seed):
    inst = random_instance(random.Random(seed), hypothesis=False)
    lhs, rhs = averaging_identity(inst)
    assert lhs == rhs


@given(st.integers(0, 10**9))
def test_monotone_in_h(seed):
    """Adding a covered column keeps the b-averaged score per column above 1 - 2 eta."""
    inst = random_instance(random.Random(seed))
    extra = [i for i in range(inst.n) if i not in inst.H and inst.coverage(i) >= 1 - inst.eta]
    for i in extra:
        bigger = ChaconInstance(inst.x, inst.b, inst.H + (i,), inst.eta)
        avg, _ = averaging_identity(bigger)
        assert avg / len(bigger.H) >= 1 - 2 * inst.eta


def test_json_round_trip():
    inst = random_instance(random.Random(5))
    assert ChaconInstance.from_json(inst.to_json()) == inst


def test_missing_field():
    with pytest.raises(ChaconError):
        ChaconInstance.from_json({"matrix": [[1]]})
