"""Random actions shared by several test modules."""
import random

from typact.action_engine import perm as P
from typact.action_engine.action import FiniteAction
from typact.action_engine.presentation import Presentation, kernel_relations
from typact.finite import FiniteAbelian, abelian_groups_up_to
from typact.group_model import OMEGA

SMALL = [f for f in abelian_groups_up_to(12) if f]


def conjugate(a: FiniteAction, sigma) -> FiniteAction:
    inv = P.inverse(sigma)
    return FiniteAction(a.q, tuple(P.compose(sigma, P.compose(g, inv)) for g in a.gens), a.presentation)


def random_action(rng: random.Random, factors=None, ngens=None, relabel=True) -> FiniteAction:
    """Some elements of a regular action, as generators of Z^m modulo the kernel."""
    factors = factors or rng.choice(SMALL)
    g = FiniteAbelian(factors)
    reg = FiniteAction.regular(g.factors)
    imgs = [rng.choice(g.elements) for _ in range(ngens or rng.randint(1, 2))]
    pres = Presentation((OMEGA,) * len(imgs), tuple(kernel_relations(imgs, g.factors)))
    a = FiniteAction(reg.q, tuple(reg.element(x) for x in imgs), pres)
    if relabel:
        sigma = list(range(a.q))
        rng.shuffle(sigma)
        a = conjugate(a, tuple(sigma))
    return a
