"""Characters of finite abelian groups.

The dual of ``G = Z/n_1 + ... + Z/n_r`` is identified with coefficient
tuples ``c`` (``c_i`` mod ``n_i``) through the pairing
``chi_c(g) = sum c_i g_i / n_i  (mod 1)``, evaluated as an exact
:class:`~fractions.Fraction` in ``[0, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernels
from .finite import FiniteAbelian, members
from .group_model import GroupError

Element = tuple[int, ...]


@dataclass(frozen=True)
class Character:
    group: FiniteAbelian
    coeffs: Element

    def __post_init__(self):
        if not self.group.contains(self.coeffs):
            raise GroupError(f"coefficients {self.coeffs} out of range for {self.group!r}")

    def __call__(self, x: Sequence[int]) -> Fraction:
        return pairing(self.group, self.coeffs, x)

    def __add__(self, other: "Character") -> "Character":
        return Character(self.group, self.group.add(self.coeffs, other.coeffs))

    def is_trivial(self) -> bool:
        return not any(self.coeffs)


def pairing(g: FiniteAbelian, c: Sequence[int], x: Sequence[int]) -> Fraction:
    total = sum((Fraction(ci * xi, n) for ci, xi, n in zip(c, x, g.factors)), Fraction(0))
    return total - (total.numerator // total.denominator)


def _check_gens(g: FiniteAbelian, gens: Iterable[Sequence[int]]) -> list[Element]:
    out = []
    for x in gens:
        x = tuple(x)
        if not g.contains(x):
            raise GroupError(f"{x} is not an element of {g!r}")
        out.append(x)
    return out


def subgroup(g: FiniteAbelian, gens: Iterable[Sequence[int]]) -> list[Element]:
    """Sorted elements of the subgroup generated by ``gens``."""
    gens = _check_gens(g, gens)
    return [g.elements[i] for i in g.generated(gens)]


def dual(g: FiniteAbelian) -> list[Element]:
    return list(g.elements)


def annihilator(g: FiniteAbelian, gens: Iterable[Sequence[int]]) -> list[Element]:
    """Characters vanishing on the subgroup generated by ``gens`` (testing the
    generators suffices by additivity)."""
    gens = _check_gens(g, gens)
    return [c for c in g.elements if all(pairing(g, c, x) == 0 for x in gens)]


def pre_annihilator(g: FiniteAbelian, chars: Iterable[Sequence[int]]) -> list[Element]:
    """Elements on which every given character vanishes."""
    chars = _check_gens(g, chars)
    return [x for x in g.elements if all(pairing(g, c, x) == 0 for c in chars)]


def spectral_criterion(
    g: FiniteAbelian, h: Iterable[Sequence[int]], k: Iterable[Sequence[int]]
) -> tuple[bool, bool]:
    """``(H + K == G, Ann H ∩ Ann K trivial)`` for subgroups given by generators.

    The left side says the translation action of ``H`` on ``G/K`` is
    transitive; the right side is the character-side condition.
    """
    h = _check_gens(g, h)
    k = _check_gens(g, k)
    lhs = len(g.generated(h + k)) == g.order
    ann_h = set(annihilator(g, h))
    meet = [c for c in annihilator(g, k) if c in ann_h]
    rhs = meet == [g.zero()]
    return lhs, rhs


@dataclass(frozen=True)
class TranslationAction:
    """``G`` acting on ``X`` by ``x |-> x + image(g)``.

    ``images[i]`` is the image in ``X`` of the i-th standard generator of
    ``G``; the assignment must be a homomorphism.
    """

    source: FiniteAbelian
    target: FiniteAbelian
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source.factors):
            raise GroupError("one image per generator of the source group is required")
        for n, x in zip(self.source.factors, self.images):
            if not self.target.contains(x):
                raise GroupError(f"{x} is not an element of {self.target!r}")
            if any(self.target.scale(n, x)):
                raise GroupError(f"image {x} of an order-{n} generator does not have order dividing {n}")

    def hom(self, g: Sequence[int]) -> Element:
        out = self.target.zero()
        for gi, x in zip(g, self.images):
            out = self.target.add(out, self.target.scale(gi, x))
        return out

    def transitive_on(self, gens: Iterable[Sequence[int]]) -> bool:
        """Is the subgroup generated by ``gens`` transitive on ``X``?"""
        imgs = [self.hom(x) for x in _check_gens(self.source, gens)]
        return len(self.target.generated(imgs)) == self.target.order

    def is_ergodic(self) -> bool:
        basis = [tuple(int(i == j) for j in range(len(self.source.factors))) for i in range(len(self.source.factors))]
        return self.transitive_on(basis)


def compose_character(a: TranslationAction, psi: Sequence[int]) -> Element:
    """Coefficients of ``psi ∘ x`` as a character of the source group.

    Each ``n_i psi(x_i)`` is an integer because ``n_i x_i = 0``.
    """
    out = []
    for n, x in zip(a.source.factors, a.images):
        val = pairing(a.target, psi, x) * n
        if val.denominator != 1:  # pragma: no cover - excluded by the hom check
            raise GroupError("assignment is not a homomorphism")
        out.append(int(val) % n)
    return tuple(out)


def spectrum_of_translation(a: TranslationAction) -> list[Element]:
    """Sorted distinct characters ``psi ∘ x`` of ``G``; ergodic iff the count is ``|X|``."""
    return sorted({compose_character(a, psi) for psi in a.target.elements})


def annihilator_mask(g: FiniteAbelian, mask: int) -> int:
    """Bitmask form of :func:`annihilator` for a subgroup given as a bitmask.

    Characters share the element indexing of ``g``.
    """
    gens = [g.elements[i] for i in members(mask)]
    out = 0
    for i, c in enumerate(g.elements):
        if all(pairing(g, c, x) == 0 for x in gens):
            out |= 1 << i
    return out


def spectral_criterion_masks(g: FiniteAbelian, h: int, k: int, ann_h: int, ann_k: int) -> tuple[bool, bool]:
    """:func:`spectral_criterion` on bitmask subgroups with precomputed annihilators."""
    total = _kernels.sumset(g.add_table, g.order, members(h), members(k))
    return len(total) == g.order, (ann_h & ann_k) == 1


def is_subgroup(g: FiniteAbelian, elems: Iterable[Sequence[int]]) -> bool:
    s = {tuple(e) for e in elems}
    if g.zero() not in s:
        return False
    return all(g.add(x, y) in s for x in s for y in s)
