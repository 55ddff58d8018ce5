"""Partial orders with designated natural lubs, in general or directed mode.

A Lubpo couples a finite poset with a family of "natural" (set, lub) pairs.
General mode allows arbitrary subsets as naturals; directed mode restricts
the family to directed subsets.  Singletons are always materialized, so the
singleton axiom holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .errors import EmptySetWithoutBottom, LubMismatch, NotDirected
from .order import (MonoMap, Poset, bits, cofinal_leq, down_closure,
                    is_directed, lub)

GENERAL = "general"
DIRECTED = "directed"


@dataclass(frozen=True)
class Lubpo:
    poset: Poset
    naturals: frozenset[tuple[int, int]]
    mode: str = GENERAL

    @cached_property
    def natural_masks(self) -> dict[int, int]:
        return dict(self.naturals)

    def is_natural(self, A: int, a: Optional[int] = None) -> bool:
        got = self.natural_masks.get(A)
        if got is None:
            return False
        return a is None or got == a

    @cached_property
    def sorted_naturals(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.naturals))

    def describe(self) -> str:
        P = self.poset
        parts = [f"{P.set_repr(A)}->{P.label(a)}" for A, a in self.sorted_naturals]
        return f"Lubpo({self.mode}; " + " ".join(parts) + ")"


def make_lubpo(poset: Poset, naturals: Iterable[tuple[int, int]],
               mode: str = GENERAL) -> Lubpo:
    """Validated Lubpo: checks lubs (S1) and directedness, adds singletons.

    The empty set may only be designated when the poset has a least element,
    and then only paired with it.
    """
    if mode not in (GENERAL, DIRECTED):
        raise ValueError(f"unknown mode {mode!r}")
    fam = {}
    for A, a in naturals:
        if A >> poset.n:
            raise IndexError(f"subset {bin(A)} out of range")
        actual = lub(poset, A)
        if actual is None or actual != a:
            raise LubMismatch(list(bits(A)), a, actual)
        if A == 0:
            if poset.bottom is None:
                raise EmptySetWithoutBottom("empty natural set needs a least element")
        elif mode == DIRECTED and not is_directed(poset, A):
            raise NotDirected(f"natural set {poset.set_repr(A)} is not directed")
        fam[A] = a
    for d in range(poset.n):
        fam[1 << d] = d
    return Lubpo(poset, frozenset(fam.items()), mode)


def delta_restrict(D: Lubpo) -> Lubpo:
    """δ(D): keep exactly the directed naturals, switch to directed mode."""
    kept = frozenset((A, a) for A, a in D.naturals if is_directed(D.poset, A))
    return Lubpo(D.poset, kept, DIRECTED)


def under_rel(D: Lubpo, A: int, B: int) -> bool:
    """A ⊴ B: each a ∈ A is below some element of B or is the natural lub
    of some subset of B."""
    P = D.poset
    rest = A & ~down_closure(P, B)
    for a in bits(rest):
        if not any(Bp & ~B == 0 and v == a for Bp, v in D.naturals):
            return False
    return True


def is_continuous(f: MonoMap, D: Lubpo, E: Lubpo,
                  general: Optional[bool] = None) -> bool:
    """Monotone and natural-lub preserving.

    By default directed naturals of D must map to naturals of E; pass
    general=True (implied when both sides are general mode) to require
    preservation of every natural.
    """
    if general is None:
        general = D.mode == GENERAL and E.mode == GENERAL
    for A, a in D.naturals:
        if not general and not is_directed(D.poset, A):
            continue
        if not E.is_natural(f.image(A), f.table[a]):
            return False
    return True


def all_natural(P: Poset, mode: str = DIRECTED) -> Lubpo:
    """The lubpo on P where every directed (resp. every) lub-subset is natural."""
    from .order import lub_subsets
    fam = [(A, a) for A, a in lub_subsets(P)
           if A and (mode == GENERAL or is_directed(P, A))]
    return make_lubpo(P, fam, mode)
