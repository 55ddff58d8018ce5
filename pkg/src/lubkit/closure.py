"""Rule systems with deduction certificates, the cl operator, lub-completion.

A rule system lives on a universe of items 0..size-1.  Rules are generated
on demand by an enumerator instead of being materialized: the enumerator gets
the mask of items derived so far and yields (pattern mask, conclusion) pairs
with pattern ⊆ current.  It must be deterministic, and monotone in the sense
that rules applicable at S stay applicable at supersets of S.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

from .model import DIRECTED, Lubpo
from .order import (Poset, bits, down_closure, is_directed, lub, mask_of,
                    popcount)

RuleEnumerator = Callable[[int], Iterable[tuple[int, int]]]


@dataclass(frozen=True)
class RuleSystem:
    size: int
    rules: RuleEnumerator


@dataclass(frozen=True)
class Deduction:
    """Finite certificate tree.  Node ids are 0..len(labels)-1 in preorder,
    root first; premises[i] is None for leaves (labels in the start set) and
    the tuple of child node ids otherwise."""

    root: int
    labels: tuple[int, ...]
    premises: tuple[Optional[tuple[int, ...]], ...]

    def __len__(self) -> int:
        return len(self.labels)

    def to_records(self) -> list[dict]:
        out = []
        for i, lab in enumerate(self.labels):
            pre = self.premises[i]
            out.append({
                "id": i,
                "label": lab,
                "rule": None if pre is None else {
                    "pattern": sorted(self.labels[j] for j in pre)},
                "premises": list(pre) if pre is not None else [],
            })
        return out


def close_rules(R: RuleSystem, A: int) -> int:
    """Least superset of A closed under R (round iteration)."""
    current = A
    while True:
        added = 0
        for pat, c in R.rules(current):
            if pat & ~current == 0 and not current >> c & 1:
                added |= 1 << c
        if not added:
            return current
        current |= added


def _derivation_rounds(R: RuleSystem, A: int) -> dict[int, int]:
    """item -> pattern mask of the first rule that derives it (round order,
    first applicable rule wins within a round).  Start items not included."""
    first: dict[int, int] = {}
    current = A
    while True:
        added = 0
        for pat, c in R.rules(current):
            if pat & ~current == 0 and not current >> c & 1 and not added >> c & 1:
                first[c] = pat
                added |= 1 << c
        if not added:
            return first
        current |= added


def deduce(R: RuleSystem, A: int, target: int) -> Optional[Deduction]:
    """Certificate tree for target from A, or None when not derivable.

    Deterministic: breadth-first by closure round, first rule in enumerator
    order wins.
    """
    if A >> target & 1:
        return Deduction(0, (target,), (None,))
    first = _derivation_rounds(R, A)
    if target not in first:
        return None
    labels: list[int] = []
    premises: list[Optional[tuple[int, ...]]] = []

    def build(item: int) -> int:
        node = len(labels)
        labels.append(item)
        premises.append(None)
        if not A >> item & 1:
            premises[node] = tuple(build(x) for x in bits(first[item]))
        return node

    root = build(target)
    return Deduction(root, tuple(labels), tuple(premises))


def verify_deduction(R: RuleSystem, A: int, d: Deduction) -> bool:
    """Check every Deduction invariant against the rule system and start set."""
    n = len(d.labels)
    if not 0 <= d.root < n or len(d.premises) != n:
        return False
    parent_seen = [False] * n
    for i, pre in enumerate(d.premises):
        if not 0 <= d.labels[i] < R.size:
            return False
        if pre is None:
            if not A >> d.labels[i] & 1:
                return False
            continue
        if A >> d.labels[i] & 1:
            return False  # nodes labelled in the start set must be leaves
        pat = 0
        for j in pre:
            if not 0 <= j < n or j == d.root or parent_seen[j]:
                return False
            parent_seen[j] = True
            pat |= 1 << d.labels[j]
        if (pat, d.labels[i]) not in set(R.rules(pat)):
            return False
    # unique path from the root to every node = every non-root has one parent
    # and everything is reachable from the root
    if parent_seen[d.root]:
        return False
    if any(not parent_seen[i] for i in range(n) if i != d.root):
        return False
    reach, stack = {d.root}, [d.root]
    while stack:
        pre = d.premises[stack.pop()]
        for j in pre or ():
            if j not in reach:
                reach.add(j)
                stack.append(j)
    return len(reach) == n


# ---------------------------------------------------------------------------
# The cl-rule system of a lubpo and its closure operator.

def cl_rules(D: Lubpo) -> RuleSystem:
    """Rules {a} ⇝ b for b ≤ a plus A ⇝ a for each natural (A, a)."""
    P = D.poset
    naturals = D.sorted_naturals

    def enum(current: int):
        for a in bits(current):
            for b in bits(P.down[a] & ~(1 << a)):
                yield (1 << a, b)
        for A, a in naturals:
            if A & ~current == 0:
                yield (A, a)

    return RuleSystem(P.n, enum)


def cl_masks(P: Poset, naturals, A: int) -> int:
    """Fast closure: down-close and add natural lubs of contained naturals."""
    closed = down_closure(P, A)
    changed = True
    while changed:
        changed = False
        for B, b in naturals:
            if B & ~closed == 0 and not closed >> b & 1:
                closed |= P.down[b]
                changed = True
    return closed


def cl(D: Lubpo, A: int) -> int:
    """Closure of A under the cl-rule system of D (respects D's own family;
    take delta_restrict(D) first for the directed-mode operator on a general
    lubpo)."""
    return cl_masks(D.poset, D.naturals, A)


def is_closed(P: Poset, naturals, m: int) -> bool:
    """Direct closedness test: down-closed and natural-lub closed."""
    if down_closure(P, m) != m:
        return False
    for B, b in naturals:
        if B & ~m == 0 and not m >> b & 1:
            return False
    return True


@dataclass(frozen=True)
class ClosedSetLattice:
    """All cl-closed subsets of the host, ordered by inclusion."""

    host: Lubpo
    family: tuple[int, ...]

    @cached_property
    def member_index(self) -> dict[int, int]:
        return {m: k for k, m in enumerate(self.family)}

    def join(self, members: Iterable[int]) -> int:
        u = 0
        for m in members:
            u |= m
        return cl_masks(self.host.poset, self.host.naturals, u)

    def meet(self, members: Iterable[int]) -> int:
        acc = self.host.poset.full
        for m in members:
            acc &= m
        return acc

    def as_poset(self) -> Poset:
        """The lattice as a Poset over family indices (inclusion order)."""
        fam = self.family
        up = []
        for m in fam:
            row = 0
            for k, other in enumerate(fam):
                if m & ~other == 0:
                    row |= 1 << k
            up.append(row)
        labels = tuple(self.host.poset.set_repr(m) for m in fam)
        return Poset(len(fam), tuple(up), labels)


def lub_completion(D: Lubpo) -> ClosedSetLattice:
    P = D.poset
    fam = tuple(m for m in range(1 << P.n) if is_closed(P, D.naturals, m))
    return ClosedSetLattice(D, fam)


def in_embed(D: Lubpo, d: int) -> int:
    """The principal closed set cl{d} = ↓d."""
    return cl_masks(D.poset, D.naturals, 1 << d)
