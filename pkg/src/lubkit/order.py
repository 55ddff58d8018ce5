"""Finite partial orders, bitmask subsets, lub queries and enumeration streams.

Elements of a poset of size n are the indices 0..n-1.  Subsets are plain
Python ints used as bitmasks (bit i set = element i in the subset); a bitmask
is canonical per extension, hashable and cheap to combine, which is what the
exhaustive checkers and completions in the rest of the package live on.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BoundExceeded, CycleError

# Re-exported alias: element sets are bitmask ints.
ElemSet = int

DEFAULT_SIZE_BOUND = 6


def size_bound() -> int:
    """Enumeration cap; override with the LUBKIT_MAX_SIZE environment variable."""
    return int(os.environ.get("LUBKIT_MAX_SIZE", DEFAULT_SIZE_BOUND))


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def elems(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of mask, ascending as integers (so ∅ first, mask last)."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Poset:
    """Finite partial order: up[i] is the bitmask of everything >= i.

    The stored relation is always reflexive and transitively closed;
    construct via poset_from_relation to get that (plus the antisymmetry
    check) from arbitrary pairs.
    """

    n: int
    up: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for i, row in enumerate(self.up):
            for j in bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"x{i}"

    def index(self, name: str) -> int:
        if self.labels and name in self.labels:
            return self.labels.index(name)
        if name.startswith("x") and name[1:].isdigit():
            return int(name[1:])
        raise KeyError(name)

    def mask(self, *names: str) -> int:
        return mask_of(self.index(name) for name in names)

    def set_repr(self, mask: int) -> str:
        return "{" + ",".join(self.label(i) for i in bits(mask)) + "}"

    def upper_bounds(self, mask: int) -> int:
        ub = self.full
        for i in bits(mask):
            ub &= self.up[i]
        return ub

    @cached_property
    def bottom(self) -> Optional[int]:
        return least(self, self.full)


def least(P: Poset, mask: int) -> Optional[int]:
    """Least element of the subset, or None."""
    for i in bits(mask):
        if mask & ~P.up[i] == 0:
            return i
    return None


def lub(P: Poset, A: int) -> Optional[int]:
    """Least upper bound of the subset if it exists (lub ∅ = bottom, if any)."""
    return least(P, P.upper_bounds(A))


def is_directed(P: Poset, A: int) -> bool:
    """Nonempty and every pair bounded within the subset itself."""
    if A == 0:
        return False
    for i in bits(A):
        for j in bits(A & ~((1 << (i + 1)) - 1)):
            if P.up[i] & P.up[j] & A == 0:
                return False
    return True


def down_closure(P: Poset, A: int) -> int:
    m = 0
    for i in bits(A):
        m |= P.down[i]
    return m


def cofinal_leq(P: Poset, A: int, B: int) -> bool:
    """A ⊑ B: every element of A below some element of B.

    Both arguments are subset masks; for the "A ≤ b" single-element variant
    use below_elem.
    """
    return A & ~down_closure(P, B) == 0


def below_elem(P: Poset, A: int, b: int) -> bool:
    """A ≤ b: every element of A below the single element b."""
    return A & ~P.down[b] == 0


def poset_from_relation(size: int, pairs: Sequence[tuple[int, int]],
                        labels: Optional[Sequence[str]] = None) -> Poset:
    """Reflexive-transitive closure of the given lo<hi pairs.

    Raises CycleError when the closure would relate two distinct elements
    both ways (antisymmetry failure).
    """
    up = [1 << i for i in range(size)]
    for lo, hi in pairs:
        if not (0 <= lo < size and 0 <= hi < size):
            raise IndexError(f"pair ({lo},{hi}) out of range for size {size}")
        up[lo] |= 1 << hi
    # Warshall over bitmask rows.
    for k in range(size):
        row_k = up[k]
        for i in range(size):
            if up[i] >> k & 1:
                up[i] |= row_k
    # repeat once more in case the first sweep missed late additions
    changed = True
    while changed:
        changed = False
        for i in range(size):
            acc = up[i]
            for j in bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(size):
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleError(f"elements {i} and {j} are mutually ≤")
    return Poset(size, tuple(up), tuple(labels) if labels else None)


def product_poset(P: Poset, Q: Poset,
                  labelled: bool = True) -> tuple[Poset, tuple[tuple[int, int], ...]]:
    """Componentwise order on pairs; returns the poset and its (i,j) carrier."""
    pairs = tuple(itertools.product(range(P.n), range(Q.n)))
    idx = {pq: k for k, pq in enumerate(pairs)}
    up = []
    for (i, j) in pairs:
        m = 0
        for i2 in bits(P.up[i]):
            for j2 in bits(Q.up[j]):
                m |= 1 << idx[(i2, j2)]
        up.append(m)
    labels = None
    if labelled:
        labels = tuple(f"({P.label(i)},{Q.label(j)})" for (i, j) in pairs)
    return Poset(len(pairs), tuple(up), labels), pairs


@dataclass(frozen=True)
class MonoMap:
    """Order-preserving map between posets, stored as a per-element image table."""

    source: Poset
    target: Poset
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.source.n:
            raise ValueError("table length does not match source size")
        for x in range(self.source.n):
            for y in bits(self.source.up[x]):
                if not self.target.leq(self.table[x], self.table[y]):
                    raise ValueError(
                        f"not monotone: {x} ≤ {y} but images are not ordered")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image(self, A: int) -> int:
        m = 0
        for i in bits(A):
            m |= 1 << self.table[i]
        return m

    def compose(self, other: "MonoMap") -> "MonoMap":
        """self ∘ other (apply other first)."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        return MonoMap(other.source, self.target,
                       tuple(self.table[v] for v in other.table))


def linear_extension(P: Poset) -> tuple[int, ...]:
    """A fixed topological order of the elements (smaller first)."""
    order, placed = [], 0
    while len(order) < P.n:
        for i in range(P.n):
            if not placed >> i & 1 and P.down[i] & ~placed & ~(1 << i) == 0:
                order.append(i)
                placed |= 1 << i
                break
    return tuple(order)


def enumerate_monotone_maps(D: Poset, E: Poset) -> Iterator[MonoMap]:
    """All monotone maps D -> E, duplicate-free, in a fixed deterministic order."""
    topo = linear_extension(D)
    table = [0] * D.n

    def assign(k: int) -> Iterator[MonoMap]:
        if k == len(topo):
            yield MonoMap(D, E, tuple(table))
            return
        x = topo[k]
        # candidates must sit above the images of already-assigned predecessors
        allowed = E.full
        for y in topo[:k]:
            if D.leq(y, x):
                allowed &= E.up[table[y]]
            if D.leq(x, y):
                allowed &= E.down[table[y]]
        for v in bits(allowed):
            table[x] = v
            yield from assign(k + 1)

    yield from assign(0)


def _canonical_key(P: Poset) -> tuple:
    """Isomorphism-invariant canonical form: lexicographically least relation
    encoding over all permutations compatible with a cheap invariant refinement."""
    n = P.n
    # invariant per element: (|down|, |up|, sorted down-profile, sorted up-profile)
    base = [(popcount(P.down[i]), popcount(P.up[i])) for i in range(n)]
    inv = base
    for _ in range(2):
        inv = [
            (base[i],
             tuple(sorted(inv[j] for j in bits(P.down[i]))),
             tuple(sorted(inv[j] for j in bits(P.up[i]))))
            for i in range(n)
        ]
    classes: dict = {}
    for i, v in enumerate(inv):
        classes.setdefault(v, []).append(i)
    groups = [classes[v] for v in sorted(classes)]

    best = None
    for perm_parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        # position assignment: element -> new index, class blocks in order
        pos = [0] * n
        k = 0
        for part in perm_parts:
            for e in part:
                pos[e] = k
                k += 1
        enc = []
        for new_i in range(n):
            old_i = pos.index(new_i)
            row = 0
            for old_j in bits(P.up[old_i]):
                row |= 1 << pos[old_j]
            enc.append(row)
        key = tuple(enc)
        if best is None or key < best:
            best = key
    return best


def canonicalize(P: Poset) -> Poset:
    """Canonical representative of the isomorphism class (labels dropped)."""
    return Poset(P.n, _canonical_key(P))


def _labeled_posets(n: int) -> Iterator[Poset]:
    """All labeled posets on n elements, built by adding element k with a chosen
    strict down-set / up-set over the poset on 0..k-1."""
    if n == 0:
        yield Poset(0, ())
        return

    def extend(up: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield up
            return
        prev = Poset(k, up)
        # strict predecessors B (down-closed) and successors A (up-closed)
        down_sets = [m for m in range(1 << k)
                     if all(prev.down[i] & ~m & prev.full == 0 for i in bits(m))]
        up_sets = [m for m in range(1 << k)
                   if all(prev.up[i] & ~m & prev.full == 0 for i in bits(m))]
        for B in down_sets:
            for A in up_sets:
                if A & B:
                    continue
                # transitivity through the new element must already hold
                ok = True
                for b in bits(B):
                    if A & ~prev.up[b]:
                        ok = False
                        break
                if not ok:
                    continue
                new_up = list(up)
                for b in bits(B):
                    new_up[b] |= 1 << k
                new_up.append(A | (1 << k))
                yield from extend(tuple(new_up), k + 1)

    yield from (Poset(n, rows) for rows in extend((), 0))


def enumerate_posets(n: int, up_to_iso: bool = False) -> Iterator[Poset]:
    """All posets on n elements; one canonical representative per class when
    up_to_iso is set.  Deterministic order."""
    if n > size_bound():
        raise BoundExceeded(f"n={n} exceeds bound {size_bound()}")
    if not up_to_iso:
        yield from _labeled_posets(n)
        return
    seen = set()
    reps = []
    for P in _labeled_posets(n):
        key = _canonical_key(P)
        if key not in seen:
            seen.add(key)
            reps.append(key)
    for key in sorted(reps):
        yield Poset(n, key)


@lru_cache(maxsize=None)
def posets_up_to_iso(n: int) -> tuple[Poset, ...]:
    return tuple(enumerate_posets(n, up_to_iso=True))


@lru_cache(maxsize=None)
def lub_subsets(P: Poset) -> tuple[tuple[int, int], ...]:
    """All (subset mask, lub) pairs over P, mask-ascending (∅ included if bounded)."""
    out = []
    for m in range(1 << P.n):
        v = lub(P, m)
        if v is not None:
            out.append((m, v))
    return tuple(out)


@lru_cache(maxsize=None)
def directed_masks(P: Poset) -> tuple[int, ...]:
    """All directed subset masks of P, ascending."""
    return tuple(m for m in range(1, 1 << P.n) if is_directed(P, m))
