"""Finite groups as dense multiplication tables.

Elements are the integers ``0..order-1`` with ``0`` the identity.  Subgroups
are stored as Python integers used as bit-vectors (bit ``g`` set iff ``g`` is a
member), which keeps every closure and intersection a handful of word
operations at the orders this package cares about.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ORDER = 1 << 16
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 256
SAMPLED_ASSOCIATIVITY_TRIPLES = 10**6


class GroupError(ValueError):
    """Raised for malformed tables or invalid group arguments."""


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for g in elements:
        m |= 1 << int(g)
    return m


class FiniteGroup:
    """An immutable finite group given by its multiplication table.

    ``table[g, h]`` is the identifier of ``g*h``.  Construction validates the
    group axioms (associativity exhaustively up to order 256, on a random
    sample of triples above that).
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        label: str | None = None,
        generators: dict[str, int] | None = None,
        check: bool = True,
    ) -> None:
        t = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = t.shape[0]
        if n > MAX_ORDER:
            raise GroupError(f"order {n} exceeds the supported maximum {MAX_ORDER}")
        t.setflags(write=False)
        self.order = n
        self.table = t
        self.label = label
        self.generators = dict(generators or {})
        if check:
            self._validate()
        self.rows: list[list[int]] = t.tolist()
        inv = np.empty(n, dtype=np.int32)
        rows_idx, cols_idx = np.nonzero(t == 0)
        inv[rows_idx] = cols_idx
        inv.setflags(write=False)
        self.inverses = inv
        self.inv: list[int] = inv.tolist()

    def _validate(self) -> None:
        t = self.table
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise GroupError("row and column 0 must be identity maps")
        srt = np.sort(t, axis=1)
        if not (np.all(srt == ar) and np.all(np.sort(t, axis=0) == ar[:, None])):
            raise GroupError("table is not a Latin square")
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
            for c in range(n):
                # (a*b)*c == a*(b*c) for all a, b
                if not np.array_equal(t[t, c], t[:, t[:, c]]):
                    raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, SAMPLED_ASSOCIATIVITY_TRIPLES))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("table is not associative")

    def __repr__(self) -> str:
        name = self.label or "FiniteGroup"
        return f"<{name} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    # -- element arithmetic ---------------------------------------------------

    def mul(self, g: int, h: int) -> int:
        return self.rows[g][h]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        r = 0
        row = self.rows
        while k:
            if k & 1:
                r = row[r][g]
            g = row[g][g]
            k >>= 1
        return r

    def comm(self, g: int, h: int) -> int:
        """``[g, h] = g h g^-1 h^-1``."""
        r = self.rows
        return r[r[r[g][h]][self.inv[g]]][self.inv[h]]

    def conj(self, g: int, h: int) -> int:
        """``g h g^-1``."""
        r = self.rows
        return r[r[g][h]][self.inv[g]]

    def product(self, elements: Iterable[int]) -> int:
        r = 0
        rows = self.rows
        for g in elements:
            r = rows[r][g]
        return r

    # -- cached invariants ----------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        col = np.arange(n)
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.table[cur, col]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def commutator_table(self) -> np.ndarray:
        """``C[g, h] = [g, h]``."""
        t = self.table
        inv = self.inverses
        gh = t
        ghg = t[gh, inv[:, None]]
        out = t[ghg, inv[None, :]]
        out.setflags(write=False)
        return out

    @cached_property
    def centralizer_masks(self) -> list[int]:
        eq = self.table == self.table.T
        return [_row_mask(row) for row in eq]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def conjugacy_classes(self) -> list[list[int]]:
        seen = 0
        classes = []
        t, inv = self.table, self.inverses
        for g in range(self.order):
            if seen >> g & 1:
                continue
            cls = sorted(set(t[t[:, g], inv].tolist()))
            seen |= mask_of(cls)
            classes.append(cls)
        return classes

    @cached_property
    def fingerprints(self) -> list[tuple[int, int]]:
        """Per-element (order, centralizer order) pairs; automorphism invariant."""
        orders = self.element_orders.tolist()
        return [(orders[g], self.centralizer_masks[g].bit_count()) for g in range(self.order)]


def _row_mask(row: np.ndarray) -> int:
    packed = np.packbits(row.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


@dataclass(frozen=True)
class SubgroupSet:
    """A subgroup of ``parent`` held as a bit-vector over element identifiers."""

    members: int
    parent: FiniteGroup

    def __post_init__(self) -> None:
        if not self.members & 1:
            raise GroupError("a subgroup must contain the identity")

    def __len__(self) -> int:
        return self.members.bit_count()

    @property
    def order(self) -> int:
        return self.members.bit_count()

    def __contains__(self, g: int) -> bool:
        return bool(self.members >> g & 1)

    def __iter__(self) -> Iterator[int]:
        return bits(self.members)

    def elements(self) -> list[int]:
        return list(bits(self.members))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupSet):
            return NotImplemented
        return self.members == other.members and self.parent is other.parent

    def __hash__(self) -> int:
        return hash(self.members)

    def __le__(self, other: SubgroupSet) -> bool:
        return self.members & ~other.members == 0

    def __and__(self, other: SubgroupSet) -> SubgroupSet:
        return SubgroupSet(self.members & other.members, self.parent)

    def is_trivial(self) -> bool:
        return self.members == 1

    def is_normal(self) -> bool:
        G = self.parent
        elems = self.elements()
        for g in range(G.order):
            for h in elems:
                if not self.members >> G.conj(g, h) & 1:
                    return False
        return True

    def is_closed(self) -> bool:
        G = self.parent
        elems = self.elements()
        m = self.members
        for a in elems:
            row = G.rows[a]
            if not m >> G.inv[a] & 1:
                return False
            for b in elems:
                if not m >> row[b] & 1:
                    return False
        return True

    def __repr__(self) -> str:
        return f"SubgroupSet(order={self.order}, elements={self.elements()})"


# -- operations ----------------------------------------------------------------


def _check_id(G: FiniteGroup, *ids: int) -> None:
    for g in ids:
        if not 0 <= g < G.order:
            raise GroupError(f"element identifier {g} out of range for order {G.order}")


def multiply(G: FiniteGroup, g: int, h: int) -> int:
    _check_id(G, g, h)
    return G.rows[g][h]


def commutator(G: FiniteGroup, g: int, h: int) -> int:
    _check_id(G, g, h)
    return G.comm(g, h)


def centralizer(G: FiniteGroup, g: int) -> SubgroupSet:
    _check_id(G, g)
    return SubgroupSet(G.centralizer_masks[g], G)


def center(G: FiniteGroup) -> SubgroupSet:
    m = G.full_mask
    for c in G.centralizer_masks:
        m &= c
    return SubgroupSet(m, G)


def closure_mask(G: FiniteGroup, gens: Iterable[int], start: int = 1) -> int:
    """Bit-vector of the subgroup generated by ``start`` (a subgroup mask) and ``gens``."""
    gens = [g for g in gens if g]
    rows = G.rows
    mask = start
    new = [g for g in gens if not mask >> g & 1]
    if not new:
        return mask
    all_gens = list(dict.fromkeys(gens + [g for g in bits(start) if g]))
    frontier = list(bits(mask))
    # right multiplication by generators suffices in a finite group
    while frontier:
        nxt = []
        for x in frontier:
            row = rows[x]
            for s in all_gens:
                y = row[s]
                if not mask >> y & 1:
                    mask |= 1 << y
                    nxt.append(y)
        frontier = nxt
    return mask


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> SubgroupSet:
    S = list(S)
    _check_id(G, *S)
    return SubgroupSet(closure_mask(G, S), G)


def derived_subgroup(G: FiniteGroup) -> SubgroupSet:
    values = np.unique(G.commutator_table).tolist()
    return subgroup_generated(G, values)


def normal_closure_mask(G: FiniteGroup, S: Iterable[int]) -> int:
    t, inv = G.table, G.inverses
    conj: set[int] = set()
    for s in S:
        conj.update(t[t[:, s], inv].tolist())
    return closure_mask(G, conj)


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> SubgroupSet:
    S = list(S)
    _check_id(G, *S)
    return SubgroupSet(normal_closure_mask(G, S), G)


def quotient(G: FiniteGroup, N: SubgroupSet) -> tuple[FiniteGroup, list[int]]:
    """Return ``(G/N, projection)`` with cosets numbered by first appearance."""
    if N.parent is not G and N.parent.order != G.order:
        raise GroupError("subgroup belongs to a different group")
    if not N.is_closed():
        raise GroupError("N is not a subgroup")
    if not N.is_normal():
        raise GroupError("N is not normal")
    n = G.order
    proj = [-1] * n
    reps: list[int] = []
    nel = N.elements()
    for g in range(n):
        if proj[g] >= 0:
            continue
        k = len(reps)
        reps.append(g)
        for h in nel:
            proj[G.rows[g][h]] = k
    table = [[proj[G.rows[a][b]] for b in reps] for a in reps]
    label = f"{G.label}/N" if G.label else None
    Q = FiniteGroup(table, label=label)
    return Q, proj


def direct_product(G: FiniteGroup, H: FiniteGroup, label: str | None = None) -> FiniteGroup:
    """``G x H`` with ``(g, h)`` encoded as ``g*|H| + h``."""
    m = H.order
    tg = G.table.astype(np.int64)
    th = H.table.astype(np.int64)
    table = (tg[:, None, :, None] * m + th[None, :, None, :]).reshape(G.order * m, G.order * m)
    return FiniteGroup(table, label=label)


def element_order_multiset(G: FiniteGroup) -> Counter:
    return Counter(G.element_orders.tolist())


def class_size_multiset(G: FiniteGroup) -> Counter:
    return Counter(len(c) for c in G.conjugacy_classes)


def _generating_sequence(G: FiniteGroup) -> list[int]:
    """A short generating sequence, greedily preferring elements with rare fingerprints."""
    fp = G.fingerprints
    freq = Counter(fp)
    order = sorted(range(1, G.order), key=lambda g: (freq[fp[g]], -G.element_orders[g], g))
    gens: list[int] = []
    mask = 1
    while mask != G.full_mask:
        best, best_mask = None, mask
        for g in order:
            if mask >> g & 1:
                continue
            m = closure_mask(G, [g], start=mask) if gens else closure_mask(G, [g])
            if m.bit_count() > best_mask.bit_count():
                best, best_mask = g, m
            if best_mask == G.full_mask:
                break
        assert best is not None
        gens.append(best)
        mask = best_mask
    return gens


def iter_isomorphisms(
    G: FiniteGroup,
    H: FiniteGroup,
    gens: Sequence[int] | None = None,
) -> Iterator[list[int]]:
    """Yield every isomorphism ``G -> H`` as a list indexed by elements of ``G``.

    Backtracks over images of a fixed generating sequence of ``G``; candidate
    images share the (order, centralizer order) fingerprint.  Each partial
    assignment is extended to the generated subgroup and checked for
    multiplicativity before descending.
    """
    if G.order != H.order:
        return
    n = G.order
    if gens is None:
        gens = _generating_sequence(G)
    gens = list(gens)
    fpG, fpH = G.fingerprints, H.fingerprints
    by_fp: dict[tuple[int, int], list[int]] = {}
    for h in range(n):
        by_fp.setdefault(fpH[h], []).append(h)
    candidates = [by_fp.get(fpG[s], []) for s in gens]
    if n == 1:
        yield [0]
        return
    Gr, Hr = G.rows, H.rows
    phi = [-1] * n
    phi[0] = 0
    used = [False] * n
    used[0] = True
    known: list[int] = [0]
    imgs: list[int] = []

    def extend(k: int, t: int) -> list[int] | None:
        s = gens[k]
        if phi[s] != -1:
            return None if phi[s] != t else []
        if used[t]:
            return None
        added = [s]
        phi[s] = t
        used[t] = True
        active = gens[: k + 1]
        active_img = imgs[:k] + [t]
        i = 0
        ok = True
        while i < len(added) and ok:
            x = added[i]
            i += 1
            row, px = Gr[x], Hr[phi[x]]
            for j, g in enumerate(active):
                y = row[g]
                yi = px[active_img[j]]
                py = phi[y]
                if py == -1:
                    if used[yi]:
                        ok = False
                        break
                    phi[y] = yi
                    used[yi] = True
                    added.append(y)
                elif py != yi:
                    ok = False
                    break
        if ok:
            for x in known:
                if phi[Gr[x][s]] != Hr[phi[x]][t]:
                    ok = False
                    break
        if not ok:
            for y in added:
                used[phi[y]] = False
                phi[y] = -1
            return None
        return added

    def search(k: int) -> Iterator[list[int]]:
        if k == len(gens):
            yield list(phi)
            return
        for t in candidates[k]:
            added = extend(k, t)
            if added is None:
                continue
            imgs.append(t)
            known.extend(added)
            yield from search(k + 1)
            del known[len(known) - len(added):]
            imgs.pop()
            for y in added:
                used[phi[y]] = False
                phi[y] = -1

    yield from search(0)


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> list[int] | None:
    """An explicit isomorphism ``G -> H`` or ``None``; the decision is exact."""
    if G.order != H.order:
        return None
    if element_order_multiset(G) != element_order_multiset(H):
        return None
    if class_size_multiset(G) != class_size_multiset(H):
        return None
    if Counter(G.fingerprints) != Counter(H.fingerprints):
        return None
    return next(iter_isomorphisms(G, H), None)


def _prime_power(n: int) -> tuple[int, int] | None:
    """``(p, k)`` with ``n == p**k`` and ``k >= 1``, else ``None``."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def frattini_subgroup(G: FiniteGroup) -> SubgroupSet:
    """For a p-group, ``Phi(G) = G^p [G, G]``."""
    pk = _prime_power(G.order)
    if pk is None:
        raise GroupError("frattini_subgroup is implemented for p-groups only")
    p = pk[0]
    powers = {G.power(g, p) for g in range(G.order)}
    comms = set(np.unique(G.commutator_table).tolist())
    return SubgroupSet(closure_mask(G, powers | comms), G)


def _maximal_via_frattini(G: FiniteGroup, p: int) -> list[int]:
    Q, proj = quotient(G, frattini_subgroup(G))
    # coordinates of the elementary abelian quotient over GF(p)
    coords = {0: ()}
    basis: list[int] = []
    span = {0: ()}
    for q in range(1, Q.order):
        if q in span:
            continue
        basis.append(q)
        new = {}
        for v, c in span.items():
            x = v
            for k in range(p):
                new[x] = c + (k,)
                x = Q.rows[x][q]
        span = new
    d = len(basis)
    coords = {v: c + (0,) * (d - len(c)) for v, c in span.items()}
    out = []
    for f in np.ndindex(*([p] * d)):
        nz = [a for a in f if a]
        if not nz or nz[0] != 1:
            continue
        m = 0
        for g in range(G.order):
            c = coords[proj[g]]
            if sum(a * b for a, b in zip(f, c)) % p == 0:
                m |= 1 << g
        out.append(m)
    return sorted(out)


def _maximal_via_lattice(G: FiniteGroup) -> list[int]:
    full = G.full_mask
    cyclic = sorted({closure_mask(G, [g]) for g in range(1, G.order)})
    subs = {1} | {c for c in cyclic if c != full}
    frontier = set(subs)
    while frontier:
        nxt = set()
        for H in frontier:
            for c in cyclic:
                if c & ~H == 0:
                    continue
                J = closure_mask(G, bits(c), start=H)
                if J != full and J not in subs:
                    subs.add(J)
                    nxt.add(J)
        frontier = nxt
    proper = sorted(subs, key=lambda m: -m.bit_count())
    maximal: list[int] = []
    for H in proper:
        if not any(H & ~M == 0 for M in maximal):
            maximal.append(H)
    return sorted(maximal)


def maximal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    """All maximal subgroups (via the Frattini quotient for p-groups)."""
    if G.order == 1:
        return []
    pk = _prime_power(G.order)
    masks = _maximal_via_frattini(G, pk[0]) if pk else _maximal_via_lattice(G)
    return [SubgroupSet(m, G) for m in masks]


def generates(G: FiniteGroup, S: Iterable[int]) -> bool:
    return closure_mask(G, S) == G.full_mask
