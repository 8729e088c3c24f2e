"""The CCT and monolithic predicates, normal subgroups, and quotient tests."""

from __future__ import annotations

from dataclasses import dataclass

from .group import (
    FiniteGroup,
    SubgroupSet,
    bits,
    center,
    closure_mask,
    is_isomorphic,
    normal_closure_mask,
    quotient,
)


@dataclass(frozen=True)
class CctVerdict:
    """``witness`` is ``(x, y, w)`` with ``[x,y] = [y,w] = 1`` and ``[x,w] != 1``."""

    is_cct: bool
    witness: tuple[int, int, int] | None = None
    vacuous: bool = False


@dataclass(frozen=True)
class MonolithicVerdict:
    is_monolithic: bool
    mon: SubgroupSet


def is_cct(G: FiniteGroup) -> CctVerdict:
    """Commutativity is transitive on non-central elements iff every
    non-central element has an abelian centralizer."""
    if G.is_abelian:
        return CctVerdict(True, None, vacuous=True)
    cmasks = G.centralizer_masks
    zmask = center(G).members
    for y in range(G.order):
        if zmask >> y & 1:
            continue
        cy = cmasks[y]
        for x in bits(cy & ~zmask):
            bad = cy & ~cmasks[x]
            if bad:
                w = (bad & -bad).bit_length() - 1
                return CctVerdict(False, (x, y, w))
    return CctVerdict(True)


def check_cct_witness(G: FiniteGroup, triple: tuple[int, int, int]) -> bool:
    x, y, w = triple
    zmask = center(G).members
    if any(zmask >> g & 1 for g in triple):
        return False
    c = G.comm
    return c(x, y) == 0 and c(y, w) == 0 and c(x, w) != 0


def all_normal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    """Every normal subgroup, as joins of normal closures of single elements.

    Sorted by order, then by membership mask.
    """
    seeds: set[int] = set()
    for cls in G.conjugacy_classes:
        seeds.add(normal_closure_mask(G, [cls[0]]))
    seeds.discard(1)
    found = {1} | seeds
    frontier = set(seeds)
    seed_list = sorted(seeds)
    while frontier:
        nxt = set()
        for a in frontier:
            for s in seed_list:
                if s & ~a == 0:
                    continue
                j = closure_mask(G, bits(s), start=a)
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    return [SubgroupSet(m, G) for m in sorted(found, key=lambda m: (m.bit_count(), m))]


def mon(G: FiniteGroup) -> MonolithicVerdict:
    """Intersection of the normal closures of all non-identity elements."""
    m = G.full_mask
    if G.order == 1:
        return MonolithicVerdict(False, SubgroupSet(1, G))
    for cls in G.conjugacy_classes:
        g = cls[0]
        if g == 0:
            continue
        m &= normal_closure_mask(G, [g])
        if m == 1:
            break
    S = SubgroupSet(m, G)
    return MonolithicVerdict(m.bit_count() > 1, S)


def has_quotient_isomorphic_to(
    G: FiniteGroup, H: FiniteGroup
) -> tuple[SubgroupSet, list[int]] | None:
    """A normal ``N`` with ``G/N`` isomorphic to ``H``, plus the projection ``G -> H``."""
    if H.order == 0 or G.order % H.order:
        return None
    k = G.order // H.order
    for N in all_normal_subgroups(G):
        if N.order != k:
            continue
        Q, proj = quotient(G, N)
        iso = is_isomorphic(Q, H)
        if iso is not None:
            return N, [iso[p] for p in proj]
    return None


def abelian_normal_prime_index(G: FiniteGroup, N: SubgroupSet) -> bool:
    """True when ``N`` is abelian, normal, and of prime index."""
    if not (N.is_closed() and N.is_normal()):
        return False
    idx = G.order // N.order
    if idx < 2 or any(idx % p == 0 for p in range(2, int(idx**0.5) + 1)):
        return False
    el = N.elements()
    cm = G.centralizer_masks
    return all(cm[a] & N.members == N.members for a in el)
