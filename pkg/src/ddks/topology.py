"""First homology of the branched cover and its closed-form invariants.

``pi_1(S)`` is the kernel of the epimorphism from the orbifold braid group
(the structure relations plus ``z^n``) onto ``G``.  Its abelianization comes
from Reidemeister-Schreier rewriting followed by a Smith normal form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .group import FiniteGroup
from .presentation import Presentation, Word, evaluate_word
from .snf import AbelianInvariants, smith_normal_form
from .structures import KodairaStructure, generate_structure_relations, verify_structure


class TopologyError(ValueError):
    pass


def orbifold_presentation(b: int, n: int) -> Presentation:
    """``P_2(Sigma_b)^orb`` on ``4b + 1`` generators (``z`` last)."""
    if b < 2 or n < 2:
        raise TopologyError("need b >= 2 and n >= 2")
    rs = generate_structure_relations(b, n)
    return Presentation(
        list(rs.symbols),
        rs.relators,
        label=f"P2(Sigma_{b})^orb, n={n}",
        equations=[(r.lhs, r.rhs) for r in rs.relations],
    )


@dataclass(frozen=True)
class CosetSystem:
    """Right cosets of ``ker(phi)``, identified with elements of ``G``.

    ``parent[g] = (h, x, e)`` means the transversal word of ``g`` is that of
    ``h`` followed by ``x^e``; the identity has no parent.
    """

    G: FiniteGroup
    images: tuple[int, ...]
    parent: tuple[tuple[int, int, int] | None, ...]

    def act(self, g: int, x: int, e: int = 1) -> int:
        y = self.images[x] if e > 0 else self.G.inv[self.images[x]]
        return self.G.rows[g][y]

    def word(self, g: int) -> Word:
        out = []
        while self.parent[g] is not None:
            h, x, e = self.parent[g]
            out.append((x, e))
            g = h
        return Word.of(reversed(out))

    def tree_edges(self) -> set[tuple[int, int]]:
        """Schreier generators ``(coset, x)`` that are trivial by construction."""
        out = set()
        for g, p in enumerate(self.parent):
            if p is None:
                continue
            h, x, e = p
            out.add((h, x) if e > 0 else (g, x))
        return out


def coset_system(G: FiniteGroup, images: Sequence[int]) -> CosetSystem:
    """BFS transversal from the identity, generators in order, ``x`` before ``x^-1``."""
    images = tuple(int(x) for x in images)
    parent: list = [None] * G.order
    seen = [False] * G.order
    seen[0] = True
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for x, y in enumerate(images):
            for e, img in ((1, y), (-1, G.inv[y])):
                h = G.rows[g][img]
                if not seen[h]:
                    seen[h] = True
                    parent[h] = (g, x, e)
                    queue.append(h)
    if not all(seen):
        raise TopologyError("generator images do not generate G")
    return CosetSystem(G, images, tuple(parent))


@dataclass(frozen=True)
class SchreierMatrix:
    matrix: np.ndarray
    columns: tuple[tuple[int, int], ...]  # (coset, generator) per column
    cosets: CosetSystem


def schreier_rewrite(P: Presentation, images: Sequence[int], G: FiniteGroup) -> SchreierMatrix:
    """Abelianized relator matrix of ``ker(phi)``.

    Row ``k * |G| + g`` is relator ``k`` read from coset ``g``; a letter
    ``x`` at coset ``c`` contributes ``+1`` to column ``(c, x)`` and ``x^-1``
    contributes ``-1`` to ``(c x^-1, x)``.  Tree columns are dropped.
    """
    if len(images) != P.ngens:
        raise TopologyError(f"need {P.ngens} generator images, got {len(images)}")
    for k, r in enumerate(P.relators):
        if evaluate_word(G, images, r) != 0:
            raise TopologyError(f"relator {k} does not map to the identity; phi is not a homomorphism")
    cs = coset_system(G, images)
    n, ng = G.order, P.ngens
    tree = cs.tree_edges()
    colidx = np.full((n, ng), -1, dtype=np.int64)
    columns = []
    for g in range(n):
        for x in range(ng):
            if (g, x) not in tree:
                colidx[g, x] = len(columns)
                columns.append((g, x))
    mult = G.table.astype(np.int64)
    img = np.asarray(images, dtype=np.int64)
    iimg = G.inverses[img].astype(np.int64)
    M = np.zeros((n * len(P.relators), len(columns)), dtype=np.int64)
    ar = np.arange(n)
    for k, r in enumerate(P.relators):
        rows = k * n + ar
        cur = ar.copy()
        for x, e in r.syllables:
            for _ in range(abs(e)):
                if e > 0:
                    c = colidx[cur, x]
                    keep = c >= 0
                    M[rows[keep], c[keep]] += 1
                    cur = mult[cur, img[x]]
                else:
                    cur = mult[cur, iimg[x]]
                    c = colidx[cur, x]
                    keep = c >= 0
                    M[rows[keep], c[keep]] -= 1
        if not np.array_equal(cur, ar):
            raise TopologyError("rewriting did not close up")
    return SchreierMatrix(M, tuple(columns), cs)


def abelianized_relators(P: Presentation) -> np.ndarray:
    """Exponent-sum matrix of the presentation (its abelianization)."""
    M = np.zeros((len(P.relators), P.ngens), dtype=np.int64)
    for k, r in enumerate(P.relators):
        for x, e in r.syllables:
            M[k, x] += e
    return M


def rewrite_consistent(S: SchreierMatrix, P: Presentation) -> bool:
    """Summing each rewritten row over cosets per generator symbol gives the
    exponent sums of the parent relator, up to dropped tree columns."""
    n, ng = S.cosets.G.order, P.ngens
    tree = S.cosets.tree_edges()
    full = abelianized_relators(P)
    for k, r in enumerate(P.relators):
        tot = np.zeros(ng, dtype=np.int64)
        gen = np.array([x for _, x in S.columns])
        block = S.matrix[k * n : (k + 1) * n]
        for x in range(ng):
            tot[x] = block[:, gen == x].sum()
        # tree edges lost from the sum: count letters that walked along them
        lost = np.zeros(ng, dtype=np.int64)
        for g in range(n):
            cur = g
            for x, e in r.syllables:
                for _ in range(abs(e)):
                    if e > 0:
                        if (cur, x) in tree:
                            lost[x] += 1
                        cur = S.cosets.act(cur, x)
                    else:
                        cur = S.cosets.act(cur, x, -1)
                        if (cur, x) in tree:
                            lost[x] -= 1
        if not np.array_equal(tot + lost, n * full[k]):
            return False
    return True


def compute_h1(
    G: FiniteGroup, s: KodairaStructure | Sequence[int], n: int | None = None
) -> AbelianInvariants:
    """``H_1(S, Z)`` for the ``G``-cover attached to structure ``s``."""
    t = tuple(s.entries) if isinstance(s, KodairaStructure) else tuple(int(x) for x in s)
    b = (len(t) - 1) // 4
    bad = verify_structure(G, t, b)
    if bad:
        raise TopologyError("not a structure: " + "; ".join(bad))
    n = int(G.element_orders[t[-1]]) if n is None else n
    P = orbifold_presentation(b, n)
    S = schreier_rewrite(P, t, G)
    return smith_normal_form(S.matrix, S.matrix.shape[1])


# -- closed-form invariants ----------------------------------------------------


@dataclass(frozen=True)
class SurfaceInvariantReport:
    order: int
    b: int
    n: int
    m1: int
    m2: int
    c1_sq: int
    c2: int
    sigma: int
    chi: int
    b1_base: int
    b2_base: int
    g1: int
    g2: int
    q: int | None = None
    p_g: int | None = None
    betti: tuple[int, int, int, int, int] | None = None

    def to_record(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["betti"] = list(self.betti) if self.betti else None
        return d


def _exact(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise TopologyError(f"{what} = {x} is not an integer; invalid parameters")
    return int(x)


def surface_invariants(
    order: int, b: int, n: int, m1: int = 1, m2: int = 1, q: int | None = None
) -> SurfaceInvariantReport:
    if n < 2 or b < 2:
        raise TopologyError("need n >= 2 and b >= 2")
    if order % m1 or order % m2:
        raise TopologyError("m1 and m2 must divide |G|")
    nn = 1 - Fraction(1, n)
    c1 = order * (2 * b - 2) * (4 * b - 4 + 4 * nn - nn * nn)
    c2 = order * (2 * b - 2) * (2 * b - 2 + nn)
    c1_sq = _exact(c1, "c1^2")
    c2_i = _exact(c2, "c2")
    sigma = _exact((c1 - 2 * c2) / 3, "signature")
    chi = _exact((c1 + c2) / 12, "chi")
    base = [m * (b - 1) + 1 for m in (m1, m2)]
    gs = [_exact(Fraction(order, m) * (2 * b - 2 + nn) / 2 + 1, "fibre genus") for m in (m1, m2)]
    p_g = betti = None
    if q is not None:
        p_g = chi - 1 + q
        b1 = 2 * q
        betti = (1, b1, c2_i - 2 + 2 * b1, b1, 1)
    return SurfaceInvariantReport(
        order, b, n, m1, m2, c1_sq, c2_i, sigma, chi, base[0], base[1], gs[0], gs[1], q, p_g, betti
    )
