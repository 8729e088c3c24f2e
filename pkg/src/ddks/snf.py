"""Smith normal form invariants of integer matrices (cokernel structure)."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

# |entries| below this bound keep every single row update inside int64
_SAFE = 1 << 31


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk`` and all ``di >= 2``."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = tuple(int(d) for d in self.torsion)
        if self.rank < 0 or any(d < 2 for d in t):
            raise ValueError("invalid abelian invariants")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    def format(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        for d, k in itertools.groupby(self.torsion):
            m = len(list(k))
            parts.append(f"(Z{d})^{m}" if m > 1 else f"Z{d}")
        return " + ".join(parts) or "0"

    def to_record(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_record(cls, d: dict) -> AbelianInvariants:
        return cls(int(d["rank"]), tuple(d.get("torsion", ())))


def invariant_factors(diagonal: Sequence[int]) -> list[int]:
    """Turn any diagonal into a divisibility chain: ``diag(a, b) ~ diag(gcd, lcm)``."""
    d = sorted(abs(int(x)) for x in diagonal if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] // g * d[j]
    return d


def _as_int64(M) -> np.ndarray | None:
    try:
        A = np.array(M, dtype=np.int64)
    except OverflowError:
        return None
    return A if A.size == 0 or int(np.abs(A).max()) < _SAFE else None


def _drop_units(M: np.ndarray) -> tuple[list[list[int]], int]:
    """Sparse elimination on +-1 pivots.

    Each unit pivot contributes a trivial elementary divisor and is removed
    with its row and column.  Pivots are chosen with the fewest entries in
    their column to limit fill-in.  Returns the leftover dense block.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, j in zip(*np.nonzero(M)):
        i, j = int(i), int(j)
        rows.setdefault(i, {})[j] = int(M[i, j])
        cols.setdefault(j, set()).add(i)
    units = 0
    # Markowitz-style: shortest row first, then the sparsest unit column
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        ln, p = heapq.heappop(heap)
        row = rows.get(p)
        if row is None:
            continue
        if len(row) != ln:
            heapq.heappush(heap, (len(row), p))
            continue
        cand = [j for j, v in row.items() if v in (1, -1)]
        if not cand:
            continue
        q = min(cand, key=lambda j: (len(cols[j]), j))
        piv = row[q]
        for i in cols[q] - {p}:
            r = rows[i]
            f = r[q] * piv  # piv = +-1, so r[q] / piv == r[q] * piv
            for j, v in row.items():
                w = r.get(j, 0) - f * v
                if w:
                    if abs(w) >= _SAFE:
                        raise OverflowError
                    if j not in r:
                        cols[j].add(i)
                    r[j] = w
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if r:
                heapq.heappush(heap, (len(r), i))
            else:
                del rows[i]
        for j in row:
            cols[j].discard(p)
        del rows[p]
        del cols[q]
        units += 1
    live = sorted(j for j, s in cols.items() if s)
    pos = {j: k for k, j in enumerate(live)}
    rest = []
    for r in rows.values():
        dense = [0] * len(live)
        for j, v in r.items():
            dense[pos[j]] = v
        rest.append(dense)
    return rest, units


def _general(A: list[list[int]]) -> list[int]:
    """Min-pivot elimination on Python ints; returns the raw diagonal."""
    diag = []
    A = [row[:] for row in A if any(row)]
    while A and A[0]:
        best = None
        for i, row in enumerate(A):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, p, q = best
        while True:
            piv = A[p][q]
            done = True
            for i, row in enumerate(A):
                if i != p and row[q]:
                    f = row[q] // piv
                    if f:
                        A[i] = [a - f * b for a, b in zip(row, A[p])]
                    if A[i][q]:
                        done = False
            for j in range(len(A[p])):
                if j != q and A[p][j]:
                    f = A[p][j] // piv
                    if f:
                        for row in A:
                            row[j] -= f * row[q]
                    if A[p][j]:
                        done = False
            if done:
                break
            # a smaller remainder appeared in the pivot row or column
            cand = [(abs(A[i][q]), i, q) for i in range(len(A)) if A[i][q]]
            cand += [(abs(A[p][j]), p, j) for j in range(len(A[p])) if A[p][j]]
            _, p, q = min(cand)
        diag.append(abs(A[p][q]))
        A = [row[:q] + row[q + 1 :] for i, row in enumerate(A) if i != p]
        A = [row for row in A if any(row)]
    return diag


def smith_normal_form(M, cols: int | None = None) -> AbelianInvariants:
    """Invariants of ``Z^cols / rowspace(M)``.

    Works in int64 while entries stay small and restarts on Python integers
    the first time an update could overflow.
    """
    if cols is None:
        cols = len(M[0]) if len(M) else 0
    A = _as_int64(M) if len(M) else np.zeros((0, cols), dtype=np.int64)
    units = 0
    rest: list[list[int]]
    if A is not None:
        try:
            rest, units = _drop_units(A)
        except OverflowError:
            units, rest = 0, [[int(x) for x in row] for row in M]
    else:
        rest = [[int(x) for x in row] for row in M]
    diag = [1] * units + _general(rest)
    rank = cols - len(diag)
    return AbelianInvariants(rank, tuple(d for d in invariant_factors(diag) if d > 1))


# -- independent oracle: determinantal divisors ------------------------------


def _det(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [r[:] for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def determinantal_invariants(M: Sequence[Sequence[int]], cols: int | None = None) -> AbelianInvariants:
    """Cokernel invariants from gcds of all k x k minors (small matrices only)."""
    M = [[int(x) for x in row] for row in M]
    if cols is None:
        cols = len(M[0]) if M else 0
    prev, factors = 1, []
    for k in range(1, min(len(M), cols) + 1):
        g = 0
        for rs in itertools.combinations(range(len(M)), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return AbelianInvariants(cols - len(factors), tuple(f for f in factors if f > 1))
