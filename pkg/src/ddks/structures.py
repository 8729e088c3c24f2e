"""Diagonal double Kodaira structures: relations, verification, search, lifting.

A structure of type ``(b, n)`` is a tuple

    (r11, t11, ..., r1b, t1b, r21, t21, ..., r2b, t2b, z)

of ``4b + 1`` generators with ``o(z) = n`` satisfying two surface relations
and ``2b(2b+1)`` conjugacy relations.  The exhaustive search (``b = 2``)
fixes ``z`` and the second row, after which every first-row entry ranges over
an intersection of solution sets of ``[x, a] = c``; each such set is empty or a
left coset of ``C(a)``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .group import (
    FiniteGroup,
    GroupError,
    SubgroupSet,
    bits,
    closure_mask,
    maximal_subgroups,
    subgroup_generated,
)
from .presentation import Word, comm_word, evaluate_word

SYMBOLS_B2 = ("r11", "t11", "r12", "t12", "r21", "t21", "r22", "t22", "z")


class StructureError(ValueError):
    pass


# -- relations -----------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    name: str
    kind: str  # "surface", "rho", "tau" or "orbifold"
    lhs: Word
    rhs: Word

    @property
    def relator(self) -> Word:
        return self.lhs * self.rhs.inverse()


@dataclass(frozen=True)
class RelationSet:
    b: int
    n: int | None
    symbols: tuple[str, ...]
    relations: tuple[Relation, ...]

    def __len__(self) -> int:
        return len(self.relations)

    def of_kind(self, *kinds: str) -> list[Relation]:
        return [r for r in self.relations if r.kind in kinds]

    @property
    def relators(self) -> list[Word]:
        return [r.relator for r in self.relations]

    def symbol(self, name: str) -> int:
        return self.symbols.index(name)


def structure_symbols(b: int) -> tuple[str, ...]:
    row1 = [f"{s}1{j}" for j in range(1, b + 1) for s in "rt"]
    row2 = [f"{s}2{j}" for j in range(1, b + 1) for s in "rt"]
    return tuple(row1 + row2 + ["z"])


def generate_structure_relations(b: int, n: int | None = None) -> RelationSet:
    """Surface and conjugacy relations for type ``(b, n)``.

    Conjugacy relations are numbered ``R1, R2, ...`` and ``T1, T2, ...``
    walking ``j = 1..b`` and, inside each ``j``, the targets
    ``r2b, ..., r21, t2b, ..., t21, z``.  For ``b = 2`` this gives the usual
    labels R1-R10, T1-T10.  With ``n`` given, ``z^n = 1`` is appended.
    """
    if b < 2:
        raise StructureError("b must be at least 2")
    syms = structure_symbols(b)
    idx = {s: i for i, s in enumerate(syms)}

    def g(name: str, e: int = 1) -> Word:
        return Word.gen(idx[name], e)

    r1 = lambda j: g(f"r1{j}")  # noqa: E731
    t1 = lambda j: g(f"t1{j}")  # noqa: E731
    r2 = lambda k: g(f"r2{k}")  # noqa: E731
    t2 = lambda k: g(f"t2{k}")  # noqa: E731
    z, zi, one = g("z"), g("z", -1), Word()
    inv = Word.inverse

    rels: list[Relation] = []
    # surface relations
    lhs = one
    for j in range(b, 0, -1):
        lhs = lhs * comm_word(inv(r1(j)), inv(t1(j))) * inv(t1(j))
    for j in range(1, b + 1):
        lhs = lhs * t1(j)
    rels.append(Relation("S1", "surface", lhs, z))
    lhs = one
    for j in range(1, b + 1):
        lhs = lhs * comm_word(inv(r2(j)), t2(j)) * t2(j)
    for j in range(b, 0, -1):
        lhs = lhs * inv(t2(j))
    rels.append(Relation("S2", "surface", lhs, zi))

    ks = range(b, 0, -1)
    for kind, tag in (("rho", "R"), ("tau", "T")):
        num = 0
        for j in range(1, b + 1):
            x = r1(j) if kind == "rho" else t1(j)
            for k in ks:  # x against r2k
                if j < k:
                    rhs = one
                elif j == k:
                    rhs = one if kind == "rho" else inv(t2(j)) * z * t2(j)
                elif kind == "rho":
                    rhs = zi * r2(k) * inv(r2(j)) * z * r2(j) * inv(r2(k))
                else:
                    rhs = comm_word(inv(t2(j)), z)
                num += 1
                rels.append(Relation(f"{tag}{num}", kind, comm_word(x, r2(k)), rhs))
            for k in ks:  # x against t2k
                if j < k:
                    rhs = one
                elif j == k:
                    rhs = zi if kind == "rho" else comm_word(inv(t2(j)), z)
                elif kind == "rho":
                    rhs = comm_word(zi, t2(k))
                else:
                    tj = t2(j)
                    rhs = inv(tj) * z * tj * zi * t2(k) * z * inv(tj) * zi * tj * inv(t2(k))
                num += 1
                rels.append(Relation(f"{tag}{num}", kind, comm_word(x, t2(k)), rhs))
            other = r2(j) if kind == "rho" else t2(j)
            num += 1
            rels.append(Relation(f"{tag}{num}", kind, comm_word(x, z), comm_word(inv(other), z)))
    if n is not None:
        if n < 2:
            raise StructureError("n must be at least 2")
        rels.append(Relation("Z", "orbifold", z**n, one))
    return RelationSet(b, n, syms, tuple(rels))


def relation_count(b: int) -> int:
    return 2 * b * (2 * b + 1) + 2


# -- verification and metadata -------------------------------------------------


def _b_of(t: Sequence[int]) -> int:
    if (len(t) - 1) % 4:
        raise StructureError(f"tuple length {len(t)} is not 4b+1")
    return (len(t) - 1) // 4


def verify_structure(
    G: FiniteGroup,
    t: Sequence[int],
    b: int | None = None,
    n: int | None = None,
    require_generation: bool = True,
    prestructure: bool = False,
) -> list[str]:
    """Violations of the structure conditions; empty means valid.

    ``n=None`` accepts any ``o(z) >= 2``.  ``prestructure=True`` checks only the
    conjugacy relations (and ``o(z)``), never generation.
    """
    b = _b_of(t) if b is None else b
    if len(t) != 4 * b + 1:
        return [f"tuple length {len(t)} != 4b+1 = {4 * b + 1}"]
    if any(not 0 <= x < G.order for x in t):
        return ["element identifier out of range"]
    out = []
    oz = int(G.element_orders[t[-1]])
    if oz < 2:
        out.append("o(z) >= 2 fails")
    elif n is not None and oz != n:
        out.append(f"o(z) = {oz} != n = {n}")
    rs = _relations_cached(b)
    kinds = ("rho", "tau") if prestructure else ("surface", "rho", "tau")
    for r in rs.of_kind(*kinds):
        if evaluate_word(G, t, r.lhs) != evaluate_word(G, t, r.rhs):
            out.append(f"{r.name} fails")
    if require_generation and not prestructure and closure_mask(G, t) != G.full_mask:
        out.append("entries do not generate G")
    return out


_REL_CACHE: dict[int, RelationSet] = {}


def _relations_cached(b: int) -> RelationSet:
    if b not in _REL_CACHE:
        _REL_CACHE[b] = generate_structure_relations(b)
    return _REL_CACHE[b]


@dataclass(frozen=True)
class KodairaStructure:
    b: int
    n: int
    entries: tuple[int, ...]
    K1: SubgroupSet
    K2: SubgroupSet
    m1: int
    m2: int

    @property
    def strong(self) -> bool:
        return self.m1 == 1 and self.m2 == 1

    @property
    def z(self) -> int:
        return self.entries[-1]

    def to_record(self, label: str | None = None) -> dict:
        return {
            "label": label,
            "b": self.b,
            "n": self.n,
            "entries": list(self.entries),
            "k1_order": self.K1.order,
            "k2_order": self.K2.order,
            "strong": self.strong,
        }


def structure_metadata(G: FiniteGroup, t: Sequence[int], b: int | None = None) -> KodairaStructure:
    b = _b_of(t) if b is None else b
    bad = verify_structure(G, t, b)
    if bad:
        raise StructureError("invalid structure: " + "; ".join(bad))
    t = tuple(int(x) for x in t)
    z = t[-1]
    K1 = subgroup_generated(G, t[: 2 * b] + (z,))
    K2 = subgroup_generated(G, t[2 * b : 4 * b] + (z,))
    for K in (K1, K2):
        if not K.is_normal():
            raise StructureError("K1/K2 not normal; relation system violated")
    return KodairaStructure(
        b, int(G.element_orders[z]), t, K1, K2, G.order // K1.order, G.order // K2.order
    )


# -- search context ------------------------------------------------------------


def commutator_values(G: FiniteGroup) -> list[int]:
    return sorted(set(np.unique(G.commutator_table).tolist()) - {0})


def z_candidates(G: FiniteGroup, n: int | None = None, z: int | None = None) -> list[int]:
    """Non-trivial commutator values (of order ``n`` when given).

    R4 reads ``z^-1 = [r11, t21]``, and inverses of commutators are commutators,
    so nothing is lost by this restriction.
    """
    orders = G.element_orders
    cands = [c for c in commutator_values(G) if n is None or orders[c] == n]
    if z is not None:
        cands = [c for c in cands if c == z]
    return cands


class SearchContext:
    """Precomputed tables for the ``b = 2`` search on one group."""

    def __init__(self, G: FiniteGroup) -> None:
        self.G = G
        n = G.order
        self.n = n
        self.mult = np.ascontiguousarray(G.table, dtype=np.int64)
        self.inv = np.ascontiguousarray(G.inverses, dtype=np.int64)
        self.comm = np.ascontiguousarray(G.commutator_table, dtype=np.int64)
        # solution sets as Python ints (any order)
        sol_py = [[0] * n for _ in range(n)]
        cm = G.commutator_table
        for a in range(n):
            row = sol_py[a]
            col = cm[:, a]
            for x in range(n):
                row[col[x]] |= 1 << x
        self.sol_py = sol_py
        self.compiled = n <= 64
        if self.compiled:
            self.sol = np.array(sol_py, dtype=np.uint64)
            maxs = [M.members for M in maximal_subgroups(G)]
            nw = max(1, -(-len(maxs) // 64))
            cont = np.zeros((n, nw), dtype=np.uint64)
            for k, M in enumerate(maxs):
                for g in bits(M):
                    cont[g, k // 64] |= np.uint64(1) << np.uint64(k % 64)
            self.cont = cont
            self.n_maximal = len(maxs)

    # P1 / P2 tables for a fixed z -------------------------------------------

    @cached_property
    def _zcache(self) -> dict:
        return {}

    def tables(self, z: int) -> dict:
        if z in self._zcache:
            return self._zcache[z]
        mult, inv, comm = self.mult, self.inv, self.comm
        n = self.n
        zi = inv[z]
        ar = np.arange(n)
        if self.compiled:
            sol = self.sol
        else:
            sol = np.array(self.sol_py, dtype=object)
        cz = comm[inv, z]  # [x^-1, z]
        conj = mult[mult[inv, z], ar]  # x^-1 z x
        # row (x, y) of the grid is the pair (x, y)
        X, Y = np.meshgrid(ar, ar, indexing="ij")
        # P1 over (r21, t21): R2, R4, R5 and T2, T4, T5
        r11 = sol[X, 0] & sol[Y, zi] & sol[z, cz[X]]
        t11 = sol[X, conj[Y]] & sol[Y, cz[Y]] & sol[z, cz[Y]]
        keep = (r11 != 0) & (t11 != 0)
        p1 = np.stack([X[keep], Y[keep]], axis=1)
        P1 = dict(
            p1=p1,
            r11=r11[keep],
            t11=t11[keep],
            r12=sol[p1[:, 1], comm[zi, p1[:, 1]]],  # R9
            # S2 <=> [r22^-1, t22] == t21^-1 [r21^-1, t21]^-1 z^-1 t21
            gamma=mult[
                mult[mult[inv[p1[:, 1]], inv[comm[inv[p1[:, 0]], p1[:, 1]]]], zi], p1[:, 1]
            ],
        )
        # P2 over (r22, t22): R6, R8, R10 and T6, T8, T10
        r12 = sol[X, 0] & sol[Y, zi] & sol[z, cz[X]]
        t12 = sol[X, conj[Y]] & sol[Y, cz[Y]] & sol[z, cz[Y]]
        keep = (r12 != 0) & (t12 != 0)
        p2 = np.stack([X[keep], Y[keep]], axis=1)
        beta = comm[inv[p2[:, 0]], p2[:, 1]]
        order = np.lexsort((p2[:, 1], p2[:, 0], beta))
        p2 = p2[order]
        beta = beta[order]
        P2 = dict(
            p2=p2,
            c=(sol[p2[:, 0], 0] & sol[p2[:, 1], 0]),  # R1, R3, T1, T3 for row-1 index 1
            r12=r12[keep][order],
            t12=t12[keep][order],
            u=conj[p2[:, 1]],
            v=conj[p2[:, 0]],
            beta=beta,
            b_start=np.searchsorted(beta, ar, side="left"),
            b_end=np.searchsorted(beta, ar, side="right"),
        )
        if self.compiled:
            for d in (P1, P2):
                for k, v in d.items():
                    if v.dtype == object:
                        d[k] = v.astype(np.uint64)
                    d[k] = np.ascontiguousarray(d[k])
        out = {"P1": P1, "P2": P2}
        self._zcache[z] = out
        return out


# -- compiled and pure-Python shard processing ---------------------------------


def _run_kernel(ctx: SearchContext, z: int, lo: int, hi: int, mode: int, limit: int = 0):
    from . import _kernels as K

    T = ctx.tables(z)
    P1, P2 = T["P1"], T["P2"]
    cap = max(limit, 1) if mode == K.MODE_EMIT else 1
    out = np.zeros((cap, 9), dtype=np.int64)
    count, written = K.shard_kernel(
        ctx.mult, ctx.inv, ctx.comm, ctx.sol, ctx.cont, z,
        P1["p1"], P1["r11"], P1["t11"], P1["r12"], P1["gamma"], lo, hi,
        P2["p2"], P2["c"], P2["r12"], P2["t12"], P2["u"], P2["v"], P2["beta"],
        P2["b_start"], P2["b_end"],
        mode, out, limit if mode == K.MODE_EMIT else -1,
    )
    return int(count), out[: int(written)]


def _iter_shard_py(
    ctx: SearchContext, z: int, i: int, prestructures: bool = False
) -> Iterator[tuple[int, ...]]:
    """Pure-Python mirror of the compiled kernel for one P1 row."""
    G = ctx.G
    rows, inv, sol = G.rows, G.inv, ctx.sol_py
    cm = G.commutator_table
    T = ctx.tables(z)
    P1, P2 = T["P1"], T["P2"]
    r21, t21 = (int(v) for v in P1["p1"][i])
    zi = inv[z]
    m11a, m11b, m12b = int(P1["r11"][i]), int(P1["t11"][i]), int(P1["r12"][i])
    if prestructures:
        js = range(len(P2["p2"]))
    else:
        gmm = int(P1["gamma"][i])
        js = range(int(P2["b_start"][gmm]), int(P2["b_end"][gmm]))
    full = G.full_mask
    for j in js:
        r22, t22 = (int(v) for v in P2["p2"][j])
        c = int(P2["c"][j])
        m_r11, m_t11 = m11a & c, m11b & c
        if not (m_r11 and m_t11):
            continue
        v = int(P2["v"][j])
        r7 = rows[rows[rows[zi][r21]][v]][inv[r21]]
        m_r12 = int(P2["r12"][j]) & m12b & sol[r21][r7]
        if not m_r12:
            continue
        u = int(P2["u"][j])
        t9 = rows[rows[rows[rows[rows[u][zi]][t21]][z]][inv[u]]][inv[t21]]
        m_t12 = int(P2["t12"][j]) & sol[r21][int(cm[inv[t22], z])] & sol[t21][t9]
        if not m_t12:
            continue
        if prestructures:
            for r11, t11, r12, t12 in itertools.product(
                bits(m_r11), bits(m_t11), bits(m_r12), bits(m_t12)
            ):
                yield (r11, t11, r12, t12, r21, t21, r22, t22, z)
            continue
        base = closure_mask(G, (r21, t21, r22, t22, z))
        A = [
            (int(cm[inv[r11], inv[t11]]), r11, t11)
            for r11 in bits(m_r11)
            for t11 in bits(m_t11)
        ]
        for r12 in bits(m_r12):
            for t12 in bits(m_t12):
                need = rows[rows[rows[t12][inv[int(cm[inv[r12], inv[t12]])]]][z]][inv[t12]]
                for a, r11, t11 in A:
                    if a != need:
                        continue
                    if closure_mask(G, (r11, t11, r12, t12), start=base) != full:
                        continue
                    yield (r11, t11, r12, t12, r21, t21, r22, t22, z)


# -- public search API ---------------------------------------------------------


@dataclass
class SearchResult:
    total: int | None
    structures: np.ndarray = field(default_factory=lambda: np.zeros((0, 9), dtype=np.int64))
    shards: int = 0

    def __iter__(self):
        return (tuple(int(x) for x in row) for row in self.structures)


def shards(G: FiniteGroup, n: int | None = None, z: int | None = None, ctx=None) -> list[tuple[int, int]]:
    """Work units ``(z, P1 row)`` in canonical order."""
    ctx = ctx or SearchContext(G)
    out = []
    for zz in z_candidates(G, n, z):
        k = len(ctx.tables(zz)["P1"]["p1"])
        out.extend((zz, i) for i in range(k))
    return out


def _check_b(b: int, allow_general_b: bool) -> None:
    if b != 2 and not allow_general_b:
        raise StructureError("exhaustive search is implemented for b = 2 (pass allow_general_b)")


def find_structures(
    G: FiniteGroup,
    b: int = 2,
    *,
    n: int | None = None,
    z: int | None = None,
    count_only: bool = False,
    first: int | None = None,
    threads: int = 1,
    canonical: bool = False,
    use_compiled: bool | None = None,
    allow_general_b: bool = False,
    ctx: SearchContext | None = None,
) -> SearchResult:
    """Exhaustive search for structures of type ``(b, n)``.

    ``count_only`` returns the exact total without materializing tuples;
    ``first=k`` stops after ``k`` structures (``total`` is then ``None``);
    otherwise every structure is returned together with the total.  Results
    come in shard order ``(z, r21, t21, r22, t22, r11, t11, r12, t12)``;
    ``canonical=True`` sorts them lexicographically by the 9-tuple instead.
    """
    _check_b(b, allow_general_b)
    if b != 2:
        rows = list(brute_force_structures(G, b=b, n=n, limit=first))
        arr = np.array(rows, dtype=np.int64).reshape(-1, 4 * b + 1)
        if canonical:
            arr = arr[np.lexsort(arr.T[::-1])]
        return SearchResult(None if first else len(rows), arr)
    ctx = ctx or SearchContext(G)
    compiled = ctx.compiled if use_compiled is None else (use_compiled and ctx.compiled)
    work = shards(G, n, z, ctx)
    if not work:
        return SearchResult(0, shards=0)
    # consecutive P1 rows with the same z form one kernel call
    blocks: list[tuple[int, int, int]] = []
    for zz, i in work:
        if blocks and blocks[-1][0] == zz and blocks[-1][2] == i:
            blocks[-1] = (zz, blocks[-1][1], i + 1)
        else:
            blocks.append((zz, i, i + 1))

    if first is not None:
        found: list = []
        for zz, lo, hi in blocks:
            for i in range(lo, hi):
                if compiled:
                    _, rows = _run_kernel(ctx, zz, i, i + 1, 2, first - len(found))
                    found.extend(rows.tolist())
                else:
                    for t in _iter_shard_py(ctx, zz, i):
                        found.append(t)
                        if len(found) == first:
                            break
                if len(found) >= first:
                    break
            if len(found) >= first:
                break
        arr = np.array(found[:first], dtype=np.int64).reshape(-1, 9)
        if canonical:
            arr = arr[np.lexsort(arr.T[::-1])]
        return SearchResult(None, arr, len(work))

    if count_only:
        total = sum(_map_blocks(ctx, blocks, compiled, threads, mode=0))
        return SearchResult(total, shards=len(work))

    parts = []
    total = 0
    for zz, lo, hi in blocks:
        for i in range(lo, hi):
            if compiled:
                c, _ = _run_kernel(ctx, zz, i, i + 1, 0)
                if c:
                    _, rows = _run_kernel(ctx, zz, i, i + 1, 2, c)
                    parts.append(rows)
                    total += c
            else:
                rows = list(_iter_shard_py(ctx, zz, i))
                if rows:
                    parts.append(np.array(rows, dtype=np.int64))
                    total += len(rows)
    arr = np.concatenate(parts) if parts else np.zeros((0, 9), dtype=np.int64)
    if canonical:
        arr = arr[np.lexsort(arr.T[::-1])]
    return SearchResult(total, arr, len(work))


def _split(blocks: list[tuple[int, int, int]], pieces: int) -> list[tuple[int, int, int]]:
    out = []
    for zz, lo, hi in blocks:
        step = max(1, -(-(hi - lo) // pieces))
        out.extend((zz, a, min(hi, a + step)) for a in range(lo, hi, step))
    return out


def _map_blocks(ctx, blocks, compiled: bool, threads: int, mode: int) -> list[int]:
    def one(blk):
        zz, lo, hi = blk
        if compiled:
            return _run_kernel(ctx, zz, lo, hi, mode)[0]
        pre = mode == 1
        return sum(sum(1 for _ in _iter_shard_py(ctx, zz, i, pre)) for i in range(lo, hi))

    for zz, _, _ in blocks:
        ctx.tables(zz)  # build tables before fanning out
    if threads <= 1:
        return [one(b) for b in blocks]
    work = _split(blocks, 4 * threads)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(one, work))


def count_structures(G: FiniteGroup, n: int | None = None, threads: int = 1, **kw) -> int:
    return find_structures(G, 2, n=n, count_only=True, threads=threads, **kw).total


def find_prestructures(
    G: FiniteGroup,
    n: int | None = None,
    threads: int = 1,
    use_compiled: bool | None = None,
    ctx: SearchContext | None = None,
) -> int:
    """Number of 9-tuples satisfying R1-R10, T1-T10 with ``o(z) >= 2``
    (or ``= n``); neither surface relations nor generation are required."""
    ctx = ctx or SearchContext(G)
    compiled = ctx.compiled if use_compiled is None else (use_compiled and ctx.compiled)
    blocks = []
    for zz in z_candidates(G, n):
        k = len(ctx.tables(zz)["P1"]["p1"])
        if k:
            blocks.append((zz, 0, k))
    return sum(_map_blocks(ctx, blocks, compiled, threads, mode=1))


def iter_prestructures(G: FiniteGroup, n: int | None = None) -> Iterator[tuple[int, ...]]:
    ctx = SearchContext(G)
    for zz, i in shards(G, n, None, ctx):
        yield from _iter_shard_py(ctx, zz, i, prestructures=True)


def iter_structures(
    G: FiniteGroup, n: int | None = None, z: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Stream structures shard by shard (shard order, no materialization)."""
    ctx = SearchContext(G)
    for zz, i in shards(G, n, z, ctx):
        if ctx.compiled:
            c, _ = _run_kernel(ctx, zz, i, i + 1, 0)
            if c:
                _, rows = _run_kernel(ctx, zz, i, i + 1, 2, c)
                yield from (tuple(int(x) for x in r) for r in rows)
        else:
            yield from _iter_shard_py(ctx, zz, i)


def random_structures(
    G: FiniteGroup, k: int, seed: int = 0, n: int | None = None, ctx: SearchContext | None = None
) -> list[tuple[int, ...]]:
    """``k`` distinct structures from randomly chosen shards (one per shard)."""
    ctx = ctx or SearchContext(G)
    rng = np.random.default_rng(seed)
    work = shards(G, n, None, ctx)
    out: list[tuple[int, ...]] = []
    for idx in rng.permutation(len(work)):
        zz, i = work[idx]
        if ctx.compiled:
            c, _ = _run_kernel(ctx, zz, i, i + 1, 0)
            rows = _run_kernel(ctx, zz, i, i + 1, 2, c)[1].tolist() if c else []
        else:
            rows = list(_iter_shard_py(ctx, zz, i))
        if rows:
            out.append(tuple(int(x) for x in rows[rng.integers(len(rows))]))
            if len(out) == k:
                break
    return out


# -- independent brute-force oracle --------------------------------------------


def brute_force_structures(
    G: FiniteGroup,
    b: int = 2,
    n: int | None = None,
    prestructure: bool = False,
    limit: int | None = None,
    fixed: dict[str, int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Nested loops over all ``4b + 1`` entries, testing each relation as soon
    as its symbols are bound.  Uses only the relation words and the table.

    ``fixed`` pins named entries (e.g. ``{"z": 5, "r21": 7}``)."""
    rs = generate_structure_relations(b)
    kinds = ("rho", "tau") if prestructure else ("surface", "rho", "tau")
    rels = rs.of_kind(*kinds)
    syms = rs.symbols
    # bind z, then per index j: r2j, t2j, r1j, t1j
    bind = [len(syms) - 1]
    for j in range(b):
        bind += [2 * b + 2 * j, 2 * b + 2 * j + 1, 2 * j, 2 * j + 1]
    pos = {s: k for k, s in enumerate(bind)}
    by_level: list[list[Relation]] = [[] for _ in bind]
    for r in rels:
        gens = r.lhs.generators() | r.rhs.generators()
        by_level[max(pos[g] for g in gens)].append(r)
    orders = G.element_orders
    pinned = {rs.symbol(k): int(v) for k, v in (fixed or {}).items()}
    t = [0] * len(syms)
    found = 0

    def rec(level: int):
        nonlocal found
        if level == len(bind):
            if not prestructure and closure_mask(G, t) != G.full_mask:
                return
            found += 1
            yield tuple(t)
            return
        slot = bind[level]
        for x in (pinned[slot],) if slot in pinned else range(G.order):
            if level == 0 and (orders[x] < 2 or (n is not None and orders[x] != n)):
                continue
            t[slot] = x
            if all(evaluate_word(G, t, r.lhs) == evaluate_word(G, t, r.rhs) for r in by_level[level]):
                yield from rec(level + 1)
                if limit is not None and found >= limit:
                    return

    yield from rec(0)


# -- lifting and orbits --------------------------------------------------------


def lift_structures(
    G: FiniteGroup,
    N: SubgroupSet,
    proj: Sequence[int],
    base: Sequence[int],
    Q: FiniteGroup | None = None,
) -> list[tuple[tuple[int, ...], bool]]:
    """All preimages of ``base`` (a structure on ``G/N``) that satisfy the
    relation system on ``G``, each flagged by whether it generates ``G``."""
    b = _b_of(base)
    if Q is not None:
        bad = verify_structure(Q, base, b)
        if bad:
            raise StructureError("base is not a structure: " + "; ".join(bad))
    pre: dict[int, list[int]] = {}
    for g in range(G.order):
        pre.setdefault(proj[g], []).append(g)
    fibers = [pre.get(x, []) for x in base]
    out = []
    for t in itertools.product(*fibers):
        if verify_structure(G, t, b, require_generation=False):
            continue
        out.append((tuple(t), closure_mask(G, t) == G.full_mask))
    return out


def count_orbits(total: int, auts: np.ndarray | Sequence) -> int:
    """Orbits of a free ``Aut(G)`` action: ``total / |Aut(G)|``."""
    k = len(auts)
    if k == 0:
        raise GroupError("empty automorphism list")
    if total % k:
        raise StructureError(f"total {total} not divisible by |Aut| = {k}; action is not free")
    return total // k


def orbit_representatives(
    structures: Iterable[Sequence[int]], auts: np.ndarray
) -> list[tuple[int, ...]]:
    """One representative (the lexicographic minimum) per Aut-orbit."""
    seen: set[tuple[int, ...]] = set()
    reps = []
    for t in structures:
        idx = np.asarray(t, dtype=np.int64)
        imgs = auts[:, idx].astype(np.int64)
        m = tuple(int(x) for x in imgs[np.lexsort(imgs.T[::-1])][0])
        if m not in seen:
            seen.add(m)
            reps.append(m)
    return reps
