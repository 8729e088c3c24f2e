"""Automorphism groups as arrays of element permutations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .group import FiniteGroup, GroupError, iter_isomorphisms

MAX_AUT_ORDER = 1 << 12


def automorphism_group(G: FiniteGroup) -> np.ndarray:
    """All automorphisms of ``G`` as rows of a ``(|Aut|, |G|)`` array.

    Row 0 is the identity; the remaining rows follow the backtracking order.
    """
    if G.order > MAX_AUT_ORDER:
        raise GroupError(f"automorphism search limited to order <= {MAX_AUT_ORDER}")
    ident = list(range(G.order))
    rows = [ident]
    for phi in iter_isomorphisms(G, G):
        if phi != ident:
            rows.append(phi)
    dtype = np.uint8 if G.order <= 256 else np.uint16
    out = np.array(rows, dtype=dtype)
    out.setflags(write=False)
    return out


def apply_to_tuple(phi: Sequence[int] | np.ndarray, t: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(phi[g]) for g in t)


def compose(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """``phi . psi``, i.e. apply ``psi`` first."""
    return phi[psi]


def inverse(phi: np.ndarray) -> np.ndarray:
    out = np.empty_like(phi)
    out[phi] = np.arange(len(phi), dtype=phi.dtype)
    return out


def is_automorphism(G: FiniteGroup, phi: Sequence[int]) -> bool:
    p = np.asarray(phi, dtype=np.int64)
    if p.shape != (G.order,) or sorted(p.tolist()) != list(range(G.order)):
        return False
    t = G.table
    return bool(np.array_equal(p[t], t[p[:, None], p[None, :]]))


def is_closed_under_composition(
    auts: np.ndarray, max_pairs: int = 2_000_000, seed: int = 0
) -> bool:
    """Check ``a . b`` lies in the list, over all pairs or a random sample of them."""
    keys = {row.tobytes() for row in auts}
    k = len(auts)
    if k * k <= max_pairs:
        for a in auts:
            comp = a[auts]
            if any(row.tobytes() not in keys for row in comp):
                return False
        return True
    rng = np.random.default_rng(seed)
    i = rng.integers(0, k, size=max_pairs // 8)
    j = rng.integers(0, k, size=max_pairs // 8)
    comp = np.take_along_axis(auts[i], auts[j].astype(np.int64), axis=1)
    return all(row.tobytes() in keys for row in comp)


def stabilizer_size(auts: np.ndarray, t: Sequence[int]) -> int:
    """Number of automorphisms fixing the tuple ``t`` componentwise."""
    idx = np.asarray(t, dtype=np.int64)
    return int(np.all(auts[:, idx] == idx, axis=1).sum())
