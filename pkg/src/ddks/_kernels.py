"""Compiled inner loops for the type (2, n) structure search (orders <= 64).

Subsets of the group are ``uint64`` bit-vectors.  ``sol[a, c]`` is the set of
``x`` with ``[x, a] = c``; ``cont[g, w]`` holds, in word ``w``, one bit per
maximal subgroup containing ``g``, so a tuple generates the group iff the AND of
its ``cont`` rows is zero.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_COUNT = 0
MODE_PRESTRUCTURES = 1
MODE_EMIT = 2

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _low_index(x):
    low = x & (~x + _ONE)
    return _popcount(low - _ONE)


@njit(cache=True, inline="always")
def _unpack(mask, out):
    k = 0
    while mask:
        i = _low_index(mask)
        out[k] = i
        k += 1
        mask &= mask - _ONE
    return k


@njit(cache=True, nogil=True)
def shard_kernel(
    mult, inv, comm, sol, cont, z,
    p1, p1_r11, p1_t11, p1_r12, p1_gamma, lo, hi,
    p2, p2_c, p2_r12, p2_t12, p2_u, p2_v, p2_beta, b_start, b_end,
    mode, out, limit,
):
    """Process P1 rows ``lo..hi`` for a fixed ``z``; returns ``(count, written)``.

    P2 rows are sorted by ``beta = [r22^-1, t22]`` so the S2 filter becomes a
    bucket lookup: S2 holds iff ``beta == gamma`` for the P1 row.
    """
    n = mult.shape[0]
    nw = cont.shape[1]
    zinv = inv[z]
    count = np.int64(0)
    written = np.int64(0)
    e_r11 = np.empty(64, np.int64)
    e_t11 = np.empty(64, np.int64)
    e_r12 = np.empty(64, np.int64)
    e_t12 = np.empty(64, np.int64)
    a_val = np.empty(4096, np.int64)
    a_r11 = np.empty(4096, np.int64)
    a_t11 = np.empty(4096, np.int64)
    a_cont = np.empty((4096, nw), np.uint64)
    c0 = np.empty(nw, np.uint64)
    c2 = np.empty(nw, np.uint64)
    for i in range(lo, hi):
        r21 = p1[i, 0]
        t21 = p1[i, 1]
        if mode == MODE_PRESTRUCTURES:
            j0 = 0
            j1 = p2.shape[0]
        else:
            g = p1_gamma[i]
            j0 = b_start[g]
            j1 = b_end[g]
        for j in range(j0, j1):
            r22 = p2[j, 0]
            t22 = p2[j, 1]
            c = p2_c[j]
            m_r11 = p1_r11[i] & c
            if m_r11 == _ZERO:
                continue
            m_t11 = p1_t11[i] & c
            if m_t11 == _ZERO:
                continue
            # R7: [r12, r21] = z^-1 r21 v r21^-1 with v = r22^-1 z r22
            r7 = mult[mult[mult[zinv, r21], p2_v[j]], inv[r21]]
            m_r12 = p2_r12[j] & p1_r12[i] & sol[r21, r7]
            if m_r12 == _ZERO:
                continue
            # T7 and T9; u = t22^-1 z t22
            u = p2_u[j]
            t9 = mult[mult[mult[mult[mult[u, zinv], t21], z], inv[u]], inv[t21]]
            m_t12 = p2_t12[j] & sol[r21, comm[inv[t22], z]] & sol[t21, t9]
            if m_t12 == _ZERO:
                continue
            if mode == MODE_PRESTRUCTURES:
                count += _popcount(m_r11) * _popcount(m_t11) * _popcount(m_r12) * _popcount(m_t12)
                continue
            for w in range(nw):
                c0[w] = cont[r21, w] & cont[t21, w] & cont[r22, w] & cont[t22, w] & cont[z, w]
            k11 = _unpack(m_r11, e_r11)
            k12 = _unpack(m_t11, e_t11)
            na = 0
            for x in range(k11):
                r11 = e_r11[x]
                ir11 = inv[r11]
                for y in range(k12):
                    t11 = e_t11[y]
                    a_val[na] = comm[ir11, inv[t11]]
                    a_r11[na] = r11
                    a_t11[na] = t11
                    for w in range(nw):
                        a_cont[na, w] = c0[w] & cont[r11, w] & cont[t11, w]
                    na += 1
            k21 = _unpack(m_r12, e_r12)
            k22 = _unpack(m_t12, e_t12)
            for x in range(k21):
                r12 = e_r12[x]
                ir12 = inv[r12]
                for y in range(k22):
                    t12 = e_t12[y]
                    # S1: [r11^-1, t11^-1] = t12 [r12^-1, t12^-1]^-1 z t12^-1
                    need = mult[mult[mult[t12, inv[comm[ir12, inv[t12]]]], z], inv[t12]]
                    for w in range(nw):
                        c2[w] = cont[r12, w] & cont[t12, w]
                    for q in range(na):
                        if a_val[q] != need:
                            continue
                        gen = True
                        for w in range(nw):
                            if a_cont[q, w] & c2[w]:
                                gen = False
                                break
                        if not gen:
                            continue
                        count += 1
                        if mode == MODE_EMIT:
                            row = out[written]
                            row[0] = a_r11[q]
                            row[1] = a_t11[q]
                            row[2] = r12
                            row[3] = t12
                            row[4] = r21
                            row[5] = t21
                            row[6] = r22
                            row[7] = t22
                            row[8] = z
                            written += 1
                            if written == limit:
                                return count, written
    return count, written
