"""Compiled depth-first enumeration over power-sum prefixes.

Arrays are 1-indexed (slot 0 unused) to keep the Newton-identity indices
readable.  All arithmetic is int64; callers must check ``int64_safe`` first
and fall back to the exact Python twin (``reference.py``) otherwise.

Counter layout (int64 array):
    0 integral leaves (only meaningful with parity_prune=False)
    1 leaves passing the mod-2 reciprocity test
    2 leaves times the two constant-term choices
    3 survivors of the reciprocal-polynomial bound test
    4 DFS nodes visited
    5 rows dropped because the output buffer was full
"""
from __future__ import annotations

import numpy as np
from numba import njit

N_COUNTERS = 6


@njit(cache=True)
def _count_progression(L, H, t, m):
    if L > H:
        return 0
    first = L + ((t - L) % m)
    if first > H:
        return 0
    return (H - first) // m + 1


@njit(cache=True)
def _backward_ok(d, c, eps, blo, bhi, cs, ps):
    # power sums of eps * x^d P(1/x), whose search coefficients are eps * c_{d-i}
    for i in range(1, d):
        cs[i] = eps * c[d - i]
    for k in range(1, d):
        s = k * cs[k]
        for i in range(1, k):
            s += cs[i] * ps[k - i]
        if s < blo[k] or s > bhi[k]:
            return False
        ps[k] = s
    return True


@njit(cache=True)
def nonorientable_block(d, lo, hi, blo, bhi, cback, prefix_len, prefix,
                        prune_backward, parity_prune, out, counters):
    """Enumerate one prefix block; survivors of the bound test go to ``out``.

    ``out`` rows hold c_1..c_{d-1} followed by the constant term.
    Returns the number of rows written.
    """
    last = d - 1
    p = np.zeros(d + 1, np.int64)
    c = np.zeros(d + 1, np.int64)
    cur = np.zeros(d + 1, np.int64)
    end = np.zeros(d + 1, np.int64)
    stp = np.ones(d + 1, np.int64)
    S = np.zeros(d + 1, np.int64)
    par = np.ones(d + 1, np.bool_)
    cs = np.zeros(d + 1, np.int64)
    ps = np.zeros(d + 1, np.int64)
    cap = out.shape[0]
    nout = 0

    k = 1
    level_ready = False
    while k >= 1:
        if not level_ready:
            s = 0
            for i in range(1, k):
                s += c[i] * p[k - i]
            S[k] = s
            L = lo[k]
            H = hi[k]
            if k <= prefix_len:
                if prefix[k] > L:
                    L = prefix[k]
                if prefix[k] < H:
                    H = prefix[k]
            if prune_backward:
                bl = s - k * cback[d - k]
                bh = s + k * cback[d - k]
                if bl > L:
                    L = bl
                if bh < H:
                    H = bh
            if parity_prune and 2 * k > d:
                m = 2 * k
                t = s + k * (c[d - k] & 1)
            else:
                m = k
                t = s
            cur[k] = L + ((t - L) % m) if L <= H else H + 1
            end[k] = H
            stp[k] = m
            level_ready = True
        if cur[k] > end[k]:
            k -= 1
            continue
        pk = cur[k]
        cur[k] += stp[k]
        p[k] = pk
        c[k] = (pk - S[k]) // k
        counters[4] += 1
        if 2 * k > d:
            par[k] = par[k - 1] and ((c[k] - c[d - k]) & 1) == 0
        else:
            par[k] = par[k - 1]

        if k + 1 < last:
            k += 1
            level_ready = False
            continue

        # children of this node are leaves: level d-1 handled in closed form
        s = 0
        for i in range(1, last):
            s += c[i] * p[last - i]
        L = lo[last]
        H = hi[last]
        if last <= prefix_len:
            if prefix[last] > L:
                L = prefix[last]
            if prefix[last] < H:
                H = prefix[last]
        counters[0] += _count_progression(L, H, s, last)
        if not par[k]:
            continue
        q1 = c[1] & 1
        n3 = _count_progression(L, H, s + last * q1, 2 * last)
        counters[1] += n3
        counters[2] += 2 * n3
        if n3 == 0:
            continue
        # c_{d-1} range from the forward interval
        fl = -((s - L) // last)  # ceil((L - s) / last)
        fh = (H - s) // last
        for eps in (1, -1):
            if eps == 1:
                bl = blo[1]
                bh = bhi[1]
            else:
                bl = -bhi[1]
                bh = -blo[1]
            cl = fl if fl > bl else bl
            ch = fh if fh < bh else bh
            if cl > ch:
                continue
            cl = cl + ((q1 - cl) % 2)
            v = cl
            while v <= ch:
                c[last] = v
                p[last] = last * v + s
                if _backward_ok(d, c, eps, blo, bhi, cs, ps):
                    counters[3] += 1
                    if nout < cap:
                        for i in range(1, d):
                            out[nout, i - 1] = c[i]
                        out[nout, d - 1] = eps
                        nout += 1
                    else:
                        counters[5] += 1
                v += 2
    return nout


@njit(cache=True)
def reversing_block(g, lo, hi, prefix_len, prefix, out, counters):
    """Orientation-reversing enumeration of one prefix block.

    Free power sums are p_1..p_g; c_{g+1}..c_{2g-1} follow from
    c_k = (-1)^(g+k) c_{2g-k}.  Rows hold c_1..c_{2g-1} and the constant term.

    counters: 0 integral leaves, 1 leaves passing the recomputed bounds,
    4 nodes visited, 5 dropped rows.
    """
    d = 2 * g
    p = np.zeros(d + 1, np.int64)
    c = np.zeros(d + 1, np.int64)
    cur = np.zeros(d + 1, np.int64)
    end = np.zeros(d + 1, np.int64)
    stp = np.ones(d + 1, np.int64)
    S = np.zeros(d + 1, np.int64)
    cap = out.shape[0]
    nout = 0
    const = 1 if g % 2 == 0 else -1

    k = 1
    level_ready = False
    while k >= 1:
        if not level_ready:
            s = 0
            for i in range(1, k):
                s += c[i] * p[k - i]
            S[k] = s
            L = lo[k]
            H = hi[k]
            if k <= prefix_len:
                if prefix[k] > L:
                    L = prefix[k]
                if prefix[k] < H:
                    H = prefix[k]
            cur[k] = L + ((s - L) % k) if L <= H else H + 1
            end[k] = H
            stp[k] = k
            level_ready = True
        if cur[k] > end[k]:
            k -= 1
            continue
        pk = cur[k]
        cur[k] += stp[k]
        p[k] = pk
        c[k] = (pk - S[k]) // k
        counters[4] += 1
        if k < g:
            k += 1
            level_ready = False
            continue
        counters[0] += 1
        for j in range(g + 1, d):
            sgn = 1 if (g + j) % 2 == 0 else -1
            c[j] = sgn * c[d - j]
        ok = True
        for j in range(g + 1, d):
            s = j * c[j]
            for i in range(1, j):
                s += c[i] * p[j - i]
            if s < lo[j] or s > hi[j]:
                ok = False
                break
            p[j] = s
        if not ok:
            continue
        counters[1] += 1
        if nout < cap:
            for i in range(1, d):
                out[nout, i - 1] = c[i]
            out[nout, d - 1] = const
            nout += 1
        else:
            counters[5] += 1
    return nout
