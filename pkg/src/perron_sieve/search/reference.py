"""Exact big-integer twins of the compiled block enumerators.

Used when the int64 magnitude certificate fails, and as a slow cross-check in
tests.  Same semantics and counter layout as ``kernel.py``; simpler control
flow (recursion, leaf level enumerated rather than counted in closed form).
"""
from __future__ import annotations


def _backward_ok(d, c, eps, blo, bhi):
    cs = [0] + [eps * c[d - i] for i in range(1, d)]
    ps = [0] * d
    for k in range(1, d):
        s = k * cs[k] + sum(cs[i] * ps[k - i] for i in range(1, k))
        if s < blo[k] or s > bhi[k]:
            return False
        ps[k] = s
    return True


def nonorientable_block(d, lo, hi, blo, bhi, cback, prefix, prune_backward, parity_prune):
    """Returns (rows, counters) with rows as tuples (c_1..c_{d-1}, constant)."""
    counters = [0] * 6
    rows: list[tuple[int, ...]] = []
    p = [0] * (d + 1)
    c = [0] * (d + 1)
    last = d - 1

    def level(k: int, par_ok: bool) -> None:
        s = sum(c[i] * p[k - i] for i in range(1, k))
        L, H = lo[k], hi[k]
        if k <= len(prefix):
            L, H = max(L, prefix[k - 1]), min(H, prefix[k - 1])
        if prune_backward and k < last:
            L, H = max(L, s - k * cback[d - k]), min(H, s + k * cback[d - k])
        for pk in range(L, H + 1):
            if (pk - s) % k:
                continue
            ck = (pk - s) // k
            ok = par_ok
            if 2 * k > d:
                same = (ck - c[d - k]) % 2 == 0
                if parity_prune and not same:
                    continue
                ok = ok and same
            p[k], c[k] = pk, ck
            if k < last:
                counters[4] += 1
                level(k + 1, ok)
                continue
            counters[0] += 1
            if not ok:
                continue
            counters[1] += 1
            counters[2] += 2
            for eps in (1, -1):
                if _backward_ok(d, c, eps, blo, bhi):
                    counters[3] += 1
                    rows.append(tuple(c[1:d]) + (eps,))

    level(1, True)
    return rows, counters


def reversing_block(g, lo, hi, prefix):
    d = 2 * g
    counters = [0] * 6
    rows: list[tuple[int, ...]] = []
    p = [0] * (d + 1)
    c = [0] * (d + 1)
    const = 1 if g % 2 == 0 else -1

    def level(k: int) -> None:
        s = sum(c[i] * p[k - i] for i in range(1, k))
        L, H = lo[k], hi[k]
        if k <= len(prefix):
            L, H = max(L, prefix[k - 1]), min(H, prefix[k - 1])
        for pk in range(L, H + 1):
            if (pk - s) % k:
                continue
            p[k], c[k] = pk, (pk - s) // k
            counters[4] += 1
            if k < g:
                level(k + 1)
                continue
            counters[0] += 1
            for j in range(g + 1, d):
                c[j] = (-1) ** (g + j) * c[d - j]
            ok = True
            for j in range(g + 1, d):
                pj = j * c[j] + sum(c[i] * p[j - i] for i in range(1, j))
                if not lo[j] <= pj <= hi[j]:
                    ok = False
                    break
                p[j] = pj
            if ok:
                counters[1] += 1
                rows.append(tuple(c[1:d]) + (const,))

    level(1)
    return rows, counters
