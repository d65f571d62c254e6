"""Compiled inner loop for the low-index subgroup search.

The search state is a flat int64 coset table with a reduced column layout
(involutory generators get one self-inverse column).  The kernel runs an
iterative depth-first search with forced-deduction propagation and
first-in-conjugacy-class pruning, and streams completed tables into an
output buffer:

    [n, defs_a[1..n-1], defs_c[1..n-1], tab[0..n*ncols-1]] per table

Status codes: 0 ok, 1 output buffer full, 2 node budget exceeded,
3 internal stack overflow (pathological input).
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        return wrap


@njit(cache=True)
def _compare_from(tab, nc, ncur, start, lab, order):
    """Lexicographic comparison of the start-renumbered scan word against
    the table's own scan word; -1 smaller, 1 larger, 0 equal/undecided."""
    for i in range(ncur):
        lab[i] = -1
    lab[start] = 0
    order[0] = start
    norder = 1
    qi = 0
    while qi < norder:
        gbase = order[qi] * nc
        bbase = qi * nc
        for c in range(nc):
            delta = tab[gbase + c]
            base = tab[bbase + c]
            if delta < 0 or base < 0:
                return 0
            v = lab[delta]
            if v < 0:
                v = norder
                lab[delta] = v
                order[norder] = delta
                norder += 1
            if v != base:
                if v < base:
                    return -1
                return 1
        qi += 1
    return 0


@njit(cache=True)
def _not_canonical(tab, nc, ncur, lab, order):
    for start in range(1, ncur):
        if _compare_from(tab, nc, ncur, start, lab, order) < 0:
            return True
    return False


@njit(cache=True)
def _assign(tab, nc, inv_col, rot_data, rot_start, rot_len,
            rbc_ids, rbc_start, rbc_count, trail, tlen, pstack,
            a0, c0, b0):
    """Set a0^c0 = b0 and propagate forced deductions.

    Returns the new trail length on success.  On conflict all writes are
    undone and -1 is returned (-2 for deduction-stack overflow)."""
    start_tlen = tlen
    fail = 0
    ps = 0
    pstack[0] = a0
    pstack[1] = c0
    pstack[2] = b0
    ps = 3
    while ps > 0:
        b = pstack[ps - 1]
        c = pstack[ps - 2]
        a = pstack[ps - 3]
        ps -= 3
        slot = a * nc + c
        cur = tab[slot]
        if cur >= 0:
            if cur != b:
                fail = -1
                break
            continue
        tab[slot] = b
        trail[tlen] = slot
        tlen += 1
        inv = inv_col[c]
        slot2 = b * nc + inv
        cur2 = tab[slot2]
        if cur2 >= 0:
            if cur2 != a:
                fail = -1
                break
        else:
            tab[slot2] = a
            trail[tlen] = slot2
            tlen += 1
        # scans through the new edge in both directions
        for side in range(2):
            if side == 0:
                ends = a
                col = c
            else:
                ends = b
                col = inv
            for ri in range(rbc_count[col]):
                rid = rbc_ids[rbc_start[col] + ri]
                rs = rot_start[rid]
                L = rot_len[rid]
                f = ends
                i = 0
                while i < L:
                    nxt = tab[f * nc + rot_data[rs + i]]
                    if nxt < 0:
                        break
                    f = nxt
                    i += 1
                if i == L:
                    if f != ends:
                        fail = -1
                        break
                    continue
                bk = ends
                j = L - 1
                while j >= i:
                    prv = tab[bk * nc + inv_col[rot_data[rs + j]]]
                    if prv < 0:
                        break
                    bk = prv
                    j -= 1
                if j < i:
                    if f != bk:
                        fail = -1
                        break
                elif j == i:
                    if ps + 3 > pstack.shape[0]:
                        fail = -2
                        break
                    pstack[ps] = f
                    pstack[ps + 1] = rot_data[rs + i]
                    pstack[ps + 2] = bk
                    ps += 3
            if fail != 0:
                break
        if fail != 0:
            break
    if fail != 0:
        while tlen > start_tlen:
            tlen -= 1
            tab[trail[tlen]] = -1
        return fail
    return tlen


@njit(cache=True)
def search(ncols, inv_col, rot_data, rot_start, rot_len,
           rbc_ids, rbc_start, rbc_count, max_index, node_budget, out):
    nc = ncols
    tab = np.full(max_index * nc, -1, np.int64)
    trail = np.empty(max_index * nc * 2 + 16, np.int64)
    pstack = np.empty(3 * (max_index * nc + 64), np.int64)
    lab = np.empty(max_index, np.int64)
    order = np.empty(max_index, np.int64)
    defs_a = np.zeros(max_index, np.int64)
    defs_c = np.zeros(max_index, np.int64)
    maxdepth = max_index * nc + 2
    fr_slot = np.empty(maxdepth, np.int64)
    fr_cand = np.empty(maxdepth, np.int64)
    fr_mark = np.empty(maxdepth, np.int64)
    fr_ext = np.empty(maxdepth, np.int64)

    ncur = 1
    tlen = 0
    out_len = 0
    nodes = 0

    # frame 0
    fr_slot[0] = 0
    fr_cand[0] = -1
    fr_mark[0] = 0
    fr_ext[0] = 0
    depth = 0

    while depth >= 0:
        # undo the previous attempt at this frame
        mark = fr_mark[depth]
        while tlen > mark:
            tlen -= 1
            tab[trail[tlen]] = -1
        if fr_ext[depth] == 1:
            ncur -= 1
            fr_ext[depth] = 0

        slot = fr_slot[depth]
        a = slot // nc
        c = slot % nc
        inv = inv_col[c]

        # next candidate: existing cosets in increasing order, then a new one
        cand = fr_cand[depth] + 1
        chosen = -1
        while cand < ncur:
            s2 = cand * nc + inv
            if tab[s2] < 0 or s2 == slot:
                chosen = cand
                break
            cand += 1
        is_new = False
        if chosen < 0:
            if cand == ncur and ncur < max_index:
                chosen = ncur
                is_new = True
            else:
                depth -= 1
                continue
        fr_cand[depth] = chosen

        nodes += 1
        if node_budget > 0 and nodes > node_budget:
            return out_len, nodes, 2

        if is_new:
            defs_a[ncur] = a
            defs_c[ncur] = c
            ncur += 1
            fr_ext[depth] = 1

        t2 = _assign(tab, nc, inv_col, rot_data, rot_start, rot_len,
                     rbc_ids, rbc_start, rbc_count, trail, tlen, pstack,
                     a, c, chosen)
        if t2 == -2:
            return out_len, nodes, 3
        if t2 < 0:
            continue
        tlen = t2
        if _not_canonical(tab, nc, ncur, lab, order):
            continue

        # find next undefined slot
        nxt = -1
        for idx in range(slot, ncur * nc):
            if tab[idx] < 0:
                nxt = idx
                break
        if nxt < 0:
            # complete table: emit
            need = 1 + 2 * (ncur - 1) + ncur * nc
            if out_len + need > out.shape[0]:
                return out_len, nodes, 1
            out[out_len] = ncur
            pos = out_len + 1
            for i in range(1, ncur):
                out[pos] = defs_a[i]
                out[pos + ncur - 1] = defs_c[i]
                pos += 1
            pos = out_len + 1 + 2 * (ncur - 1)
            for i in range(ncur * nc):
                out[pos + i] = tab[i]
            out_len += need
            continue

        depth += 1
        fr_slot[depth] = nxt
        fr_cand[depth] = -1
        fr_mark[depth] = tlen
        fr_ext[depth] = 0

    return out_len, nodes, 0
