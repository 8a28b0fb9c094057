"""Pure-Python search kernels.

Reference lane for the compiled module `_kernel_c`. Both lanes must agree
exactly: values, witnesses, and node counts. Hypergraphs arrive as tuples
of edge bitmasks (bit v = vertex v) sorted in edge-lex order; the DFS
orders below define the deterministic witnesses.

Targets for the Turan search: 0 = forest family (free iff lforest < k),
1 = matching family (free iff nu <= k).
"""

from __future__ import annotations

from itertools import permutations

BACKEND = "py"

TARGET_FOREST = 0
TARGET_MATCHING = 1


def _verts(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


# --- matchings ---------------------------------------------------------


def nu_search(n, r, masks):
    """(matching number, lex-first maximum matching as masks)."""
    m = len(masks)
    best = 0
    best_sel = ()
    sel = []

    def rec(i, used, cur):
        nonlocal best, best_sel
        if cur > best:
            best = cur
            best_sel = tuple(sel)
        if cur + min(m - i, (n - used.bit_count()) // r) <= best:
            return
        for j in range(i, m):
            mj = masks[j]
            if mj & used:
                continue
            sel.append(mj)
            rec(j + 1, used | mj, cur + 1)
            sel.pop()

    rec(0, 0, 0)
    return best, best_sel


def nu_at_least(n, r, masks, k):
    """True iff some k pairwise disjoint edges exist. Early exit."""
    if k <= 0:
        return True
    m = len(masks)

    def rec(i, used, cur):
        if cur >= k:
            return True
        if cur + min(m - i, (n - used.bit_count()) // r) < k:
            return False
        for j in range(i, m):
            mj = masks[j]
            if mj & used:
                continue
            if rec(j + 1, used | mj, cur + 1):
                return True
        return False

    return rec(0, 0, 0)


# --- tight paths -------------------------------------------------------
#
# Open-path state: (used-vertex mask, ordered suffix = last r-1 vertices).
# Extending by u needs the window (suffix + u) to be an edge; the new
# suffix drops the oldest vertex. g(mask, suf) = max further edges.


def _sufbits(suf):
    b = 0
    for w in suf:
        b |= 1 << w
    return b


def _path_memo(n, r, masks):
    eset = set(masks)
    memo = {}

    def g(mask, suf):
        key = (mask, suf)
        val = memo.get(key)
        if val is not None:
            return val
        best = 0
        sb = _sufbits(suf)
        for u in range(n):
            bu = 1 << u
            if mask & bu or (sb | bu) not in eset:
                continue
            t = 1 + g(mask | bu, (suf + (u,))[1:])
            if t > best:
                best = t
        memo[key] = best
        return best

    return eset, g


def path_search(n, r, masks):
    """(max tight-path edge count, lex-smallest optimal vertex sequence)."""
    if not masks:
        return 0, ()
    eset, g = _path_memo(n, r, masks)

    best = 0
    for em in masks:
        for p in permutations(_verts(em)):
            t = 1 + g(em, p[1:])
            if t > best:
                best = t

    starts = sorted(p for em in masks for p in permutations(_verts(em)))
    seq = mask = suf = None
    for p in starts:
        em = _sufbits(p)
        if 1 + g(em, p[1:]) == best:
            seq = list(p)
            mask, suf = em, p[1:]
            break
    rem = best - 1
    while rem > 0:
        sb = _sufbits(suf)
        for u in range(n):
            bu = 1 << u
            if mask & bu or (sb | bu) not in eset:
                continue
            ns = (suf + (u,))[1:]
            if g(mask | bu, ns) == rem - 1:
                seq.append(u)
                mask |= bu
                suf = ns
                rem -= 1
                break
        else:
            raise AssertionError("path reconstruction lost the optimum")
    return best, tuple(seq)


# --- tight linear forests ----------------------------------------------
#
# Same state plus a closed marker (suf=None): from a closed state a new
# path may start at any unused edge in any vertex order. h = max edges.


def forest_search(n, r, masks):
    """(max forest edge count, deterministic witness as vertex sequences)."""
    if not masks:
        return 0, ()
    eset = set(masks)
    edge_verts = {em: _verts(em) for em in masks}
    memo = {}

    def h(mask, suf):
        key = (mask, suf)
        val = memo.get(key)
        if val is not None:
            return val
        if suf is None:
            best = 0
            for em in masks:
                if em & mask:
                    continue
                for p in permutations(edge_verts[em]):
                    t = 1 + h(mask | em, p[1:])
                    if t > best:
                        best = t
        else:
            best = h(mask, None)
            sb = 0
            for w in suf:
                sb |= 1 << w
            for u in range(n):
                bu = 1 << u
                if mask & bu or (sb | bu) not in eset:
                    continue
                t = 1 + h(mask | bu, (suf + (u,))[1:])
                if t > best:
                    best = t
        memo[key] = best
        return best

    total = h(0, None)
    if total == 0:
        return 0, ()

    paths = []
    mask = 0
    rem = total
    while rem > 0:
        # new path: lex-smallest ordered start window that keeps the optimum
        start = None
        for p in sorted(
            p
            for em in masks
            if not em & mask
            for p in permutations(edge_verts[em])
        ):
            em = 0
            for w in p:
                em |= 1 << w
            if 1 + h(mask | em, p[1:]) == rem:
                start = p
                break
        assert start is not None, "forest reconstruction lost the optimum"
        seq = list(start)
        for w in start:
            mask |= 1 << w
        suf = start[1:]
        rem -= 1
        while True:
            # extend with the smallest vertex that keeps the optimum
            sb = 0
            for w in suf:
                sb |= 1 << w
            nxt = None
            for u in range(n):
                bu = 1 << u
                if mask & bu or (sb | bu) not in eset:
                    continue
                if 1 + h(mask | bu, (suf + (u,))[1:]) == rem:
                    nxt = u
                    break
            if nxt is None:
                break
            seq.append(nxt)
            mask |= 1 << nxt
            suf = (suf + (nxt,))[1:]
            rem -= 1
        paths.append(tuple(seq))
    return total, tuple(paths)


def forest_at_least(n, r, masks, k):
    """True iff some tight linear forest has >= k edges. Early exit.

    Dominance memo: a state revisited with no more edges placed than
    before cannot succeed where the earlier visit failed.
    """
    if k <= 0:
        return True
    if not masks:
        return False
    eset = set(masks)
    edge_verts = {em: _verts(em) for em in masks}
    seen = {}

    def rec(mask, suf, cur):
        if cur >= k:
            return True
        free = n - mask.bit_count()
        # an open path gains <= 1 edge per fresh vertex; a new path pays
        # r-1 vertices up front
        pot = free if suf is not None else free - (r - 1)
        if pot < 0:
            pot = 0
        if cur + pot < k:
            return False
        key = (mask, suf)
        prev = seen.get(key)
        if prev is not None and prev >= cur:
            return False
        seen[key] = cur
        if suf is None:
            for em in masks:
                if em & mask:
                    continue
                for p in permutations(edge_verts[em]):
                    if rec(mask | em, p[1:], cur + 1):
                        return True
        else:
            sb = 0
            for w in suf:
                sb |= 1 << w
            for u in range(n):
                bu = 1 << u
                if mask & bu or (sb | bu) not in eset:
                    continue
                if rec(mask | bu, (suf + (u,))[1:], cur + 1):
                    return True
            if rec(mask, None, cur):
                return True
        return False

    return rec(0, None, 0)


# --- Turan search tasks -------------------------------------------------
#
# One task = one decision prefix over the lex-ordered candidate edges.
# Phase 1 maximizes edge count over free graphs in the subtree; phase 2
# re-walks the subtree collecting every free graph with exactly v* edges.
# Node counts are part of the contract: both lanes count dfs entries.


def _still_free(n, r, edge_masks, k, target):
    if target == TARGET_FOREST:
        return not forest_at_least(n, r, edge_masks, k)
    return not nu_at_least(n, r, edge_masks, k + 1)


def turan_phase1(n, r, cand, prefix, k, target, seed_bound):
    """(best edge count in this subtree or seed_bound, nodes expanded)."""
    m = len(cand)
    cur_masks = [cand[i] for i, d in enumerate(prefix) if d]
    best = seed_bound
    nodes = 0

    def dfs(i, cur):
        nonlocal best, nodes
        nodes += 1
        if cur + (m - i) <= best:
            return
        if i == m:
            best = cur
            return
        cur_masks.append(cand[i])
        if _still_free(n, r, tuple(cur_masks), k, target):
            dfs(i + 1, cur + 1)
        cur_masks.pop()
        dfs(i + 1, cur)

    dfs(len(prefix), len(cur_masks))
    return best, nodes


class _Stop(Exception):
    pass


def turan_phase2(n, r, cand, prefix, k, target, value, labeled_cap):
    """(labeled witnesses with exactly `value` edges, complete flag, nodes)."""
    m = len(cand)
    cur_masks = [cand[i] for i, d in enumerate(prefix) if d]
    witnesses = []
    nodes = 0

    def dfs(i, cur):
        nonlocal nodes
        nodes += 1
        if cur == value:
            witnesses.append(tuple(cur_masks))
            if len(witnesses) >= labeled_cap:
                raise _Stop
            return
        if cur + (m - i) < value:
            return
        if i == m:
            return
        cur_masks.append(cand[i])
        if _still_free(n, r, tuple(cur_masks), k, target):
            dfs(i + 1, cur + 1)
        cur_masks.pop()
        dfs(i + 1, cur)

    complete = True
    try:
        dfs(len(prefix), len(cur_masks))
    except _Stop:
        complete = False
    return witnesses, complete, nodes
