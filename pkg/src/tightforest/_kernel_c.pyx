# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search kernels.

Mirror of `_kernel_py`: same algorithms, same traversal order, same
witnesses, same node counts. Masks are machine words here, so every entry
point falls back to the pure lane when n exceeds 62 bits.
"""

from itertools import permutations

import array

cimport cython
from cpython cimport array

BACKEND = "c"

TARGET_FOREST = 0
TARGET_MATCHING = 1


cdef inline int _pc(unsigned long long x):
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _verts(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


cdef _fallback():
    from . import _kernel_py
    return _kernel_py


# --- matchings ---------------------------------------------------------


cdef class _Best:
    cdef public long best
    cdef public object payload


cdef void _nu_rec(long long[::1] mk, int m, int n, int r, int i,
                  unsigned long long used, int cur, list sel, _Best box) except *:
    cdef int j, rem, freev, cap
    cdef unsigned long long mj
    if cur > box.best:
        box.best = cur
        box.payload = tuple(sel)
    rem = m - i
    freev = (n - _pc(used)) // r
    cap = rem if rem < freev else freev
    if cur + cap <= box.best:
        return
    for j in range(i, m):
        mj = <unsigned long long> mk[j]
        if mj & used:
            continue
        sel.append(mk[j])
        _nu_rec(mk, m, n, r, j + 1, used | mj, cur + 1, sel, box)
        sel.pop()


def nu_search(n, r, masks):
    """(matching number, lex-first maximum matching as masks)."""
    if n > 62:
        return _fallback().nu_search(n, r, masks)
    if not masks:
        return 0, ()
    cdef array.array am = array.array("q", masks)
    cdef long long[::1] mk = am
    box = _Best()
    box.best = 0
    box.payload = ()
    _nu_rec(mk, len(masks), n, r, 0, 0, 0, [], box)
    return box.best, box.payload


cdef bint _nu_al_rec(long long[::1] mk, int m, int n, int r, int k, int i,
                     unsigned long long used, int cur):
    cdef int j, rem, freev, cap
    cdef unsigned long long mj
    if cur >= k:
        return True
    rem = m - i
    freev = (n - _pc(used)) // r
    cap = rem if rem < freev else freev
    if cur + cap < k:
        return False
    for j in range(i, m):
        mj = <unsigned long long> mk[j]
        if mj & used:
            continue
        if _nu_al_rec(mk, m, n, r, k, j + 1, used | mj, cur + 1):
            return True
    return False


def nu_at_least(n, r, masks, k):
    """True iff some k pairwise disjoint edges exist. Early exit."""
    if k <= 0:
        return True
    if n > 62:
        return _fallback().nu_at_least(n, r, masks, k)
    if not masks:
        return False
    cdef array.array am = array.array("q", masks)
    cdef long long[::1] mk = am
    return _nu_al_rec(mk, len(masks), n, r, k, 0, 0, 0)


# --- tight paths -------------------------------------------------------


def _sufbits(suf):
    b = 0
    for w in suf:
        b |= 1 << w
    return b


cdef long _path_g(unsigned long long mask, tuple suf, dict memo, set eset, int n):
    cdef long best = 0, t
    cdef unsigned long long sb = 0, bu
    cdef int u
    key = (mask, suf)
    val = memo.get(key)
    if val is not None:
        return <long> val
    for w in suf:
        sb |= (<unsigned long long> 1) << <int> w
    for u in range(n):
        bu = (<unsigned long long> 1) << u
        if mask & bu:
            continue
        if (sb | bu) not in eset:
            continue
        t = 1 + _path_g(mask | bu, suf[1:] + (u,), memo, eset, n)
        if t > best:
            best = t
    memo[key] = best
    return best


def path_search(n, r, masks):
    """(max tight-path edge count, lex-smallest optimal vertex sequence)."""
    if not masks:
        return 0, ()
    if n > 62:
        return _fallback().path_search(n, r, masks)
    cdef set eset = set(masks)
    cdef dict memo = {}
    cdef long best = 0, t

    for em in masks:
        for p in permutations(_verts(em)):
            t = 1 + _path_g(em, p[1:], memo, eset, n)
            if t > best:
                best = t

    starts = sorted(p for em in masks for p in permutations(_verts(em)))
    seq = mask = suf = None
    for p in starts:
        em = _sufbits(p)
        if 1 + _path_g(em, p[1:], memo, eset, n) == best:
            seq = list(p)
            mask, suf = em, p[1:]
            break
    rem = best - 1
    while rem > 0:
        sb = _sufbits(suf)
        found = False
        for u in range(n):
            bu = 1 << u
            if mask & bu or (sb | bu) not in eset:
                continue
            ns = (suf + (u,))[1:]
            if _path_g(mask | bu, ns, memo, eset, n) == rem - 1:
                seq.append(u)
                mask |= bu
                suf = ns
                rem -= 1
                found = True
                break
        if not found:
            raise AssertionError("path reconstruction lost the optimum")
    return best, tuple(seq)


# --- tight linear forests ----------------------------------------------


cdef long _forest_h(unsigned long long mask, object suf, dict memo, set eset,
                    tuple masks, dict edge_verts, int n):
    cdef long best = 0, t
    cdef unsigned long long sb, bu, emw
    cdef int u
    key = (mask, suf)
    val = memo.get(key)
    if val is not None:
        return <long> val
    if suf is None:
        for em in masks:
            emw = <unsigned long long> em
            if emw & mask:
                continue
            for p in permutations(edge_verts[em]):
                t = 1 + _forest_h(mask | emw, (<tuple> p)[1:], memo, eset,
                                  masks, edge_verts, n)
                if t > best:
                    best = t
    else:
        best = _forest_h(mask, None, memo, eset, masks, edge_verts, n)
        sb = 0
        for w in <tuple> suf:
            sb |= (<unsigned long long> 1) << <int> w
        for u in range(n):
            bu = (<unsigned long long> 1) << u
            if mask & bu:
                continue
            if (sb | bu) not in eset:
                continue
            t = 1 + _forest_h(mask | bu, (<tuple> suf)[1:] + (u,), memo, eset,
                              masks, edge_verts, n)
            if t > best:
                best = t
    memo[key] = best
    return best


def forest_search(n, r, masks):
    """(max forest edge count, deterministic witness as vertex sequences)."""
    if not masks:
        return 0, ()
    if n > 62:
        return _fallback().forest_search(n, r, masks)
    cdef set eset = set(masks)
    cdef dict memo = {}
    edge_verts = {em: _verts(em) for em in masks}
    tmasks = tuple(masks)

    total = _forest_h(0, None, memo, eset, tmasks, edge_verts, n)
    if total == 0:
        return 0, ()

    paths = []
    mask = 0
    rem = total
    while rem > 0:
        start = None
        for p in sorted(
            p
            for em in tmasks
            if not em & mask
            for p in permutations(edge_verts[em])
        ):
            em = 0
            for w in p:
                em |= 1 << w
            if 1 + _forest_h(mask | em, p[1:], memo, eset, tmasks, edge_verts, n) == rem:
                start = p
                break
        assert start is not None, "forest reconstruction lost the optimum"
        seq = list(start)
        for w in start:
            mask |= 1 << w
        suf = start[1:]
        rem -= 1
        while True:
            sb = 0
            for w in suf:
                sb |= 1 << w
            nxt = None
            for u in range(n):
                bu = 1 << u
                if mask & bu or (sb | bu) not in eset:
                    continue
                if 1 + _forest_h(mask | bu, (suf + (u,))[1:], memo, eset,
                                 tmasks, edge_verts, n) == rem:
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


cdef bint _forest_al_rec(unsigned long long mask, object suf, int cur,
                         int n, int r, int k, set eset, tuple masks,
                         dict edge_verts, dict seen):
    cdef int free, pot, u
    cdef unsigned long long sb, bu, emw
    if cur >= k:
        return True
    free = n - _pc(mask)
    # an open path gains <= 1 edge per fresh vertex; a new path pays
    # r-1 vertices up front
    pot = free if suf is not None else free - (r - 1)
    if pot < 0:
        pot = 0
    if cur + pot < k:
        return False
    key = (mask, suf)
    prev = seen.get(key)
    if prev is not None and <int> prev >= cur:
        return False
    seen[key] = cur
    if suf is None:
        for em in masks:
            emw = <unsigned long long> em
            if emw & mask:
                continue
            for p in permutations(edge_verts[em]):
                if _forest_al_rec(mask | emw, (<tuple> p)[1:], cur + 1,
                                  n, r, k, eset, masks, edge_verts, seen):
                    return True
    else:
        sb = 0
        for w in <tuple> suf:
            sb |= (<unsigned long long> 1) << <int> w
        for u in range(n):
            bu = (<unsigned long long> 1) << u
            if mask & bu:
                continue
            if (sb | bu) not in eset:
                continue
            if _forest_al_rec(mask | bu, (<tuple> suf)[1:] + (u,), cur + 1,
                              n, r, k, eset, masks, edge_verts, seen):
                return True
        if _forest_al_rec(mask, None, cur, n, r, k, eset, masks, edge_verts, seen):
            return True
    return False


def forest_at_least(n, r, masks, k):
    """True iff some tight linear forest has >= k edges. Early exit.

    Dominance memo: a state revisited with no more edges placed than
    before cannot succeed where the earlier visit failed.
    """
    if k <= 0:
        return True
    if not masks:
        return False
    if n > 62:
        return _fallback().forest_at_least(n, r, masks, k)
    cdef set eset = set(masks)
    edge_verts = {em: _verts(em) for em in masks}
    cdef dict seen = {}
    return _forest_al_rec(0, None, 0, n, r, k, eset, tuple(masks), edge_verts, seen)


# --- Turan search tasks -------------------------------------------------


cdef bint _still_free(int n, int r, tuple edge_masks, int k, int target):
    if target == TARGET_FOREST:
        return not forest_at_least(n, r, edge_masks, k)
    return not nu_at_least(n, r, edge_masks, k + 1)


cdef class _Phase1:
    cdef public long best
    cdef public long nodes


cdef void _p1_rec(tuple cand, int m, int n, int r, int k, int target,
                  int i, int cur, list cur_masks, _Phase1 st) except *:
    st.nodes += 1
    if cur + (m - i) <= st.best:
        return
    if i == m:
        st.best = cur
        return
    cur_masks.append(cand[i])
    if _still_free(n, r, tuple(cur_masks), k, target):
        _p1_rec(cand, m, n, r, k, target, i + 1, cur + 1, cur_masks, st)
    cur_masks.pop()
    _p1_rec(cand, m, n, r, k, target, i + 1, cur, cur_masks, st)


def turan_phase1(n, r, cand, prefix, k, target, seed_bound):
    """(best edge count in this subtree or seed_bound, nodes expanded)."""
    if n > 62:
        return _fallback().turan_phase1(n, r, cand, prefix, k, target, seed_bound)
    cdef tuple tcand = tuple(cand)
    cur_masks = [tcand[i] for i, d in enumerate(prefix) if d]
    st = _Phase1()
    st.best = seed_bound
    st.nodes = 0
    _p1_rec(tcand, len(tcand), n, r, k, target, len(prefix), len(cur_masks),
            cur_masks, st)
    return st.best, st.nodes


class _Stop(Exception):
    pass


cdef class _Phase2:
    cdef public list witnesses
    cdef public long nodes


cdef void _p2_rec(tuple cand, int m, int n, int r, int k, int target,
                  int value, int labeled_cap, int i, int cur,
                  list cur_masks, _Phase2 st) except *:
    st.nodes += 1
    if cur == value:
        st.witnesses.append(tuple(cur_masks))
        if len(st.witnesses) >= labeled_cap:
            raise _Stop
        return
    if cur + (m - i) < value:
        return
    if i == m:
        return
    cur_masks.append(cand[i])
    if _still_free(n, r, tuple(cur_masks), k, target):
        _p2_rec(cand, m, n, r, k, target, value, labeled_cap, i + 1, cur + 1,
                cur_masks, st)
    cur_masks.pop()
    _p2_rec(cand, m, n, r, k, target, value, labeled_cap, i + 1, cur,
            cur_masks, st)


def turan_phase2(n, r, cand, prefix, k, target, value, labeled_cap):
    """(labeled witnesses with exactly `value` edges, complete flag, nodes)."""
    if n > 62:
        return _fallback().turan_phase2(n, r, cand, prefix, k, target, value, labeled_cap)
    cdef tuple tcand = tuple(cand)
    cur_masks = [tcand[i] for i, d in enumerate(prefix) if d]
    st = _Phase2()
    st.witnesses = []
    st.nodes = 0
    complete = True
    try:
        _p2_rec(tcand, len(tcand), n, r, k, target, value, labeled_cap,
                len(prefix), len(cur_masks), cur_masks, st)
    except _Stop:
        complete = False
    return st.witnesses, complete, st.nodes
