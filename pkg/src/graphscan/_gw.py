"""Goemans-Williamson moat-growing kernels for prize-collecting Steiner tree.

Growth phase: every node starts as its own cluster with potential equal to its
prize. Active clusters grow moats at unit rate; an edge merges its two end
clusters once the moats accumulated from both sides cover its cost, and a
cluster deactivates once its remaining potential is exhausted. Events live in
a binary heap keyed by (time, kind, id), which also fixes tie-breaking: merges
before deactivations, then lowest id. Cluster boundary edges are kept in
linked lists over per-edge-side slots and rebuilt (dropping internal edges)
whenever a cluster changes state, so edge event times are always scheduled
against current rates.

Pruning phase: strong pruning. For each tree of the merge forest, a rerooting
DP finds the subtree maximizing net worth (total prize minus total edge cost);
the best subtree over all trees is returned.

Everything below is numba-compiled; graphs arrive as flat int64/float64
arrays. Determinism: identical inputs produce identical outputs.
"""
import numpy as np
from numba import njit

KIND_EDGE = 0
KIND_DEACT = 1
_EPS = 1e-12


@njit(cache=True)
def _find(uf, x):
    r = x
    while uf[r] != r:
        r = uf[r]
    while uf[x] != r:
        nxt = uf[x]
        uf[x] = r
        x = nxt
    return r


@njit(cache=True)
def _heap_less(ht, hk, hid, a, b):
    if ht[a] != ht[b]:
        return ht[a] < ht[b]
    if hk[a] != hk[b]:
        return hk[a] < hk[b]
    return hid[a] < hid[b]


@njit(cache=True)
def _hpush(ht, hk, hid, hver, size, t, kind, idv, ver):
    cap = ht.shape[0]
    if size == cap:
        cap2 = 2 * cap
        ht2 = np.empty(cap2, np.float64)
        hk2 = np.empty(cap2, np.int8)
        hid2 = np.empty(cap2, np.int64)
        hver2 = np.empty(cap2, np.int64)
        ht2[:cap] = ht
        hk2[:cap] = hk
        hid2[:cap] = hid
        hver2[:cap] = hver
        ht, hk, hid, hver = ht2, hk2, hid2, hver2
    i = size
    ht[i] = t
    hk[i] = kind
    hid[i] = idv
    hver[i] = ver
    while i > 0:
        p = (i - 1) >> 1
        if _heap_less(ht, hk, hid, i, p):
            ht[i], ht[p] = ht[p], ht[i]
            hk[i], hk[p] = hk[p], hk[i]
            hid[i], hid[p] = hid[p], hid[i]
            hver[i], hver[p] = hver[p], hver[i]
            i = p
        else:
            break
    return ht, hk, hid, hver, size + 1


@njit(cache=True)
def _hpop(ht, hk, hid, hver, size):
    t = ht[0]
    kind = hk[0]
    idv = hid[0]
    ver = hver[0]
    size -= 1
    if size > 0:
        ht[0] = ht[size]
        hk[0] = hk[size]
        hid[0] = hid[size]
        hver[0] = hver[size]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            best = i
            if l < size and _heap_less(ht, hk, hid, l, best):
                best = l
            if r < size and _heap_less(ht, hk, hid, r, best):
                best = r
            if best == i:
                break
            ht[i], ht[best] = ht[best], ht[i]
            hk[i], hk[best] = hk[best], hk[i]
            hid[i], hid[best] = hid[best], hid[i]
            hver[i], hver[best] = hver[best], hver[i]
            i = best
    return t, kind, idv, ver, size


@njit(cache=True)
def _touch(e, t, uf, eu, ev, cost, e_acc, e_last, e_rate, e_ver, r_act):
    """Advance edge e's accumulated moat mass to time t and refresh its rate.

    Returns (schedule, event_time): schedule is True when the edge should get
    a new tightening event. Callers must push with version e_ver[e].
    """
    e_acc[e] += e_rate[e] * (t - e_last[e])
    e_last[e] = t
    e_ver[e] += 1
    a = _find(uf, eu[e])
    b = _find(uf, ev[e])
    if a == b:
        e_rate[e] = 0
        return False, 0.0
    rate = r_act[a] + r_act[b]
    e_rate[e] = rate
    if rate == 0:
        return False, 0.0
    rem = cost[e] - e_acc[e]
    if rem < 0.0:
        rem = 0.0
    return True, t + rem / rate


@njit(cache=True)
def gw_grow(n, eu, ev, cost, prize):
    """Run the moat-growing phase; returns the merge-forest edge ids."""
    m = eu.shape[0]
    ncl = 2 * n
    uf = np.arange(ncl, dtype=np.int64)
    r_def = np.zeros(ncl, np.float64)
    r_last = np.zeros(ncl, np.float64)
    r_act = np.zeros(ncl, np.int8)
    r_ver = np.zeros(ncl, np.int64)
    for i in range(n):
        r_def[i] = prize[i]
        if prize[i] > 0.0:
            r_act[i] = 1
    next_id = n

    head = np.full(ncl, -1, np.int64)
    slots = 2 * m if m > 0 else 1
    nxt = np.full(slots, -1, np.int64)
    for e in range(m):
        s0 = 2 * e
        s1 = s0 + 1
        nxt[s0] = head[eu[e]]
        head[eu[e]] = s0
        nxt[s1] = head[ev[e]]
        head[ev[e]] = s1

    e_acc = np.zeros(m, np.float64)
    e_last = np.zeros(m, np.float64)
    e_rate = np.zeros(m, np.int8)
    e_ver = np.zeros(m, np.int64)

    forest = np.empty(n if n > 0 else 1, np.int64)
    fsize = 0

    cap = 4 * (m + n) + 16
    ht = np.empty(cap, np.float64)
    hk = np.empty(cap, np.int8)
    hid = np.empty(cap, np.int64)
    hver = np.empty(cap, np.int64)
    hsize = 0

    for c in range(n):
        if r_act[c] == 1:
            ht, hk, hid, hver, hsize = _hpush(
                ht, hk, hid, hver, hsize, r_def[c], KIND_DEACT, c, r_ver[c])
    for e in range(m):
        do, tev = _touch(e, 0.0, uf, eu, ev, cost, e_acc, e_last, e_rate, e_ver, r_act)
        if do:
            ht, hk, hid, hver, hsize = _hpush(
                ht, hk, hid, hver, hsize, tev, KIND_EDGE, e, e_ver[e])

    while hsize > 0:
        t, kind, idv, ver, hsize = _hpop(ht, hk, hid, hver, hsize)
        if kind == KIND_EDGE:
            e = idv
            if ver != e_ver[e]:
                continue
            ru = _find(uf, eu[e])
            rv = _find(uf, ev[e])
            if ru == rv:
                continue
            # merge ru and rv into a fresh cluster id
            du = r_def[ru]
            if r_act[ru] == 1:
                du -= t - r_last[ru]
                if du < 0.0:
                    du = 0.0
            dv = r_def[rv]
            if r_act[rv] == 1:
                dv -= t - r_last[rv]
                if dv < 0.0:
                    dv = 0.0
            c = next_id
            next_id += 1
            uf[ru] = c
            uf[rv] = c
            r_def[c] = du + dv
            r_last[c] = t
            r_act[c] = 1 if r_def[c] > _EPS else 0
            r_ver[c] = 0
            forest[fsize] = e
            fsize += 1
            newhead = np.int64(-1)
            for side in range(2):
                src = ru if side == 0 else rv
                s = head[src]
                while s != -1:
                    follow = nxt[s]
                    g = s >> 1
                    a = _find(uf, eu[g])
                    b = _find(uf, ev[g])
                    if a != b:
                        nxt[s] = newhead
                        newhead = s
                        do, tev = _touch(g, t, uf, eu, ev, cost,
                                         e_acc, e_last, e_rate, e_ver, r_act)
                        if do:
                            ht, hk, hid, hver, hsize = _hpush(
                                ht, hk, hid, hver, hsize, tev, KIND_EDGE, g, e_ver[g])
                    s = follow
                head[src] = -1
            head[c] = newhead
            if r_act[c] == 1:
                ht, hk, hid, hver, hsize = _hpush(
                    ht, hk, hid, hver, hsize, t + r_def[c], KIND_DEACT, c, r_ver[c])
        else:
            c = idv
            if uf[c] != c or ver != r_ver[c] or r_act[c] == 0:
                continue
            r_def[c] = 0.0
            r_act[c] = 0
            r_last[c] = t
            r_ver[c] += 1
            s = head[c]
            newhead = np.int64(-1)
            while s != -1:
                follow = nxt[s]
                g = s >> 1
                a = _find(uf, eu[g])
                b = _find(uf, ev[g])
                if a != b:
                    nxt[s] = newhead
                    newhead = s
                    do, tev = _touch(g, t, uf, eu, ev, cost,
                                     e_acc, e_last, e_rate, e_ver, r_act)
                    if do:
                        ht, hk, hid, hver, hsize = _hpush(
                            ht, hk, hid, hver, hsize, tev, KIND_EDGE, g, e_ver[g])
                s = follow
            head[c] = newhead

    return forest[:fsize]


@njit(cache=True)
def gw_strong_prune(n, eu, ev, cost, prize, forest):
    """Best net-worth subtree over the merge forest.

    Returns (nodes, tree_edge_ids). Ties go to the first candidate root in
    scan order (components by smallest node, then BFS order).
    """
    f = forest.shape[0]
    deg = np.zeros(n + 1, np.int64)
    for i in range(f):
        e = forest[i]
        deg[eu[e] + 1] += 1
        deg[ev[e] + 1] += 1
    off = np.zeros(n + 1, np.int64)
    for i in range(n):
        off[i + 1] = off[i] + deg[i + 1]
    half = 2 * f if f > 0 else 1
    adjn = np.empty(half, np.int64)
    adje = np.empty(half, np.int64)
    cur = np.empty(n, np.int64)
    for i in range(n):
        cur[i] = off[i]
    for i in range(f):
        e = forest[i]
        a = eu[e]
        b = ev[e]
        adjn[cur[a]] = b
        adje[cur[a]] = e
        cur[a] += 1
        adjn[cur[b]] = a
        adje[cur[b]] = e
        cur[b] += 1

    visited = np.zeros(n, np.uint8)
    parent = np.full(n, -1, np.int64)
    pedge = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    down = np.zeros(n, np.float64)
    upv = np.zeros(n, np.float64)
    best_total = -1.0
    best_root = 0

    for start in range(n):
        if visited[start] == 1:
            continue
        cnt = 0
        order[cnt] = start
        cnt += 1
        visited[start] = 1
        parent[start] = -1
        pedge[start] = -1
        qi = 0
        while qi < cnt:
            v = order[qi]
            qi += 1
            for j in range(off[v], off[v + 1]):
                u = adjn[j]
                if visited[u] == 0:
                    visited[u] = 1
                    parent[u] = v
                    pedge[u] = adje[j]
                    order[cnt] = u
                    cnt += 1
        # net worth of the best subtree rooted at v, looking away from parent
        for qi in range(cnt - 1, -1, -1):
            v = order[qi]
            d = prize[v]
            for j in range(off[v], off[v + 1]):
                u = adjn[j]
                if parent[u] == v:
                    gain = down[u] - cost[adje[j]]
                    if gain > 0.0:
                        d += gain
            down[v] = d
        # rerooted totals via parent-side values
        for qi in range(cnt):
            v = order[qi]
            if parent[v] == -1:
                upv[v] = 0.0
                tot = down[v]
            else:
                p = parent[v]
                sub = down[v] - cost[pedge[v]]
                if sub < 0.0:
                    sub = 0.0
                ex = down[p] - sub
                add = 0.0
                if parent[p] != -1:
                    g2 = upv[p] - cost[pedge[p]]
                    if g2 > 0.0:
                        add = g2
                upv[v] = ex + add
                g3 = upv[v] - cost[pedge[v]]
                tot = down[v] + (g3 if g3 > 0.0 else 0.0)
            if tot > best_total:
                best_total = tot
                best_root = v

    # reroot at the winner and keep strictly profitable branches
    stamp = np.zeros(n, np.uint8)
    order2 = np.empty(n, np.int64)
    parent2 = np.full(n, -1, np.int64)
    pedge2 = np.full(n, -1, np.int64)
    cnt = 0
    order2[cnt] = best_root
    cnt += 1
    stamp[best_root] = 1
    qi = 0
    while qi < cnt:
        v = order2[qi]
        qi += 1
        for j in range(off[v], off[v + 1]):
            u = adjn[j]
            if stamp[u] == 0:
                stamp[u] = 1
                parent2[u] = v
                pedge2[u] = adje[j]
                order2[cnt] = u
                cnt += 1
    down2 = np.zeros(n, np.float64)
    for qi in range(cnt - 1, -1, -1):
        v = order2[qi]
        d = prize[v]
        for j in range(off[v], off[v + 1]):
            u = adjn[j]
            if parent2[u] == v:
                gain = down2[u] - cost[adje[j]]
                if gain > 0.0:
                    d += gain
        down2[v] = d
    out_nodes = np.empty(cnt, np.int64)
    out_edges = np.empty(cnt, np.int64)
    nn = 0
    ne = 0
    stack = np.empty(cnt if cnt > 0 else 1, np.int64)
    sp = 0
    stack[sp] = best_root
    sp += 1
    while sp > 0:
        sp -= 1
        v = stack[sp]
        out_nodes[nn] = v
        nn += 1
        for j in range(off[v], off[v + 1]):
            u = adjn[j]
            if parent2[u] == v and down2[u] - cost[adje[j]] > 0.0:
                out_edges[ne] = adje[j]
                ne += 1
                stack[sp] = u
                sp += 1
    return out_nodes[:nn], out_edges[:ne]
