# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels.

Mirror of ``_pykernels``: same signatures, same search orders, same results.
Bit-rows live in fixed ``uint64_t[64]`` arrays, so ``n <= 64``.
"""

from libc.stdint cimport uint64_t
from libc.string cimport memcpy
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND = "cython"

DEF MAXN = 64
DEF MAXTRACE = 640

cdef uint64_t HASH_SEED = 0x9E3779B97F4A7C15ULL
cdef uint64_t HASH_MULT = 0x100000001B3ULL


cdef inline int popc(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef inline uint64_t full_mask(int n) noexcept nogil:
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFFULL
    return ((<uint64_t>1) << n) - 1


cdef int load_rows(object py_rows, int n, uint64_t* rows) except -1:
    cdef int i
    if n < 0 or n > MAXN:
        raise ValueError("order must be between 0 and 64")
    for i in range(n):
        rows[i] = <uint64_t>py_rows[i]
    return 0


# -- transitive subtournaments ----------------------------------------------

cdef struct ChainCtx:
    uint64_t rows[MAXN]
    int best
    int target
    int chain[MAXN]
    int best_chain[MAXN]


cdef bint chain_dfs(ChainCtx* c, uint64_t cand, int depth) noexcept nogil:
    cdef int verts[MAXN]
    cdef int widths[MAXN]
    cdef int m = 0, a, b, v, w
    cdef uint64_t rest, nxt
    if depth > c.best:
        c.best = depth
        memcpy(c.best_chain, c.chain, depth * sizeof(int))
        if c.target and depth >= c.target:
            return True
    if depth + popc(cand) <= c.best:
        return False
    rest = cand
    while rest:
        v = lowbit(rest)
        rest &= rest - 1
        w = popc(cand & c.rows[v])
        # stable insertion, widest first
        a = m
        while a > 0 and widths[a - 1] < w:
            verts[a] = verts[a - 1]
            widths[a] = widths[a - 1]
            a -= 1
        verts[a] = v
        widths[a] = w
        m += 1
    for b in range(m):
        v = verts[b]
        nxt = cand & c.rows[v]
        if depth + 1 + popc(nxt) <= c.best:
            continue
        c.chain[depth] = v
        if chain_dfs(c, nxt, depth + 1):
            return True
    return False


cdef int run_chain(ChainCtx* c, int n, int target) noexcept nogil:
    c.best = 0
    c.target = target
    chain_dfs(c, full_mask(n), 0)
    return c.best


def max_transitive(rows, int n, int target=0):
    cdef ChainCtx c
    load_rows(rows, n, c.rows)
    with nogil:
        run_chain(&c, n, target)
    return c.best


def transitive_witness(rows, int n, int k):
    cdef ChainCtx c
    cdef int i
    load_rows(rows, n, c.rows)
    with nogil:
        run_chain(&c, n, k)
    if c.best < k:
        return None
    return tuple([c.best_chain[i] for i in range(k)])


# -- subtournament embedding ---------------------------------------------------

cdef struct EmbedCtx:
    uint64_t t_out[MAXN]
    uint64_t t_in[MAXN]
    uint64_t s_rows[MAXN]
    int t_out_deg[MAXN]
    int s_out_deg[MAXN]
    int order[MAXN]
    int image[MAXN]
    int tn
    int sn


cdef bint embed_dfs(EmbedCtx* e, int pos, uint64_t used) noexcept nogil:
    cdef int s, q, p, w, need_out, need_in
    cdef uint64_t cand
    if pos == e.sn:
        return True
    s = e.order[pos]
    cand = full_mask(e.tn) & ~used
    for q in range(pos):
        p = e.order[q]
        if (e.s_rows[p] >> s) & 1:
            cand &= e.t_out[e.image[p]]
        else:
            cand &= e.t_in[e.image[p]]
        if not cand:
            return False
    need_out = e.s_out_deg[s]
    need_in = e.sn - 1 - need_out
    while cand:
        w = lowbit(cand)
        cand &= cand - 1
        if e.t_out_deg[w] < need_out or e.tn - 1 - e.t_out_deg[w] < need_in:
            continue
        e.image[s] = w
        if embed_dfs(e, pos + 1, used | ((<uint64_t>1) << w)):
            return True
    e.image[s] = -1
    return False


def embed(t_rows, int tn, s_rows, int sn):
    cdef EmbedCtx e
    cdef int i, a, key, v
    cdef int keys[MAXN]
    cdef bint found
    if sn > tn:
        return None
    if sn == 0:
        return ()
    load_rows(t_rows, tn, e.t_out)
    load_rows(s_rows, sn, e.s_rows)
    e.tn = tn
    e.sn = sn
    for i in range(tn):
        e.t_in[i] = full_mask(tn) & ~e.t_out[i] & ~((<uint64_t>1) << i)
        e.t_out_deg[i] = popc(e.t_out[i])
    for i in range(sn):
        e.s_out_deg[i] = popc(e.s_rows[i])
        e.image[i] = -1
    # order by (-|2*outdeg - (sn-1)|, v), stable insertion sort
    for v in range(sn):
        key = -abs(2 * e.s_out_deg[v] - (sn - 1))
        a = v
        while a > 0 and keys[a - 1] > key:
            keys[a] = keys[a - 1]
            e.order[a] = e.order[a - 1]
            a -= 1
        keys[a] = key
        e.order[a] = v
    with nogil:
        found = embed_dfs(&e, 0, 0)
    if found:
        return tuple([e.image[i] for i in range(sn)])
    return None


# -- propagation over partial tournaments -----------------------------------

cdef struct PropCtx:
    uint64_t out[MAXN]
    uint64_t inn[MAXN]
    int n
    int k


cdef bint through_dfs(PropCtx* p, int i, int j, uint64_t before, uint64_t between,
                      uint64_t cand, int depth, int phase) noexcept nogil:
    cdef uint64_t rest
    cdef int v
    if depth >= p.k:
        return True
    if phase == 2:
        if depth + popc(cand) < p.k:
            return False
        rest = cand
        while rest:
            v = lowbit(rest)
            rest &= rest - 1
            if through_dfs(p, i, j, before, between, cand & p.out[v], depth + 1, 2):
                return True
        return False
    if depth + popc(cand) + (2 - phase) < p.k:
        return False
    if phase == 0:
        rest = cand & before
        while rest:
            v = lowbit(rest)
            rest &= rest - 1
            if through_dfs(p, i, j, before, between, cand & p.out[v], depth + 1, 0):
                return True
        return through_dfs(p, i, j, before, between, cand & p.out[i], depth + 1, 1)
    rest = cand & between
    while rest:
        v = lowbit(rest)
        rest &= rest - 1
        if through_dfs(p, i, j, before, between, cand & p.out[v], depth + 1, 1):
            return True
    return through_dfs(p, i, j, before, between, cand & p.out[j], depth + 1, 2)


cdef inline bint creates_tt(PropCtx* p, int i, int j) noexcept nogil:
    cdef uint64_t before = p.inn[i] & p.inn[j]
    cdef uint64_t between = p.out[i] & p.inn[j]
    cdef uint64_t after = p.out[i] & p.out[j]
    return through_dfs(p, i, j, before, between, before | between | after, 0, 0)


cdef bint has_set_tt(PropCtx* p) noexcept nogil:
    cdef ChainCtx c
    memcpy(c.rows, p.out, p.n * sizeof(uint64_t))
    return run_chain(&c, p.n, p.k) >= p.k


cdef bint prop_fix(PropCtx* p) noexcept nogil:
    """In-place fixpoint; False on contradiction."""
    cdef int i, j
    cdef bint changed = True, fwd, bwd
    cdef uint64_t bit_i, bit_j
    if has_set_tt(p):
        return False
    for i in range(p.n):
        p.inn[i] = 0
    for i in range(p.n):
        for j in range(p.n):
            if (p.out[i] >> j) & 1:
                p.inn[j] |= (<uint64_t>1) << i
    while changed:
        changed = False
        for i in range(p.n):
            bit_i = (<uint64_t>1) << i
            for j in range(i + 1, p.n):
                bit_j = (<uint64_t>1) << j
                if (p.out[i] & bit_j) or (p.out[j] & bit_i):
                    continue
                fwd = creates_tt(p, i, j)
                bwd = creates_tt(p, j, i)
                if fwd and bwd:
                    return False
                if fwd:
                    p.out[j] |= bit_i
                    p.inn[i] |= bit_j
                    changed = True
                elif bwd:
                    p.out[i] |= bit_j
                    p.inn[j] |= bit_i
                    changed = True
    return True


def propagate(out_known, int n, int k):
    cdef PropCtx p
    cdef bint ok
    cdef int i
    load_rows(out_known, n, p.out)
    p.n = n
    p.k = k
    with nogil:
        ok = prop_fix(&p)
    if not ok:
        return None
    return [p.out[i] for i in range(n)]


cdef struct CompleteCtx:
    int n
    int k
    int npairs
    int* pi
    int* pj
    long limit
    long found


cdef int complete_dfs(CompleteCtx* c, PropCtx* state, int idx, list results) except -1:
    """Returns 1 when the result limit is reached."""
    cdef PropCtx trial
    cdef int i, j, side, a, b
    while idx < c.npairs:
        i = c.pi[idx]
        j = c.pj[idx]
        if not (((state.out[i] >> j) & 1) or ((state.out[j] >> i) & 1)):
            break
        idx += 1
    if idx >= c.npairs:
        results.append([state.out[a] for a in range(c.n)])
        c.found += 1
        if c.limit and c.found >= c.limit:
            return 1
        return 0
    i = c.pi[idx]
    j = c.pj[idx]
    for side in range(2):
        if side == 0:
            a = i
            b = j
        else:
            a = j
            b = i
        memcpy(trial.out, state.out, c.n * sizeof(uint64_t))
        trial.n = c.n
        trial.k = c.k
        trial.out[a] |= (<uint64_t>1) << b
        if prop_fix(&trial):
            if complete_dfs(c, &trial, idx + 1, results):
                return 1
    return 0


def complete(out_known, int n, int k, pairs, long limit=0):
    cdef PropCtx start
    cdef CompleteCtx c
    cdef list results = []
    cdef int m = len(pairs), t
    load_rows(out_known, n, start.out)
    start.n = n
    start.k = k
    if not prop_fix(&start):
        return results
    c.n = n
    c.k = k
    c.npairs = m
    c.limit = limit
    c.found = 0
    c.pi = <int*>malloc((m + 1) * sizeof(int))
    c.pj = <int*>malloc((m + 1) * sizeof(int))
    try:
        for t in range(m):
            c.pi[t] = pairs[t][0]
            c.pj[t] = pairs[t][1]
        complete_dfs(&c, &start, 0, results)
    finally:
        free(c.pi)
        free(c.pj)
    return results


# -- canonical labeling --------------------------------------------------------

cdef struct Part:
    int lab[MAXN]
    int cstart[MAXN + 1]
    int ncells


cdef struct CanonCtx:
    uint64_t rows[MAXN]
    int n
    bint have_best
    uint64_t best_trace[MAXTRACE]
    int best_len
    uint64_t best_rows[MAXN]
    int best_order[MAXN]


cdef void sort_keys(uint64_t* keys, int* verts, int m) noexcept nogil:
    cdef int a, b, v
    cdef uint64_t h
    for a in range(1, m):
        h = keys[a]
        v = verts[a]
        b = a
        while b > 0 and (keys[b - 1] > h or (keys[b - 1] == h and verts[b - 1] > v)):
            keys[b] = keys[b - 1]
            verts[b] = verts[b - 1]
            b -= 1
        keys[b] = h
        verts[b] = v


cdef int refine(CanonCtx* c, Part* part, uint64_t* trace, int tlen) noexcept nogil:
    cdef uint64_t masks[MAXN]
    cdef uint64_t keys[MAXN]
    cdef int verts[MAXN]
    cdef Part nw
    cdef int ci, a, s, e, m, g, start, cnt
    cdef bint split
    cdef uint64_t h, r
    while True:
        for ci in range(part.ncells):
            masks[ci] = 0
            for a in range(part.cstart[ci], part.cstart[ci + 1]):
                masks[ci] |= (<uint64_t>1) << part.lab[a]
        nw.ncells = 0
        m = 0
        split = False
        for ci in range(part.ncells):
            s = part.cstart[ci]
            e = part.cstart[ci + 1]
            if e - s == 1:
                nw.cstart[nw.ncells] = m
                nw.lab[m] = part.lab[s]
                m += 1
                nw.ncells += 1
                continue
            for a in range(s, e):
                r = c.rows[part.lab[a]]
                h = HASH_SEED
                for g in range(part.ncells):
                    h = (h * HASH_MULT) ^ <uint64_t>popc(r & masks[g])
                keys[a - s] = h
                verts[a - s] = part.lab[a]
            sort_keys(keys, verts, e - s)
            cnt = 1
            for a in range(1, e - s):
                if keys[a] != keys[a - 1]:
                    cnt += 1
            if cnt > 1:
                split = True
            start = 0
            for a in range(e - s):
                if a == 0 or keys[a] != keys[a - 1]:
                    nw.cstart[nw.ncells] = m
                    nw.ncells += 1
                    start = a
                nw.lab[m] = verts[a]
                m += 1
                if cnt > 1 and (a == e - s - 1 or keys[a + 1] != keys[a]):
                    trace[tlen] = keys[a]
                    trace[tlen + 1] = <uint64_t>(a - start + 1)
                    tlen += 2
        nw.cstart[nw.ncells] = m
        memcpy(part, &nw, sizeof(Part))
        if not split:
            return tlen


cdef int cmp_trace(uint64_t* a, int la, uint64_t* b, int lb) noexcept nogil:
    cdef int i, m = la if la < lb else lb
    for i in range(m):
        if a[i] < b[i]:
            return -1
        if a[i] > b[i]:
            return 1
    if la < lb:
        return -1
    if la > lb:
        return 1
    return 0


cdef void canon_search(CanonCtx* c, Part* part, uint64_t* trace, int tlen) noexcept nogil:
    cdef int i, m, t, size, a, v, w, s, e, pos_w, cmpv
    cdef int pos[MAXN]
    cdef uint64_t rel[MAXN]
    cdef uint64_t r, rr
    cdef Part child
    cdef int members[MAXN]
    cdef int nmem
    cdef int nt
    if c.have_best:
        m = tlen if tlen < c.best_len else c.best_len
        for i in range(m):
            if trace[i] > c.best_trace[i]:
                return
            if trace[i] < c.best_trace[i]:
                break
        else:
            if tlen > c.best_len:
                return
    if part.ncells == c.n:
        for i in range(c.n):
            pos[part.lab[i]] = i
        for i in range(c.n):
            r = c.rows[part.lab[i]]
            rr = 0
            while r:
                w = lowbit(r)
                r &= r - 1
                rr |= (<uint64_t>1) << pos[w]
            rel[i] = rr
        if c.have_best:
            cmpv = cmp_trace(trace, tlen, c.best_trace, c.best_len)
            if cmpv == 0:
                for i in range(c.n):
                    if rel[i] < c.best_rows[i]:
                        cmpv = -1
                        break
                    if rel[i] > c.best_rows[i]:
                        cmpv = 1
                        break
            if cmpv >= 0:
                return
        c.have_best = True
        memcpy(c.best_trace, trace, tlen * sizeof(uint64_t))
        c.best_len = tlen
        memcpy(c.best_rows, rel, c.n * sizeof(uint64_t))
        memcpy(c.best_order, part.lab, c.n * sizeof(int))
        return
    t = -1
    size = c.n + 1
    for i in range(part.ncells):
        a = part.cstart[i + 1] - part.cstart[i]
        if 1 < a < size:
            size = a
            t = i
    s = part.cstart[t]
    e = part.cstart[t + 1]
    nmem = e - s
    for a in range(nmem):
        members[a] = part.lab[s + a]
    # ascending vertex order
    for a in range(1, nmem):
        v = members[a]
        i = a
        while i > 0 and members[i - 1] > v:
            members[i] = members[i - 1]
            i -= 1
        members[i] = v
    for a in range(nmem):
        v = members[a]
        # child partition: cells[:t] + [v] + [rest in original order] + cells[t+1:]
        child.ncells = 0
        m = 0
        for i in range(part.ncells):
            if i == t:
                child.cstart[child.ncells] = m
                child.lab[m] = v
                m += 1
                child.ncells += 1
                child.cstart[child.ncells] = m
                for w in range(s, e):
                    if part.lab[w] != v:
                        child.lab[m] = part.lab[w]
                        m += 1
                child.ncells += 1
            else:
                child.cstart[child.ncells] = m
                for w in range(part.cstart[i], part.cstart[i + 1]):
                    child.lab[m] = part.lab[w]
                    m += 1
                child.ncells += 1
        child.cstart[child.ncells] = m
        trace[tlen] = <uint64_t>t
        nt = refine(c, &child, trace, tlen + 1)
        canon_search(c, &child, trace, nt)


def canonical_labeling(rows, int n):
    cdef CanonCtx* c = <CanonCtx*>malloc(sizeof(CanonCtx))
    cdef uint64_t* trace = <uint64_t*>malloc(MAXTRACE * MAXN * sizeof(uint64_t))
    cdef Part root
    cdef int i, tlen
    if c == NULL or trace == NULL:
        free(c)
        free(trace)
        raise MemoryError()
    try:
        load_rows(rows, n, c.rows)
        c.n = n
        c.have_best = False
        c.best_len = 0
        root.ncells = 1
        root.cstart[0] = 0
        root.cstart[1] = n
        for i in range(n):
            root.lab[i] = i
        with nogil:
            tlen = refine(c, &root, trace, 0)
            canon_search(c, &root, trace, tlen)
        return ([c.best_rows[i] for i in range(n)], [c.best_order[i] for i in range(n)])
    finally:
        free(c)
        free(trace)
