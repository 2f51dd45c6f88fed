"""Pure-Python implementations of the search kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature and
bit-identical results; :mod:`directed_ramsey.kernels` picks one at import.

Tournaments are passed as a sequence of ``n`` integer bit-rows: bit ``j`` of
row ``i`` set means the edge ``i -> j``. Partial tournaments use the same
layout with some pairs missing in both directions.
"""

MASK64 = (1 << 64) - 1
HASH_SEED = 0x9E3779B97F4A7C15
HASH_MULT = 0x100000001B3

BACKEND = "python"


def _in_rows(rows, n):
    full = (1 << n) - 1
    return [full & ~rows[i] & ~(1 << i) for i in range(n)]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- transitive subtournaments ----------------------------------------------

def _chain_search(rows, n, target, universe):
    """Longest dominance chain inside ``universe``; stops once ``target`` is hit."""
    best = [0]
    best_chain = [()]
    chain = []

    def dfs(cand, depth):
        if depth > best[0]:
            best[0] = depth
            best_chain[0] = tuple(chain)
            if target and depth >= target:
                return True
        if depth + cand.bit_count() <= best[0]:
            return False
        # Widest continuation first: long chains are found early, which
        # tightens the bound for the remaining branches.
        order = sorted(_bits(cand), key=lambda v: -(cand & rows[v]).bit_count())
        for v in order:
            nxt = cand & rows[v]
            if depth + 1 + nxt.bit_count() <= best[0]:
                continue
            chain.append(v)
            if dfs(nxt, depth + 1):
                return True
            chain.pop()
        return False

    dfs(universe, 0)
    return best[0], best_chain[0]


def max_transitive(rows, n, target=0):
    """Size of the largest transitive subtournament (early exit at ``target``)."""
    return _chain_search(rows, n, target, (1 << n) - 1)[0]


def transitive_witness(rows, n, k):
    """Vertices of some TT_k in dominance order, or ``None``."""
    size, chain = _chain_search(rows, n, k, (1 << n) - 1)
    return chain[:k] if size >= k else None


# -- subtournament embedding ---------------------------------------------------

def _pattern_order(s_rows, sn):
    # Greedy connectivity order: each next pattern vertex is the one with the
    # most constraints from already placed vertices (all are adjacent), so use
    # degree extremes first; they prune hardest.
    outdeg = [r.bit_count() for r in s_rows]
    return sorted(range(sn), key=lambda v: (-abs(2 * outdeg[v] - (sn - 1)), v))


def embed(t_rows, tn, s_rows, sn):
    """Map pattern vertex -> host vertex for an induced copy, or ``None``."""
    if sn > tn:
        return None
    if sn == 0:
        return ()
    t_in = _in_rows(t_rows, tn)
    t_out_deg = [r.bit_count() for r in t_rows]
    s_out_deg = [r.bit_count() for r in s_rows]
    order = _pattern_order(s_rows, sn)
    image = [-1] * sn
    full = (1 << tn) - 1

    def dfs(pos, used):
        if pos == sn:
            return True
        s = order[pos]
        cand = full & ~used
        for q in range(pos):
            p = order[q]
            if (s_rows[p] >> s) & 1:
                cand &= t_rows[image[p]]
            else:
                cand &= t_in[image[p]]
            if not cand:
                return False
        need_out = s_out_deg[s]
        need_in = sn - 1 - need_out
        for w in _bits(cand):
            if t_out_deg[w] < need_out or tn - 1 - t_out_deg[w] < need_in:
                continue
            image[s] = w
            if dfs(pos + 1, used | (1 << w)):
                return True
        image[s] = -1
        return False

    if dfs(0, 0):
        return tuple(image)
    return None


# -- propagation over partial tournaments -----------------------------------

def _creates_tt(out, inn, i, j, k):
    """Would adding ``i -> j`` complete a TT_k whose other edges are all set?"""
    before = inn[i] & inn[j]
    between = out[i] & inn[j]
    after = out[i] & out[j]
    # phase 0: picking from `before`, then i; phase 1: `between`, then j;
    # phase 2: anything left in the running candidate set.

    def dfs(cand, depth, phase):
        if depth >= k:
            return True
        if phase == 2:
            if depth + cand.bit_count() < k:
                return False
            for v in _bits(cand):
                if dfs(cand & out[v], depth + 1, 2):
                    return True
            return False
        if depth + cand.bit_count() + (2 - phase) < k:
            return False
        if phase == 0:
            for v in _bits(cand & before):
                if dfs(cand & out[v], depth + 1, 0):
                    return True
            return dfs(cand & out[i], depth + 1, 1)
        for v in _bits(cand & between):
            if dfs(cand & out[v], depth + 1, 1):
                return True
        return dfs(cand & out[j], depth + 1, 2)

    return dfs(before | between | after, 0, 0)


def propagate(out_known, n, k):
    """Fixpoint of the TT_k-avoidance forcing rule.

    Returns the extended row list, or ``None`` on contradiction (a set TT_k,
    or an unset pair where both orientations would complete one).
    """
    out = list(out_known)
    if _chain_search(out, n, k, (1 << n) - 1)[0] >= k:
        return None
    inn = [0] * n
    for i in range(n):
        for j in _bits(out[i]):
            inn[j] |= 1 << i
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                if (out[i] >> j) & 1 or (out[j] >> i) & 1:
                    continue
                fwd = _creates_tt(out, inn, i, j, k)
                bwd = _creates_tt(out, inn, j, i, k)
                if fwd and bwd:
                    return None
                if fwd:
                    out[j] |= 1 << i
                    inn[i] |= 1 << j
                    changed = True
                elif bwd:
                    out[i] |= 1 << j
                    inn[j] |= 1 << i
                    changed = True
    return out


def complete(out_known, n, k, pairs, limit=0):
    """All TT_k-free completions of the listed unset ``pairs``.

    Pairs are decided in the given order, each branch followed by
    :func:`propagate`. Pairs outside ``pairs`` may be fixed by propagation but
    are never branched on.
    """
    results = []
    start = propagate(out_known, n, k)
    if start is None:
        return results

    def dfs(state, idx):
        while idx < len(pairs):
            i, j = pairs[idx]
            if not ((state[i] >> j) & 1 or (state[j] >> i) & 1):
                break
            idx += 1
        else:
            results.append(state)
            return limit and len(results) >= limit
        i, j = pairs[idx]
        for a, b in ((i, j), (j, i)):
            trial = list(state)
            trial[a] |= 1 << b
            nxt = propagate(trial, n, k)
            if nxt is not None and dfs(nxt, idx + 1):
                return True
        return False

    dfs(start, 0)
    return results


# -- canonical labeling --------------------------------------------------------

def _refine(rows, cells, trace):
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            keyed = []
            for v in cell:
                h = HASH_SEED
                r = rows[v]
                for m in masks:
                    h = ((h * HASH_MULT) ^ (r & m).bit_count()) & MASK64
                keyed.append((h, v))
            keyed.sort()
            groups = []
            last = None
            for h, v in keyed:
                if h != last:
                    groups.append((h, []))
                    last = h
                groups[-1][1].append(v)
            if len(groups) > 1:
                split = True
                for h, members in groups:
                    trace.append(h)
                    trace.append(len(members))
            new_cells.extend(members for _, members in groups)
        cells = new_cells
        if not split:
            return cells


def _relabel(rows, order):
    pos = [0] * len(order)
    for p, v in enumerate(order):
        pos[v] = p
    out = []
    for v in order:
        r = 0
        for j in _bits(rows[v]):
            r |= 1 << pos[j]
        out.append(r)
    return out


def canonical_labeling(rows, n):
    """Return ``(canonical_rows, order)``; ``order[p]`` is the source vertex at p.

    Individualization/refinement search. The result minimizes the pair
    (refinement trace, relabeled rows) over every leaf of the search tree,
    which makes it independent of the input labeling.
    """
    best = [None, None, None]  # trace, rows, order

    def search(cells, trace):
        bt = best[0]
        if bt is not None:
            head = bt[:len(trace)]
            if trace > head:
                return
        if len(cells) == n:
            order = [c[0] for c in cells]
            relabeled = _relabel(rows, order)
            if bt is None or (trace, relabeled) < (bt, best[1]):
                best[0] = list(trace)
                best[1] = relabeled
                best[2] = order
            return
        target = -1
        size = n + 1
        for idx, cell in enumerate(cells):
            if 1 < len(cell) < size:
                size = len(cell)
                target = idx
        for v in sorted(cells[target]):
            rest = [w for w in cells[target] if w != v]
            split = cells[:target] + [[v], rest] + cells[target + 1:]
            sub = list(trace)
            sub.append(target)
            refined = _refine(rows, split, sub)
            search(refined, sub)

    root_trace = []
    root = _refine(rows, [list(range(n))], root_trace)
    search(root, root_trace)
    return best[1], best[2]
