"""Pure-Python kernels for the hot inner loops.

The compiled extension (_ckernels) implements the same functions with the
same semantics; tests assert parity.  Masks are plain Python ints, one bit
per vertex.
"""

from __future__ import annotations

BACKEND = "python"

FOUND = 0
EXHAUSTED = 1
BUDGET = 2

MODE_FIRST = 0
MODE_NONZERO = 1
MODE_UNIT = 2
MODE_PLUS1 = 3
MODE_MINUS1 = 4


class _Budget(Exception):
    pass


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _completion_degree(assign, src_faces, src_signs, tgt_index, tgt_signs, n_tgt_faces):
    """Signed bijective-preimage count per target top face; None when the
    per-face sums disagree is impossible for simplicial sphere maps, so a
    disagreement raises."""
    sums = [0] * n_tgt_faces
    k = len(src_faces[0])
    for i, face in enumerate(src_faces):
        im = [assign[v] for v in face]
        dup = False
        inv = 0
        for a in range(k):
            for b in range(a + 1, k):
                if im[a] == im[b]:
                    dup = True
                    break
                if im[a] > im[b]:
                    inv += 1
            if dup:
                break
        if dup:
            continue
        j = tgt_index.get(tuple(sorted(im)))
        if j is None:
            return None  # image spans no target face (explicit targets only)
        s = -1 if inv & 1 else 1
        sums[j] += src_signs[i] * s * tgt_signs[j]
    first = sums[0]
    for s in sums:
        if s != first:
            raise RuntimeError("per-face degree sums disagree; orientation bug")
    return first


def match_maps(
    ns,
    nt,
    adj_types,
    allow_types,
    cand0,
    order,
    preset,
    require_surjective,
    budget,
    mode,
    src_faces=(),
    src_signs=(),
    tgt_faces=(),
    tgt_signs=(),
    tgt_maxface_masks=None,
):
    """Backtracking search for a vertex map subject to per-edge-type mask
    constraints.

    adj_types[t][v] is the type-t neighbourhood of source vertex v;
    allow_types[t][a] is the mask of permitted images for a type-t neighbour
    of a vertex already sent to target a.  cand0 seeds the per-vertex
    candidate masks, order lists the vertices to assign (preset entries fix
    the rest).  Returns (status, assignment | None, nodes)."""
    full_t = (1 << nt) - 1
    assign = list(preset)
    covered = 0
    for v in range(ns):
        if assign[v] >= 0:
            covered |= 1 << assign[v]
    n_order = len(order)
    n_types = len(adj_types)
    tgt_index = {f: i for i, f in enumerate(tgt_faces)}
    nodes = 0
    out = []

    def accept():
        if mode == MODE_FIRST:
            out.append(list(assign))
            return True
        if covered != full_t:
            return False
        if tgt_maxface_masks is not None:
            for face in src_faces:
                m = 0
                for v in face:
                    m |= 1 << assign[v]
                if not any(mm & m == m for mm in tgt_maxface_masks):
                    return False
        d = _completion_degree(assign, src_faces, src_signs, tgt_index, tgt_signs, len(tgt_faces))
        if d is None or d == 0:
            return False
        if mode == MODE_NONZERO or (mode == MODE_UNIT and abs(d) == 1) \
           or (mode == MODE_PLUS1 and d == 1) or (mode == MODE_MINUS1 and d == -1):
            out.append(list(assign))
            return True
        return False

    def rec(depth, cand):
        nonlocal nodes, covered
        if depth == n_order:
            return accept()
        if require_surjective:
            missing = full_t & ~covered
            if missing.bit_count() > n_order - depth:
                return False
            union = covered
            for k in range(depth, n_order):
                union |= cand[order[k]]
            if union | covered != full_t:
                return False
        v = order[depth]
        cm = cand[v]
        while cm:
            low = cm & -cm
            a = low.bit_length() - 1
            cm ^= low
            nodes += 1
            if nodes > budget:
                raise _Budget
            nxt = list(cand)
            dead = False
            for ty in range(n_types):
                allow = allow_types[ty][a]
                for w in _bits(adj_types[ty][v]):
                    if assign[w] < 0 and w != v:
                        nc = nxt[w] & allow
                        if nc == 0:
                            dead = True
                            break
                        nxt[w] = nc
                if dead:
                    break
            if dead:
                continue
            assign[v] = a
            old_covered = covered
            covered |= low
            if rec(depth + 1, nxt):
                return True
            assign[v] = -1
            covered = old_covered
        return False

    try:
        found = rec(0, list(cand0))
    except _Budget:
        return BUDGET, None, nodes
    if found:
        return FOUND, out[0], nodes
    return EXHAUSTED, None, nodes


def nonsquare_edges(n, adj):
    """Edges (i, j), i < j, not contained in any induced 4-cycle."""
    out = []
    for i in range(n):
        upper = adj[i] >> (i + 1)
        base = i + 1
        m = upper
        while m:
            low = m & -m
            j = base + low.bit_length() - 1
            m ^= low
            i_only = adj[i] & ~adj[j] & ~(1 << j)
            j_only = adj[j] & ~adj[i] & ~(1 << i)
            hit = False
            z = j_only
            while z:
                zl = z & -z
                zi = zl.bit_length() - 1
                z ^= zl
                if adj[zi] & i_only:
                    hit = True
                    break
            if not hit:
                out.append((i, j))
    return out
