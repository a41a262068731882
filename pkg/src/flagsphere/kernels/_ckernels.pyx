# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: same semantics (and node-for-node the same search tree)
as pykernels; tests assert exact parity of status, witness and node count."""

from libc.stdint cimport int8_t, int16_t, int64_t, uint32_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memset

BACKEND = "c"

FOUND = 0
EXHAUSTED = 1
BUDGET = 2

MODE_FIRST = 0
MODE_NONZERO = 1
MODE_UNIT = 2
MODE_PLUS1 = 3
MODE_MINUS1 = 4

DEF NMAX = 128
DEF WORDS = 2

cdef inline void int_to_words(object value, uint64_t* out):
    out[0] = <uint64_t> (value & 0xFFFFFFFFFFFFFFFF)
    out[1] = <uint64_t> ((value >> 64) & 0xFFFFFFFFFFFFFFFF)

cdef inline object words_to_int(uint64_t lo, uint64_t hi):
    return (int(hi) << 64) | int(lo)

cdef extern from *:
    """
    static inline int popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int popcount64(uint64_t x) nogil
    int ctz64(uint64_t x) nogil


cdef struct TrailEntry:
    int16_t vertex
    uint64_t lo
    uint64_t hi


cdef class _Searcher:
    cdef int ns, nt, n_types, n_order, mode
    cdef bint require_surjective
    cdef int64_t budget, nodes
    cdef uint64_t full_lo, full_hi
    # per type, per source vertex: adjacency over source ids
    cdef uint64_t* adj  # [type][vertex][word]
    # per type, per target vertex: allowed partner mask over target ids
    cdef uint64_t* allow
    cdef uint64_t* cand  # [vertex][word]
    cdef int16_t* order
    cdef int16_t* assign
    cdef TrailEntry* trail
    cdef int trail_len
    cdef uint64_t covered_lo, covered_hi
    # degree-mode data
    cdef int n_src_faces, n_tgt_faces, face_k
    cdef int16_t* src_faces
    cdef int8_t* src_signs
    cdef uint32_t* tgt_keys      # sorted packed keys
    cdef int16_t* tgt_perm       # original index per sorted slot
    cdef int8_t* tgt_signs
    cdef int64_t* sums
    cdef int n_maxface
    cdef uint64_t* maxface  # [i][word]

    def __cinit__(self):
        self.adj = NULL
        self.allow = NULL
        self.cand = NULL
        self.order = NULL
        self.assign = NULL
        self.trail = NULL
        self.src_faces = NULL
        self.src_signs = NULL
        self.tgt_keys = NULL
        self.tgt_perm = NULL
        self.tgt_signs = NULL
        self.sums = NULL
        self.maxface = NULL

    def __dealloc__(self):
        free(self.adj); free(self.allow); free(self.cand)
        free(self.order); free(self.assign); free(self.trail)
        free(self.src_faces); free(self.src_signs)
        free(self.tgt_keys); free(self.tgt_perm); free(self.tgt_signs)
        free(self.sums); free(self.maxface)

    cdef inline bint accept(self):
        cdef int i, j, k, a, b, lo, hi, mid
        cdef int inv, dup
        cdef uint32_t key
        cdef int16_t im[8]
        cdef int64_t first, s
        cdef uint64_t mlo, mhi
        cdef bint found_sub
        if self.mode == MODE_FIRST:
            return True
        if self.covered_lo != self.full_lo or self.covered_hi != self.full_hi:
            return False
        if self.n_maxface > 0:
            for i in range(self.n_src_faces):
                mlo = 0; mhi = 0
                for k in range(self.face_k):
                    a = self.assign[self.src_faces[i * self.face_k + k]]
                    if a < 64:
                        mlo |= (<uint64_t>1) << a
                    else:
                        mhi |= (<uint64_t>1) << (a - 64)
                found_sub = False
                for j in range(self.n_maxface):
                    if (self.maxface[j*WORDS] & mlo) == mlo and (self.maxface[j*WORDS+1] & mhi) == mhi:
                        found_sub = True
                        break
                if not found_sub:
                    return False
        memset(self.sums, 0, self.n_tgt_faces * sizeof(int64_t))
        for i in range(self.n_src_faces):
            dup = 0
            inv = 0
            for k in range(self.face_k):
                im[k] = self.assign[self.src_faces[i * self.face_k + k]]
            for a in range(self.face_k):
                for b in range(a + 1, self.face_k):
                    if im[a] == im[b]:
                        dup = 1
                        break
                    if im[a] > im[b]:
                        inv += 1
                if dup:
                    break
            if dup:
                continue
            # sort a copy to build the lookup key
            for a in range(1, self.face_k):
                b = a
                while b > 0 and im[b-1] > im[b]:
                    im[b-1], im[b] = im[b], im[b-1]
                    b -= 1
            key = 0
            for k in range(self.face_k):
                key = (key << 8) | <uint32_t> im[k]
            lo = 0; hi = self.n_tgt_faces - 1
            j = -1
            while lo <= hi:
                mid = (lo + hi) >> 1
                if self.tgt_keys[mid] == key:
                    j = mid
                    break
                elif self.tgt_keys[mid] < key:
                    lo = mid + 1
                else:
                    hi = mid - 1
            if j < 0:
                return False  # image spans no target face (explicit targets)
            j = self.tgt_perm[j]
            s = self.src_signs[i]
            if inv & 1:
                s = -s
            self.sums[j] += s * self.tgt_signs[j]
        first = self.sums[0]
        for j in range(1, self.n_tgt_faces):
            if self.sums[j] != first:
                raise RuntimeError("per-face degree sums disagree; orientation bug")
        if first == 0:
            return False
        if self.mode == MODE_NONZERO:
            return True
        if self.mode == MODE_UNIT:
            return first == 1 or first == -1
        if self.mode == MODE_PLUS1:
            return first == 1
        return first == -1

    cdef int search(self, int depth) except -1:
        """1 found, 0 exhausted; -2 budget (via exception-free sentinel)."""
        cdef int i, k, ty, w, a, r
        cdef int16_t v
        cdef uint64_t ulo, uhi, cm_lo, cm_hi, bit, nlo, nhi, alo, ahi, wlo, whi
        cdef int missing, remaining, base
        cdef int saved_trail
        cdef uint64_t old_cov_lo, old_cov_hi
        if depth == self.n_order:
            return 1 if self.accept() else 0
        if self.require_surjective:
            missing = popcount64(self.full_lo & ~self.covered_lo) + popcount64(self.full_hi & ~self.covered_hi)
            remaining = self.n_order - depth
            if missing > remaining:
                return 0
            ulo = self.covered_lo
            uhi = self.covered_hi
            for k in range(depth, self.n_order):
                ulo |= self.cand[self.order[k]*WORDS]
                uhi |= self.cand[self.order[k]*WORDS+1]
            if ulo != self.full_lo or uhi != self.full_hi:
                return 0
        v = self.order[depth]
        cm_lo = self.cand[v*WORDS]
        cm_hi = self.cand[v*WORDS+1]
        while cm_lo or cm_hi:
            if cm_lo:
                bit = cm_lo & (~cm_lo + 1)
                a = ctz64(bit)
                cm_lo ^= bit
            else:
                bit = cm_hi & (~cm_hi + 1)
                a = 64 + ctz64(bit)
                cm_hi ^= bit
            self.nodes += 1
            if self.nodes > self.budget:
                return -2
            saved_trail = self.trail_len
            r = 1  # alive
            for ty in range(self.n_types):
                alo = self.allow[(ty * self.nt + a) * WORDS]
                ahi = self.allow[(ty * self.nt + a) * WORDS + 1]
                base = (ty * self.ns + v) * WORDS
                wlo = self.adj[base]
                whi = self.adj[base + 1]
                while wlo or whi:
                    if wlo:
                        bit = wlo & (~wlo + 1)
                        w = ctz64(bit)
                        wlo ^= bit
                    else:
                        bit = whi & (~whi + 1)
                        w = 64 + ctz64(bit)
                        whi ^= bit
                    if self.assign[w] >= 0 or w == v:
                        continue
                    nlo = self.cand[w*WORDS] & alo
                    nhi = self.cand[w*WORDS+1] & ahi
                    if nlo == self.cand[w*WORDS] and nhi == self.cand[w*WORDS+1]:
                        continue
                    if nlo == 0 and nhi == 0:
                        r = 0
                        break
                    self.trail[self.trail_len].vertex = <int16_t> w
                    self.trail[self.trail_len].lo = self.cand[w*WORDS]
                    self.trail[self.trail_len].hi = self.cand[w*WORDS+1]
                    self.trail_len += 1
                    self.cand[w*WORDS] = nlo
                    self.cand[w*WORDS+1] = nhi
                if not r:
                    break
            if not r:
                while self.trail_len > saved_trail:
                    self.trail_len -= 1
                    w = self.trail[self.trail_len].vertex
                    self.cand[w*WORDS] = self.trail[self.trail_len].lo
                    self.cand[w*WORDS+1] = self.trail[self.trail_len].hi
                continue
            self.assign[v] = <int16_t> a
            old_cov_lo = self.covered_lo
            old_cov_hi = self.covered_hi
            if a < 64:
                self.covered_lo |= (<uint64_t>1) << a
            else:
                self.covered_hi |= (<uint64_t>1) << (a - 64)
            r = self.search(depth + 1)
            if r != 0:
                return r
            self.assign[v] = -1
            self.covered_lo = old_cov_lo
            self.covered_hi = old_cov_hi
            while self.trail_len > saved_trail:
                self.trail_len -= 1
                w = self.trail[self.trail_len].vertex
                self.cand[w*WORDS] = self.trail[self.trail_len].lo
                self.cand[w*WORDS+1] = self.trail[self.trail_len].hi
        return 0


def match_maps(
    int ns,
    int nt,
    adj_types,
    allow_types,
    cand0,
    order,
    preset,
    bint require_surjective,
    budget,
    int mode,
    src_faces=(),
    src_signs=(),
    tgt_faces=(),
    tgt_signs=(),
    tgt_maxface_masks=None,
):
    if ns > NMAX or nt > NMAX:
        raise ValueError(f"kernel capacity is {NMAX} vertices")
    cdef _Searcher s = _Searcher()
    cdef int n_types = len(adj_types)
    cdef int i, k, ty, v
    s.ns = ns
    s.nt = nt
    s.n_types = n_types
    s.mode = mode
    s.require_surjective = require_surjective
    s.budget = <int64_t> budget
    s.nodes = 0
    if nt >= 64:
        s.full_lo = <uint64_t> 0xFFFFFFFFFFFFFFFF
        s.full_hi = ((<uint64_t>1) << (nt - 64)) - 1 if nt > 64 else 0
    else:
        s.full_lo = ((<uint64_t>1) << nt) - 1
        s.full_hi = 0
    if nt == 128:
        s.full_hi = <uint64_t> 0xFFFFFFFFFFFFFFFF

    s.adj = <uint64_t*> malloc(n_types * ns * WORDS * sizeof(uint64_t))
    s.allow = <uint64_t*> malloc(n_types * nt * WORDS * sizeof(uint64_t))
    s.cand = <uint64_t*> malloc(ns * WORDS * sizeof(uint64_t))
    s.order = <int16_t*> malloc(max(len(order), 1) * sizeof(int16_t))
    s.assign = <int16_t*> malloc(ns * sizeof(int16_t))
    s.trail = <TrailEntry*> malloc((ns * n_types * max(len(order), 1) + 16) * sizeof(TrailEntry))
    if not (s.adj and s.allow and s.cand and s.order and s.assign and s.trail):
        raise MemoryError
    for ty in range(n_types):
        rows = adj_types[ty]
        for v in range(ns):
            int_to_words(rows[v], &s.adj[(ty * ns + v) * WORDS])
        arows = allow_types[ty]
        for v in range(nt):
            int_to_words(arows[v], &s.allow[(ty * nt + v) * WORDS])
    for v in range(ns):
        int_to_words(cand0[v], &s.cand[v * WORDS])
    s.n_order = len(order)
    for i in range(s.n_order):
        s.order[i] = <int16_t> order[i]
    s.covered_lo = 0
    s.covered_hi = 0
    for v in range(ns):
        s.assign[v] = <int16_t> preset[v]
        if preset[v] >= 0:
            if preset[v] < 64:
                s.covered_lo |= (<uint64_t>1) << preset[v]
            else:
                s.covered_hi |= (<uint64_t>1) << (preset[v] - 64)
    s.trail_len = 0

    # degree-mode data
    s.n_src_faces = len(src_faces)
    s.n_tgt_faces = len(tgt_faces)
    s.face_k = len(src_faces[0]) if s.n_src_faces else 0
    if mode != MODE_FIRST:
        if s.n_src_faces == 0 or s.n_tgt_faces == 0:
            raise ValueError("degree modes need source and target top faces")
        s.src_faces = <int16_t*> malloc(s.n_src_faces * s.face_k * sizeof(int16_t))
        s.src_signs = <int8_t*> malloc(s.n_src_faces * sizeof(int8_t))
        s.tgt_keys = <uint32_t*> malloc(s.n_tgt_faces * sizeof(uint32_t))
        s.tgt_perm = <int16_t*> malloc(s.n_tgt_faces * sizeof(int16_t))
        s.tgt_signs = <int8_t*> malloc(s.n_tgt_faces * sizeof(int8_t))
        s.sums = <int64_t*> malloc(s.n_tgt_faces * sizeof(int64_t))
        if not (s.src_faces and s.src_signs and s.tgt_keys and s.tgt_perm and s.tgt_signs and s.sums):
            raise MemoryError
        for i in range(s.n_src_faces):
            face = src_faces[i]
            for k in range(s.face_k):
                s.src_faces[i * s.face_k + k] = <int16_t> face[k]
            s.src_signs[i] = <int8_t> src_signs[i]
        keyed = []
        for i in range(s.n_tgt_faces):
            face = tgt_faces[i]
            key = 0
            for k in range(s.face_k):
                key = (key << 8) | face[k]
            keyed.append((key, i))
        keyed.sort()
        for i in range(s.n_tgt_faces):
            s.tgt_keys[i] = <uint32_t> keyed[i][0]
            s.tgt_perm[i] = <int16_t> keyed[i][1]
        for i in range(s.n_tgt_faces):
            s.tgt_signs[i] = <int8_t> tgt_signs[i]
    if tgt_maxface_masks is not None:
        s.n_maxface = len(tgt_maxface_masks)
        s.maxface = <uint64_t*> malloc(max(s.n_maxface, 1) * WORDS * sizeof(uint64_t))
        if not s.maxface:
            raise MemoryError
        for i in range(s.n_maxface):
            int_to_words(tgt_maxface_masks[i], &s.maxface[i * WORDS])
    else:
        s.n_maxface = 0

    cdef int result = s.search(0)
    cdef int64_t used = s.nodes
    if result == -2:
        return BUDGET, None, int(used)
    if result == 1:
        out = [int(s.assign[v]) for v in range(ns)]
        return FOUND, out, int(used)
    return EXHAUSTED, None, int(used)


def nonsquare_edges(int n, adj):
    """Edges (i, j), i < j, not contained in any induced 4-cycle."""
    if n > NMAX:
        raise ValueError(f"kernel capacity is {NMAX} vertices")
    cdef uint64_t rows[NMAX][WORDS]
    cdef int i, j, z
    cdef uint64_t jlo, jhi, zbits_lo, zbits_hi, bit
    cdef uint64_t i_only_lo, i_only_hi, j_only_lo, j_only_hi
    cdef bint hit
    for i in range(n):
        int_to_words(adj[i], &rows[i][0])
    out = []
    for i in range(n):
        # neighbours j with j > i
        if i < 63:
            jlo = rows[i][0] & ~(((<uint64_t>1) << (i + 1)) - 1)
            jhi = rows[i][1]
        elif i == 63:
            jlo = 0
            jhi = rows[i][1]
        elif i < 127:
            jlo = 0
            jhi = rows[i][1] & ~(((<uint64_t>1) << (i - 63)) - 1)
        else:
            jlo = 0
            jhi = 0
        while jlo or jhi:
            if jlo:
                bit = jlo & (~jlo + 1)
                j = ctz64(bit)
                jlo ^= bit
            else:
                bit = jhi & (~jhi + 1)
                j = 64 + ctz64(bit)
                jhi ^= bit
            i_only_lo = rows[i][0] & ~rows[j][0]
            i_only_hi = rows[i][1] & ~rows[j][1]
            j_only_lo = rows[j][0] & ~rows[i][0]
            j_only_hi = rows[j][1] & ~rows[i][1]
            if j < 64:
                j_only_lo &= ~((<uint64_t>1) << j)
                i_only_lo &= ~((<uint64_t>1) << j)
            else:
                j_only_hi &= ~((<uint64_t>1) << (j - 64))
                i_only_hi &= ~((<uint64_t>1) << (j - 64))
            if i < 64:
                i_only_lo &= ~((<uint64_t>1) << i)
                j_only_lo &= ~((<uint64_t>1) << i)
            else:
                i_only_hi &= ~((<uint64_t>1) << (i - 64))
                j_only_hi &= ~((<uint64_t>1) << (i - 64))
            hit = False
            zbits_lo = j_only_lo
            zbits_hi = j_only_hi
            while zbits_lo or zbits_hi:
                if zbits_lo:
                    bit = zbits_lo & (~zbits_lo + 1)
                    z = ctz64(bit)
                    zbits_lo ^= bit
                else:
                    bit = zbits_hi & (~zbits_hi + 1)
                    z = 64 + ctz64(bit)
                    zbits_hi ^= bit
                if (rows[z][0] & i_only_lo) or (rows[z][1] & i_only_hi):
                    hit = True
                    break
            if not hit:
                out.append((i, j))
    return out
