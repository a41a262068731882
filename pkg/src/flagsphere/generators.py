"""Named triangulations and constructions: polygons, octahedral spheres,
joins, barycentric subdivision, the 9-, 10- and 12-vertex landmark
triangulations, vertex doubling, incrementally-built 3-spheres, and an
exhaustive enumerator of small 2-sphere triangulations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .complexes import (
    Kind,
    Triangulation,
    bits,
    edge_in_square,
    face_vector,
    is_suspension,
    verify_sphere,
)
from .errors import (
    DimensionOverflow,
    InvalidStep,
    NotFlag,
    OutOfRange,
    TooSmall,
    VertexNotPresent,
)

# The 9-vertex flag 2-sphere: the unique flag triangulation of S^2 on 9
# vertices admitting no valence-4/valence-4 edge collapse (verified by
# exhaustion over all fifty 9-vertex triangulations in the test suite).  Its
# three valence-4 vertices are pairwise nonadjacent and their links are the
# complex's only squares.
T9_EDGES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 4), (0, 6), (0, 7), (1, 2), (1, 5), (1, 6), (1, 7),
    (2, 3), (2, 5), (2, 7), (2, 8), (3, 4), (3, 7), (3, 8), (4, 6),
    (4, 7), (4, 8), (5, 6), (5, 8), (6, 8),
)

# The 12-vertex flag 3-sphere with gamma_2 = 1 in which every edge lies in a
# square.  Vertices 0..8 carry a 9-cycle symmetry rho = (0 2 4 3 5 7 6 8 1)
# acting together with (9 10 11); adjacency on 0..8 is the circulant with
# differences {1,2,3} along rho's ordering, and each of 9, 10, 11 is joined
# to six of the others.
_T12_RHO_ORDER = (0, 2, 4, 3, 5, 7, 6, 8, 1)


def _t12_edges() -> tuple[tuple[int, int], ...]:
    s = _T12_RHO_ORDER
    edges = set()
    for i in range(9):
        for d in (1, 2, 3):
            a, b = s[i], s[(i + d) % 9]
            edges.add((min(a, b), max(a, b)))
    triples = [{s[0], s[3], s[6]}, {s[1], s[4], s[7]}, {s[2], s[5], s[8]}]
    columns = {9: triples[1] | triples[2], 10: triples[2] | triples[0], 11: triples[0] | triples[1]}
    for hub, col in columns.items():
        for v in col:
            edges.add((v, hub))
    return tuple(sorted(edges))


T12_EDGES: tuple[tuple[int, int], ...] = _t12_edges()

# Automorphisms of T12: the order-9 rotation and a reflection swapping the
# hubs 9 and 11.
T12_ROTATION: tuple[int, ...] = tuple(
    {**{_T12_RHO_ORDER[i]: _T12_RHO_ORDER[(i + 1) % 9] for i in range(9)}, 9: 10, 10: 11, 11: 9}[v]
    for v in range(12)
)
T12_REFLECTION: tuple[int, ...] = (4, 3, 2, 1, 0, 8, 7, 6, 5, 11, 10, 9)


def polygon(n: int) -> Triangulation:
    """The boundary of an n-gon: a flag complex for n >= 4, an explicit
    (non-flag) triangle for n = 3."""
    if n < 3:
        raise TooSmall(f"a polygon needs at least 3 vertices, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    if n == 3:
        return Triangulation.explicit(3, [sorted(e) for e in edges])
    return Triangulation.flag(n, edges)


def sphere0() -> Triangulation:
    """Two isolated points; flag (the clique complex of the empty graph)."""
    return Triangulation.flag(2, [])


def octahedral_sphere(n: int) -> Triangulation:
    """The (n+1)-fold join of the two-point sphere: the flag triangulation of
    S^n with the fewest vertices (2n + 2).  Its 1-skeleton is complete
    multipartite with parts {2i, 2i+1}."""
    if not 1 <= n <= 3:
        raise OutOfRange(f"octahedral sphere dimension must be 1..3, got {n}")
    size = 2 * n + 2
    edges = [(a, b) for a in range(size) for b in range(a + 1, size) if b != a ^ 1]
    return Triangulation.flag(size, edges)


def join(a: Triangulation, b: Triangulation) -> Triangulation:
    """Join: disjoint vertex union with every cross edge; b's vertices are
    shifted by a.n.  Joins of flag complexes are flag."""
    if a.dim + b.dim + 1 > 3:
        raise DimensionOverflow(f"join would have dimension {a.dim + b.dim + 1} > 3")
    cross = [(i, a.n + j) for i in range(a.n) for j in range(b.n)]
    if a.kind is Kind.FLAG and b.kind is Kind.FLAG:
        edges = a.edges() + [(a.n + i, a.n + j) for i, j in b.edges()] + cross
        return Triangulation.flag(a.n + b.n, edges)
    fa = a.maximal_faces if a.kind is Kind.EXPLICIT else tuple(a.top_faces())
    fb = b.maximal_faces if b.kind is Kind.EXPLICIT else tuple(b.top_faces())
    faces = [list(x) + [a.n + v for v in y] for x in fa for y in fb]
    return Triangulation.explicit(a.n + b.n, faces)


def suspension(t: Triangulation) -> Triangulation:
    return join(t, sphere0())


def barycentric_subdivision(t: Triangulation) -> Triangulation:
    """One vertex per nonempty face, adjacency given by strict containment.
    Order complexes are flag, so the result is always flag."""
    faces = t.all_faces()
    faces.sort(key=lambda f: (len(f), f))
    idx = {frozenset(f): i for i, f in enumerate(faces)}
    edges = []
    fsets = [frozenset(f) for f in faces]
    for i, a in enumerate(fsets):
        for j in range(i + 1, len(fsets)):
            b = fsets[j]
            if a < b or b < a:
                edges.append((i, j))
    return Triangulation.flag(len(faces), edges)


@lru_cache(maxsize=1)
def t9() -> Triangulation:
    t = Triangulation.flag(9, T9_EDGES)
    assert t.n_edges == 21 and verify_sphere(t, 2)
    return t


@lru_cache(maxsize=1)
def t10() -> Triangulation:
    """The join of two pentagons: vertices 0-4 and 5-9, each a 5-cycle."""
    t = join(polygon(5), polygon(5))
    fv = face_vector(t)
    assert fv.f == (1, 10, 35, 50, 25) and gamma2(t) == 1
    return t


@lru_cache(maxsize=1)
def t12() -> Triangulation:
    t = Triangulation.flag(12, T12_EDGES)
    assert t.n_edges == 45 and gamma2(t) == 1
    assert verify_sphere(t, 3) and is_suspension(t) is None
    assert all(edge_in_square(t, i, j) for i, j in T12_EDGES)
    for perm in (T12_ROTATION, T12_REFLECTION):
        relabeled = {(min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in T12_EDGES}
        assert relabeled == set(T12_EDGES)
    return t


def gamma2(t: Triangulation) -> int:
    """16 - 5*f0 + f1; proportional to the Euler characteristic of the
    associated cubical complex when t is a flag 3-sphere."""
    return 16 - 5 * t.n + t.n_edges


def double_along_vertex(t: Triangulation, u: int) -> Triangulation:
    """Glue two copies of t minus u's open star along the link of u.  For a
    flag 3-sphere this doubles gamma_2 and has 2(n-1) - deg(u) vertices."""
    if t.kind is not Kind.FLAG:
        raise NotFlag("doubling is defined for flag complexes")
    if not 0 <= u < t.n:
        raise VertexNotPresent(f"vertex {u} out of range")
    keep = [v for v in range(t.n) if v != u]
    new_id = {v: i for i, v in enumerate(keep)}
    interior = [v for v in keep if not t.has_edge(u, v)]
    clone_id = {v: len(keep) + i for i, v in enumerate(interior)}
    edges = []
    for i, j in t.edges():
        if u in (i, j):
            continue
        edges.append((new_id[i], new_id[j]))
        ci = clone_id.get(i, new_id[i])
        cj = clone_id.get(j, new_id[j])
        if (ci, cj) != (new_id[i], new_id[j]):
            edges.append(tuple(sorted((ci, cj))))
    return Triangulation.flag(len(keep) + len(interior), edges)


def fold_double_map(t: Triangulation, u: int):
    """The degree-1 projection double_along_vertex(t, u) -> t sending the
    second copy's interior back to u."""
    from .maps import VertexMap

    keep = [v for v in range(t.n) if v != u]
    interior = [v for v in keep if not t.has_edge(u, v)]
    doubled = double_along_vertex(t, u)
    assignment = keep + [u] * len(interior)
    return VertexMap(doubled, t, tuple(assignment))


# -- incremental triangulations ------------------------------------------------


@dataclass(frozen=True)
class IncrementalStep:
    """One cone attachment: a full disc in the current boundary sphere given
    by its boundary cycle and interior vertices; the new apex must take the
    next free vertex id."""

    disc_boundary: tuple[int, ...]
    disc_interior: tuple[int, ...]
    apex: int


@dataclass
class IncrementalTrace:
    """Recipe for an incrementally-built flag 3-sphere: cone over a flag
    2-sphere, a sequence of disc-cone attachments, and a final cone over the
    remaining boundary."""

    base: Triangulation
    steps: tuple[IncrementalStep, ...] = ()
    theta_history: list[int] = field(default_factory=list)


def _disc_check(sphere: Triangulation, boundary: Sequence[int], interior: Sequence[int]) -> None:
    """The given vertex sets must induce a full disc of `sphere` with full
    boundary exactly `boundary`."""
    bset, iset = set(boundary), set(interior)
    if bset & iset:
        raise InvalidStep("disc boundary and interior overlap")
    verts = sorted(bset | iset)
    vm = 0
    for v in verts:
        vm |= 1 << v
    bm = 0
    for v in bset:
        bm |= 1 << v
    # boundary, in the given cyclic order, is an induced cycle of the sphere
    m = len(boundary)
    if m < 4 or len(bset) != m:
        raise InvalidStep("disc boundary must be an induced cycle with >= 4 distinct vertices")
    for pos in range(m):
        if not (sphere.adj[boundary[pos]] >> boundary[(pos + 1) % m]) & 1:
            raise InvalidStep("disc boundary vertices must be listed in cyclic order")
    for v in bset:
        if (sphere.adj[v] & bm).bit_count() != 2:
            raise InvalidStep("disc boundary is not an induced cycle")
    # interior vertices see only disc vertices
    for v in iset:
        if sphere.adj[v] & ~vm:
            raise InvalidStep("disc interior vertex has a neighbour outside the disc")
    # the disc (full subcomplex on verts) is a triangulated disc:
    # chi = 1, connected, every edge in <= 2 triangles, boundary edges in exactly 1
    sub_edges = [(a, b) for a in verts for b in bits(sphere.adj[a] & vm) if a < b]
    tris = [
        (a, b, c)
        for a, b in sub_edges
        for c in bits(sphere.adj[a] & sphere.adj[b] & vm)
        if c > b
    ]
    chi = len(verts) - len(sub_edges) + len(tris)
    if chi != 1:
        raise InvalidStep(f"disc has Euler characteristic {chi}, expected 1")
    tri_count: dict[tuple[int, int], int] = {}
    for a, b, c in tris:
        for e in ((a, b), (a, c), (b, c)):
            tri_count[e] = tri_count.get(e, 0) + 1
    for e in sub_edges:
        both_bd = e[0] in bset and e[1] in bset
        want = 1 if both_bd else 2
        if tri_count.get(e, 0) != want:
            raise InvalidStep(f"edge {e} lies in {tri_count.get(e, 0)} disc triangles, expected {want}")


def build_incremental(trace: IncrementalTrace):
    """Build the closed flag 3-sphere described by the trace.

    Returns (triangulation, theta_final, witness) where theta tracks
    11 - 5*f0 + f1 + f0(boundary) of the growing 3-ball; gamma_2 of the
    closed complex equals theta_final.  When some step attaches over a disc
    with boundary length >= 5, `witness` is an explicit degree-+-1 map onto
    the join of two pentagons (None otherwise)."""
    from .maps import VertexMap

    base = trace.base
    if base.kind is not Kind.FLAG or not verify_sphere(base, 2):
        raise InvalidStep("trace base must be a flag 2-sphere")
    n = base.n + 1
    apex0 = base.n
    adj = list(base.adj) + [(1 << base.n) - 1]
    for v in range(base.n):
        adj[v] |= 1 << apex0
    boundary_mask = (1 << base.n) - 1  # current boundary-sphere vertices
    theta = 0
    trace.theta_history.clear()
    trace.theta_history.append(theta)
    ball_edges = base.n_edges + base.n
    # bookkeeping for the witness map
    special = None  # (boundary cycle, interior, ball interior, off-disc boundary, first future id)

    def boundary_sphere():
        verts = [v for v in range(n) if (boundary_mask >> v) & 1]
        idx = {v: i for i, v in enumerate(verts)}
        edges = [
            (idx[a], idx[b])
            for a in verts
            for b in bits(adj[a] & boundary_mask)
            if a < b
        ]
        return Triangulation.flag(len(verts), edges), idx, verts

    for step in trace.steps:
        if step.apex != n:
            raise InvalidStep(f"apex must be the next free id {n}, got {step.apex}")
        sphere, idx, verts = boundary_sphere()
        try:
            local_bd = [idx[v] for v in step.disc_boundary]
            local_in = [idx[v] for v in step.disc_interior]
        except KeyError as e:
            raise InvalidStep(f"vertex {e.args[0]} is not on the current boundary") from None
        _disc_check(sphere, local_bd, local_in)
        m = len(step.disc_boundary)
        if m >= 5 and special is None:
            on_disc = set(step.disc_boundary) | set(step.disc_interior)
            ball_interior = [v for v in range(n) if not (boundary_mask >> v) & 1]
            off_disc = [v for v in verts if v not in on_disc]
            special = (
                tuple(step.disc_boundary),
                tuple(step.disc_interior),
                tuple(ball_interior),
                tuple(off_disc),
                n,
            )
        disc_mask = 0
        for v in itertools.chain(step.disc_boundary, step.disc_interior):
            disc_mask |= 1 << v
        adj.append(disc_mask)
        for v in bits(disc_mask):
            adj[v] |= 1 << n
        interior_mask = 0
        for v in step.disc_interior:
            interior_mask |= 1 << v
        boundary_mask = (boundary_mask & ~interior_mask) | (1 << n)
        ball_edges += disc_mask.bit_count()
        n += 1
        theta += m - 4
        trace.theta_history.append(theta)

    # closing cone over the remaining boundary sphere
    sphere, _, _ = boundary_sphere()
    if not verify_sphere(sphere, 2):
        raise InvalidStep("remaining boundary is not a 2-sphere")
    adj.append(boundary_mask)
    for v in bits(boundary_mask):
        adj[v] |= 1 << n
    closing_tip = n
    n += 1
    t = Triangulation.flag(n, [(i, j) for i in range(n) for j in bits(adj[i]) if i < j])
    assert gamma2(t) == theta, "theta bookkeeping must equal gamma_2 of the closed complex"

    witness = None
    if special is not None:
        cycle, disc_interior, ball_interior, off_disc, future_from = special
        target = t10()
        assignment = [0] * n
        for pos, v in enumerate(cycle):
            assignment[v] = pos * 5 // len(cycle)  # weakly monotone onto the first pentagon
        groups = (
            ((future_from,), 5),          # tip of the special cone
            (disc_interior, 6),
            (ball_interior, 7),
            (off_disc, 8),
            (tuple(range(future_from + 1, n)), 9),  # later apexes and the closing tip
        )
        for vs, img in groups:
            for v in vs:
                assignment[v] = img
        witness = VertexMap(t, target, tuple(assignment))
    return t, theta, witness


# -- exhaustive enumeration of small 2-spheres ---------------------------------


def _rotation_system(tris: Sequence[tuple[int, int, int]]):
    """Oriented successor map (v, a) -> b over the triangles of an
    orientable closed surface."""
    tset = {frozenset(t) for t in tris}
    edge2: dict[tuple[int, int], list[frozenset]] = {}
    for t in tset:
        for e in itertools.combinations(sorted(t), 2):
            edge2.setdefault(e, []).append(t)
    t0 = min(tset, key=sorted)
    a, b, c = sorted(t0)
    oriented = {t0: (a, b, c)}
    stack = [t0]
    while stack:
        t = stack.pop()
        x, y, z = oriented[t]
        for u, v in ((x, y), (y, z), (z, x)):
            e = (min(u, v), max(u, v))
            for t2 in edge2[e]:
                if t2 in oriented:
                    continue
                w = next(iter(t2 - {u, v}))
                oriented[t2] = (v, u, w)
                stack.append(t2)
    succ = {}
    for x, y, z in oriented.values():
        succ[(x, y)] = z
        succ[(y, z)] = x
        succ[(z, x)] = y
    return succ


def _sphere_code(tris: Sequence[tuple[int, int, int]]) -> tuple:
    """Canonical BFS code of a 2-sphere triangulation, minimized over all
    rooted directed edges and both orientations."""
    succ = _rotation_system(tris)
    pred = {(v, b): a for (v, a), b in succ.items()}
    best = None
    for table in (succ, pred):
        for v0, a0 in table:
            lab = {v0: 0, a0: 1}
            order = [v0, a0]
            disc = {v0: a0, a0: v0}
            code = []
            qi = 0
            while qi < len(order):
                v = order[qi]
                qi += 1
                start = disc[v]
                ring = [start]
                cur = start
                while True:
                    cur = table[(v, cur)]
                    if cur == start:
                        break
                    ring.append(cur)
                row = []
                for w in ring:
                    if w not in lab:
                        lab[w] = len(order)
                        order.append(w)
                        disc[w] = v
                    row.append(lab[w])
                code.append(tuple(row))
            code = tuple(code)
            if best is None or code < best:
                best = code
    return best


def _vertex_splits(n: int, tris: list[tuple[int, int, int]]) -> Iterator[list[tuple[int, int, int]]]:
    """All triangulations on n+1 vertices obtained by splitting one vertex
    (the inverse of an edge contraction)."""
    succ = _rotation_system(tris)
    ring_of: dict[int, list[int]] = {}
    for (v, a) in succ:
        if v in ring_of:
            continue
        ring = [a]
        cur = a
        while True:
            cur = succ[(v, cur)]
            if cur == a:
                break
            ring.append(cur)
        ring_of[v] = ring
    for v in range(n):
        ring = ring_of[v]
        k = len(ring)
        for i in range(k):
            for j in range(i + 1, k):
                arc2 = ring[j:] + ring[: i + 1]  # the new vertex inherits this arc
                pairs2 = {frozenset((arc2[s], arc2[s + 1])) for s in range(len(arc2) - 1)}
                out = []
                for t in tris:
                    ft = frozenset(t)
                    if v in ft:
                        rest = ft - {v}
                        out.append(tuple(sorted(rest | {n})) if rest in pairs2 else tuple(sorted(ft)))
                    else:
                        out.append(tuple(sorted(ft)))
                out.append(tuple(sorted((v, ring[i], n))))
                out.append(tuple(sorted((v, ring[j], n))))
                yield out


def sphere2_triangulations(n: int) -> list[Triangulation]:
    """All triangulations of the 2-sphere with exactly n vertices, up to
    isomorphism, generated from the tetrahedron boundary by vertex splits.
    Counts for n = 4..9: 1, 1, 2, 5, 14, 50."""
    if n < 4:
        raise TooSmall("the smallest 2-sphere triangulation has 4 vertices")
    level: dict[tuple, list[tuple[int, int, int]]] = {
        _sphere_code([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]): [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    }
    size = 4
    while size < n:
        nxt: dict[tuple, list[tuple[int, int, int]]] = {}
        for tris in level.values():
            for split in _vertex_splits(size, tris):
                code = _sphere_code(split)
                if code not in nxt:
                    nxt[code] = split
        level = nxt
        size += 1
    return [Triangulation.explicit(n, [list(t) for t in tris]) for tris in level.values()]


def flag_sphere2_triangulations(n: int) -> list[Triangulation]:
    """The flag ones among sphere2_triangulations(n), re-built as flag
    complexes."""
    from .complexes import is_flag

    return [Triangulation.flag(t.n, t.edges()) for t in sphere2_triangulations(n) if is_flag(t)]
