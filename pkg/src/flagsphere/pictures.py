"""Edge-neighbourhood pictures of flag 3-spheres and maps between them.

The picture around an edge {x, y} is the 2-sphere obtained by gluing the
punctured links of x and y along the link of the edge (the equator),
decorated with the ambient cross-adjacencies between the two hemisphere
interiors and with the set of vertices adjacent to something outside the
edge's neighbourhood (the marked vertices).  A structure-respecting map
between two pictures extends, when the target edge has exactly one
non-neighbour, to a global simplicial map of degree +-1; this is the fast
certifier the search pipeline runs instead of exhaustive map enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .complexes import Kind, Triangulation, bits, verify_sphere
from .errors import (
    EdgeNotPresent,
    ExtensionNotSimplicial,
    NotAlmostOmniscient,
    NotFlag,
    SearchBudgetExceeded,
)
from .maps import VertexMap, degree, validate

NORTH, SOUTH, EQUATOR = 0, 1, 2

DEFAULT_PICTURE_BUDGET = 10**7


@dataclass(frozen=True)
class LocalPicture:
    sphere: Triangulation  # flag 2-sphere on picture ids 0..k-1
    equator: tuple[int, ...]  # induced cycle, in cyclic order
    hemisphere_of: tuple[int, ...]  # NORTH / SOUTH / EQUATOR per picture id
    cross_adj: tuple[int, ...]  # bitmask per picture id; joins NORTH to SOUTH only
    marked: int  # bitmask over picture ids
    ambient_ids: tuple[int, ...]  # picture id -> ambient vertex
    origin_edge: tuple[int, int]

    @property
    def n(self) -> int:
        return self.sphere.n

    def is_marked(self, v: int) -> bool:
        return bool((self.marked >> v) & 1)


@dataclass(frozen=True)
class PictureMap:
    source: LocalPicture
    target: LocalPicture
    assignment: tuple[int, ...]  # source picture id -> target picture id
    swapped: bool  # NORTH of source mapped to SOUTH of target


def extract(t: Triangulation, edge: tuple[int, int]) -> LocalPicture:
    """Local picture around an edge of a flag 3-sphere: equator = link of the
    edge, hemispheres = the punctured endpoint links, cross graph = ambient
    adjacencies between hemisphere interiors, marked = vertices adjacent to
    some vertex adjacent to neither endpoint."""
    x, y = edge
    if t.kind is not Kind.FLAG:
        raise NotFlag("local pictures are defined for flag complexes")
    if not t.has_edge(x, y):
        raise EdgeNotPresent(f"edge {edge} not in complex")
    both = t.adj[x] & t.adj[y]
    north = t.adj[x] & ~t.adj[y] & ~(1 << y)
    south = t.adj[y] & ~t.adj[x] & ~(1 << x)
    picture_mask = both | north | south
    ambient = sorted(bits(picture_mask))
    pid = {v: i for i, v in enumerate(ambient)}
    k = len(ambient)
    hemisphere = [EQUATOR] * k
    for v in bits(north):
        hemisphere[pid[v]] = NORTH
    for v in bits(south):
        hemisphere[pid[v]] = SOUTH
    sphere_adj = [0] * k
    cross_adj = [0] * k
    for i, v in enumerate(ambient):
        for w in bits(t.adj[v] & picture_mask):
            j = pid[w]
            crossing = {hemisphere[i], hemisphere[j]} == {NORTH, SOUTH}
            if crossing:
                cross_adj[i] |= 1 << j
            else:
                sphere_adj[i] |= 1 << j
    sphere = Triangulation.flag(k, [(i, j) for i in range(k) for j in bits(sphere_adj[i]) if i < j])
    outside = ((1 << t.n) - 1) & ~(picture_mask | (1 << x) | (1 << y))
    marked = 0
    for i, v in enumerate(ambient):
        if t.adj[v] & outside:
            marked |= 1 << i
    # walk the equator cycle from its smallest picture id
    eq_ids = [pid[v] for v in bits(both)]
    eq_mask = 0
    for i in eq_ids:
        eq_mask |= 1 << i
    start = min(eq_ids)
    nbrs = sphere.adj[start] & eq_mask
    assert all((sphere.adj[i] & eq_mask).bit_count() == 2 for i in eq_ids), "equator must be an induced cycle"
    cycle = [start, min(bits(nbrs))]
    while len(cycle) < len(eq_ids):
        nxt = sphere.adj[cycle[-1]] & eq_mask & ~(1 << cycle[-2]) & ~(1 << cycle[-1])
        cycle.append(nxt.bit_length() - 1)
    return LocalPicture(
        sphere=sphere,
        equator=tuple(cycle),
        hemisphere_of=tuple(hemisphere),
        cross_adj=tuple(cross_adj),
        marked=marked,
        ambient_ids=tuple(ambient),
        origin_edge=(x, y),
    )


def is_almost_omniscient(t: Triangulation, edge: tuple[int, int]) -> bool:
    """Exactly one vertex adjacent to neither endpoint of the edge."""
    x, y = edge
    if not t.has_edge(x, y):
        raise EdgeNotPresent(f"edge {edge} not in complex")
    outside = ((1 << t.n) - 1) & ~(t.adj[x] | t.adj[y] | (1 << x) | (1 << y))
    return outside.bit_count() == 1


def _cyclic_surjections(p: int, q: int):
    """Fibre sizes of weakly monotone cyclic surjections of a p-cycle onto a
    q-cycle: compositions of p into q positive parts."""
    for cuts in itertools.combinations(range(1, p), q - 1):
        prev = 0
        parts = []
        for c in cuts:
            parts.append(c - prev)
            prev = c
        parts.append(p - prev)
        yield parts


def validate_picture_map(pm: PictureMap) -> bool:
    """Independent re-check of the four conditions: simplicial, equator to
    equator by a monotone degree-+-1 surjection, hemispheres to opposite
    hemispheres, cross edges to cross-or-adjacent-or-equal pairs, marked to
    marked."""
    src, tgt, f = pm.source, pm.target, pm.assignment
    for i in range(src.n):
        for j in bits(src.sphere.adj[i]):
            if j < i:
                continue
            a, b = f[i], f[j]
            if a != b and not tgt.sphere.has_edge(a, b):
                return False
    # equator restriction: fibres are nonempty arcs in cyclic order
    eq_img = [f[v] for v in src.equator]
    if set(eq_img) != set(tgt.equator):
        return False
    pos = {v: i for i, v in enumerate(tgt.equator)}
    seq = [pos[a] for a in eq_img]
    q = len(tgt.equator)
    steps_fwd = sum(1 for i in range(len(seq)) if (seq[(i + 1) % len(seq)] - seq[i]) % q == 1)
    steps_bwd = sum(1 for i in range(len(seq)) if (seq[i] - seq[(i + 1) % len(seq)]) % q == 1)
    stays = sum(1 for i in range(len(seq)) if seq[(i + 1) % len(seq)] == seq[i])
    if not (stays + steps_fwd == len(seq) and steps_fwd == q) and not (
        stays + steps_bwd == len(seq) and steps_bwd == q
    ):
        return False
    # hemispheres to opposite closed hemispheres
    for v in range(src.n):
        h = src.hemisphere_of[v]
        if h == EQUATOR:
            if tgt.hemisphere_of[f[v]] != EQUATOR:
                return False
            continue
        want = h if not pm.swapped else 1 - h
        got = tgt.hemisphere_of[f[v]]
        if got != want and got != EQUATOR:
            return False
    # cross edges land on cross edges or sphere-adjacent/equal pairs
    for i in range(src.n):
        for j in bits(src.cross_adj[i]):
            if j < i:
                continue
            a, b = f[i], f[j]
            if a == b or tgt.sphere.has_edge(a, b) or (tgt.cross_adj[a] >> b) & 1:
                continue
            return False
    # marked to marked
    for v in range(src.n):
        if src.is_marked(v) and not tgt.is_marked(f[v]):
            return False
    return True


def find_picture_map(
    source: LocalPicture, target: LocalPicture, budget: int = DEFAULT_PICTURE_BUDGET
) -> PictureMap | None:
    """Backtracking search for a map between local pictures: enumerate the
    equator alignments (rotation, direction, monotone collapse pattern) and
    the hemisphere pairing, then extend vertex by vertex over the hemisphere
    interiors.  Returns the first map found, None after exhaustion; raises
    SearchBudgetExceeded when the cumulative node budget runs out."""
    p, q = len(source.equator), len(target.equator)
    if p < q:
        return None
    tgt = target
    full_t = (1 << tgt.n) - 1
    closed = [tgt.sphere.adj[v] | (1 << v) for v in range(tgt.n)]
    cross_allow = [tgt.cross_adj[v] | closed[v] for v in range(tgt.n)]
    north_mask = 0
    south_mask = 0
    eq_mask_t = 0
    for v in range(tgt.n):
        if tgt.hemisphere_of[v] == NORTH:
            north_mask |= 1 << v
        elif tgt.hemisphere_of[v] == SOUTH:
            south_mask |= 1 << v
        else:
            eq_mask_t |= 1 << v
    marked_mask = tgt.marked
    interior = [v for v in range(source.n) if source.hemisphere_of[v] != EQUATOR]
    # assign better-constrained vertices first: higher sphere degree
    interior.sort(key=lambda v: -source.sphere.adj[v].bit_count())
    remaining = budget
    for direction in (1, -1):
        src_cycle = source.equator if direction == 1 else source.equator[::-1]
        for offset in range(p):
            rotated = src_cycle[offset:] + src_cycle[:offset]
            for parts in _cyclic_surjections(p, q):
                eq_assign = {}
                pos = 0
                ok = True
                for j, size in enumerate(parts):
                    a = target.equator[j]
                    for v in rotated[pos : pos + size]:
                        eq_assign[v] = a
                        if source.is_marked(v) and not tgt.is_marked(a):
                            ok = False
                            break
                    if not ok:
                        break
                    pos += size
                if not ok:
                    continue
                for swapped in (False, True):
                    cand = [0] * source.n
                    dead = False
                    for v in interior:
                        h = source.hemisphere_of[v]
                        want = h if not swapped else 1 - h
                        m = (north_mask if want == NORTH else south_mask) | eq_mask_t
                        if source.is_marked(v):
                            m &= marked_mask
                        cand[v] = m
                        if m == 0:
                            dead = True
                            break
                    if dead:
                        continue
                    preset = [-1] * source.n
                    for v, a in eq_assign.items():
                        preset[v] = a
                    for v, a in eq_assign.items():
                        for w in bits(source.sphere.adj[v]):
                            if preset[w] < 0:
                                cand[w] &= closed[a]
                                if cand[w] == 0:
                                    dead = True
                                    break
                        if dead:
                            break
                    if dead:
                        continue
                    status, assignment, nodes = kernels.match_maps(
                        source.n,
                        tgt.n,
                        [list(source.sphere.adj), list(source.cross_adj)],
                        [closed, cross_allow],
                        cand,
                        interior,
                        preset,
                        False,
                        remaining,
                        kernels.MODE_FIRST,
                    )
                    remaining -= nodes
                    if status == kernels.FOUND:
                        pm = PictureMap(source, target, tuple(assignment), swapped)
                        assert validate_picture_map(pm), "kernel result failed independent re-validation"
                        return pm
                    if status == kernels.BUDGET or remaining <= 0:
                        raise SearchBudgetExceeded(
                            f"picture search exceeded {budget} nodes", nodes=budget - max(remaining, 0)
                        )
    return None


def extend_to_global(
    pm: PictureMap,
    source_t: Triangulation,
    target_t: Triangulation,
) -> VertexMap:
    """Extend a picture map to a global simplicial map source_t -> target_t
    of degree +-1.  The target edge must be almost-omniscient; the edge
    endpoints map coherently with the hemisphere pairing and every vertex
    outside the source picture goes to the unique non-neighbour of the target
    edge."""
    sx, sy = pm.source.origin_edge
    tx, ty = pm.target.origin_edge
    if not is_almost_omniscient(target_t, (tx, ty)):
        raise NotAlmostOmniscient(f"target edge ({tx}, {ty}) is not almost-omniscient")
    outside_t = ((1 << target_t.n) - 1) & ~(
        target_t.adj[tx] | target_t.adj[ty] | (1 << tx) | (1 << ty)
    )
    z = outside_t.bit_length() - 1
    assignment = [z] * source_t.n
    if pm.swapped:
        assignment[sx], assignment[sy] = ty, tx
    else:
        assignment[sx], assignment[sy] = tx, ty
    for i, v in enumerate(pm.source.ambient_ids):
        assignment[v] = pm.target.ambient_ids[pm.assignment[i]]
    out = VertexMap(source_t, target_t, tuple(assignment))
    if not validate(out):
        raise ExtensionNotSimplicial("picture-map extension failed simpliciality; this is a bug")
    d = degree(out)
    if abs(d) != 1:
        raise ExtensionNotSimplicial(f"picture-map extension has degree {d}, expected +-1")
    return VertexMap(source_t, target_t, tuple(assignment), verified_degree=d)


@dataclass
class Certification:
    """Outcome of the picture certifier against one target."""

    status: str  # "certified" | "not-found"
    witness: VertexMap | None = None
    source_edge: tuple[int, int] | None = None
    target_edge: tuple[int, int] | None = None
    timed_out: bool = False
    pairs_tried: int = 0


def default_targets():
    """The standard certification targets: the join of two pentagons around a
    pentagon edge, and the 12-vertex triangulation around its two
    long-link edges."""
    from .generators import t10, t12

    return [(t10(), [(1, 2)]), (t12(), [(4, 7), (5, 7)])]


def certify_dominance(
    t: Triangulation,
    targets: Sequence[tuple[Triangulation, Sequence[tuple[int, int]]]] | None = None,
    budget: int = DEFAULT_PICTURE_BUDGET,
    check_sphere: bool = True,
) -> list[Certification]:
    """For every edge of t, try to map its picture onto each target picture;
    any success certifies dominance of that target via an explicit validated
    degree-+-1 map.  'not-found' may be a false negative.  Timeouts degrade
    to not-found and are flagged."""
    if check_sphere:
        v = verify_sphere(t, 3)
        if not v:
            raise NotFlag(f"certifier needs a flag 3-sphere: {v.reason}")
    if targets is None:
        targets = default_targets()
    prepared = []
    for target_t, edges in targets:
        pics = []
        for te in edges:
            if not is_almost_omniscient(target_t, te):
                raise NotAlmostOmniscient(f"target edge {te} is not almost-omniscient")
            pics.append((te, extract(target_t, te)))
        prepared.append((target_t, pics))
    results = [Certification("not-found") for _ in prepared]
    source_pics: dict[tuple[int, int], LocalPicture] = {}
    for edge in t.edges():
        if all(r.status == "certified" for r in results):
            break
        for idx, (target_t, pics) in enumerate(prepared):
            res = results[idx]
            if res.status == "certified":
                continue
            for te, tpic in pics:
                if edge not in source_pics:
                    source_pics[edge] = extract(t, edge)
                spic = source_pics[edge]
                if len(spic.equator) < len(tpic.equator):
                    continue
                res.pairs_tried += 1
                try:
                    pm = find_picture_map(spic, tpic, budget=budget)
                except SearchBudgetExceeded:
                    res.timed_out = True
                    continue
                if pm is None:
                    continue
                witness = extend_to_global(pm, t, target_t)
                results[idx] = Certification("certified", witness, edge, te, res.timed_out, res.pairs_tried)
                break
    return results
