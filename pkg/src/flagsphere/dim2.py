"""The 2-sphere theory: valence-4 edge reductions, the positivity decision
for the associated 3-manifolds, prime decomposition along empty triangles,
degree-1 witness maps onto the 9-vertex landmark sphere, and the graph-minor
bridge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .complexes import (
    Kind,
    Triangulation,
    as_flag,
    bits,
    collapse_edge,
    face_vector,
    verify_sphere,
)
from .errors import (
    InvalidReduction,
    InvalidWitness,
    NotASphere,
    NotPositive,
    SearchBudgetExceeded,
)
from .maps import VertexMap, degree, dominates_bruteforce, is_isomorphic, validate, with_degree

DEFAULT_MINOR_BUDGET = 10**8


class StepKind(Enum):
    ELEMENTARY_REDUCTION = "elementary-reduction"
    EQUATOR_SPLIT = "equator-split"
    EMPTY_TRIANGLE_SPLIT = "empty-triangle-split"


@dataclass
class ReductionStep:
    kind: StepKind
    data: tuple  # the edge / equator / empty triangle, in input labels
    results: tuple[Triangulation, ...]
    projections: tuple[VertexMap, ...]
    f_vectors: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.f_vectors:
            self.f_vectors = tuple(face_vector(r).f for r in self.results)


def find_elementary_reduction(t: Triangulation) -> tuple[int, int] | None:
    """Lexicographically least edge whose endpoints both have valence 4 and
    whose outer vertices (the unique neighbours outside the edge's link) are
    distinct and nonadjacent; None when no reduction applies."""
    for x, y in t.edges():
        if t.degree(x) != 4 or t.degree(y) != 4:
            continue
        common = t.adj[x] & t.adj[y]
        a_mask = t.adj[x] & ~common & ~(1 << y)
        b_mask = t.adj[y] & ~common & ~(1 << x)
        if a_mask.bit_count() != 1 or b_mask.bit_count() != 1:
            continue
        a = a_mask.bit_length() - 1
        b = b_mask.bit_length() - 1
        if a != b and not t.has_edge(a, b):
            return (x, y)
    return None


def apply_elementary_reduction(t: Triangulation, edge: tuple[int, int]) -> tuple[Triangulation, VertexMap]:
    """Collapse a valence-4/valence-4 edge; returns the smaller flag 2-sphere
    and the degree-1 projection."""
    x, y = min(edge), max(edge)
    if t.kind is not Kind.FLAG:
        raise InvalidReduction("elementary reductions apply to flag complexes")
    if not (t.has_edge(x, y) and t.degree(x) == 4 and t.degree(y) == 4):
        raise InvalidReduction(f"edge ({x}, {y}) is not a valence-4/valence-4 edge")
    reduced, proj = collapse_edge(t, (x, y))
    m = VertexMap(t, reduced, proj)
    d = degree(m)
    if abs(d) != 1:
        raise InvalidReduction(f"projection degree {d}, expected +-1")
    # the sign depends on the orientation conventions fixed by orient(); the
    # projection is degree 1 after orienting the reduced sphere compatibly
    return reduced, VertexMap(t, reduced, proj, verified_degree=d)


def find_empty_triangle(t: Triangulation) -> tuple[int, int, int] | None:
    """A 3-clique of the 1-skeleton spanning no 2-face; None for flag
    complexes by definition."""
    if t.kind is Kind.FLAG:
        return None
    faces = {tri for m in t.maximal_faces for tri in itertools.combinations(m, 3)}
    for a in range(t.n):
        for b in bits(t.adj[a] & -(2 << a)):
            for c in bits(t.adj[a] & t.adj[b] & -(2 << b)):
                if (a, b, c) not in faces:
                    return (a, b, c)
    return None


def _is_tetrahedron_boundary(t: Triangulation) -> bool:
    return t.dim == 2 and t.n == 4 and t.n_edges == 6 and len(t.faces_of_size(3)) == 4


def split_empty_triangle(
    t: Triangulation, tri: tuple[int, int, int]
) -> tuple[tuple[Triangulation, VertexMap], tuple[Triangulation, VertexMap]]:
    """Cut the sphere along an empty triangle and cap each hemisphere with a
    filled triangle.  Returns both capped spheres with their degree-+-1
    projections (hemisphere interiors collapse onto one cap vertex)."""
    tri = tuple(sorted(tri))
    cut_edges = set(itertools.combinations(tri, 2))
    faces = t.faces_of_size(3)
    adjacency: dict[tuple, list[tuple]] = {}
    edge_faces: dict[tuple, list[tuple]] = {}
    for f in faces:
        for e in itertools.combinations(f, 2):
            edge_faces.setdefault(e, []).append(f)
    comp: dict[tuple, int] = {}
    color = 0
    for f in faces:
        if f in comp:
            continue
        stack = [f]
        comp[f] = color
        while stack:
            g = stack.pop()
            for e in itertools.combinations(g, 2):
                if e in cut_edges:
                    continue
                for h in edge_faces[e]:
                    if h not in comp:
                        comp[h] = color
                        stack.append(h)
        color += 1
    if color != 2:
        raise NotASphere(f"cutting along {tri} produced {color} components, expected 2")

    def cap(keep_color: int) -> tuple[Triangulation, VertexMap]:
        kept = [f for f in faces if comp[f] == keep_color]
        verts = sorted({v for f in kept for v in f} | set(tri))
        new_id = {v: i for i, v in enumerate(verts)}
        max_faces = [[new_id[v] for v in f] for f in kept]
        max_faces.append([new_id[v] for v in tri])
        capped = Triangulation.explicit(len(verts), max_faces)
        anchor = new_id[tri[0]]
        assignment = tuple(new_id.get(v, anchor) for v in range(t.n))
        m = VertexMap(t, capped, assignment)
        d = degree(m)
        assert abs(d) == 1
        return capped, VertexMap(t, capped, assignment, verified_degree=d)

    return cap(0), cap(1)


def positive_sv(t: Triangulation) -> tuple[bool, list[ReductionStep]]:
    """Decide whether the 3-manifold associated to a 2-sphere triangulation
    has positive simplicial volume.

    Algorithm: the 4-vertex sphere is negative (its manifold is S^3); a
    sphere with an empty triangle splits into two capped spheres, positive
    iff either summand is; a flag sphere reduces by valence-4 collapses
    (which preserve positivity) and is negative iff the terminal complex is
    the octahedron (whose manifold is the 3-torus)."""
    v = verify_sphere(t, 2)
    if not v:
        raise NotASphere(f"not a 2-sphere: {v.reason}")
    log: list[ReductionStep] = []
    return _positive_sv(t, log), log


def _positive_sv(t: Triangulation, log: list[ReductionStep]) -> bool:
    if _is_tetrahedron_boundary(t):
        return False
    tri = find_empty_triangle(t)
    if tri is not None:
        (t1, m1), (t2, m2) = split_empty_triangle(t, tri)
        log.append(ReductionStep(StepKind.EMPTY_TRIANGLE_SPLIT, tri, (t1, t2), (m1, m2)))
        left = _positive_sv(t1, log)
        right = _positive_sv(t2, log)
        return left or right
    cur = as_flag(t)
    while True:
        edge = find_elementary_reduction(cur)
        if edge is None:
            break
        reduced, proj = apply_elementary_reduction(cur, edge)
        log.append(ReductionStep(StepKind.ELEMENTARY_REDUCTION, edge, (reduced,), (proj,)))
        cur = reduced
    from .generators import octahedral_sphere

    return not is_isomorphic(cur, octahedral_sphere(2))


def _orientation_reversing_automorphism(t: Triangulation) -> VertexMap | None:
    try:
        return dominates_bruteforce(t, t, exact_degree=-1)
    except SearchBudgetExceeded:
        return None


def witness_map_to_t9(t: Triangulation, budget: int = 10**9) -> VertexMap:
    """A degree-1 simplicial map onto the 9-vertex landmark sphere, built by
    composing the reduction projections with an exhaustively-found terminal
    map.  Exists whenever positive_sv(t) holds."""
    from .generators import t9

    target = t9()
    pos, _ = positive_sv(t)
    if not pos:
        raise NotPositive("the associated manifold has vanishing simplicial volume")

    def build(cur: Triangulation) -> VertexMap:
        tri = find_empty_triangle(cur)
        if tri is not None:
            (t1, m1), (t2, m2) = split_empty_triangle(cur, tri)
            if _positive_sv(t1, []):
                inner, proj = t1, m1
            else:
                inner, proj = t2, m2
            return build(inner).compose(proj)
        flag_cur = as_flag(cur)
        # re-kinding an explicit complex preserves vertices; bridge by identity
        bridge = None if flag_cur is cur else VertexMap(cur, flag_cur, tuple(range(cur.n)))
        chain: list[VertexMap] = []
        while True:
            edge = find_elementary_reduction(flag_cur)
            if edge is None:
                break
            flag_cur, proj = apply_elementary_reduction(flag_cur, edge)
            chain.append(proj)
        terminal = flag_cur
        tail = dominates_bruteforce(terminal, target, require_unit_degree=True, budget=budget)
        if tail is None:
            raise NotPositive("terminal complex admits no unit-degree map; input was not positive")
        total = tail
        for proj in reversed(chain):
            total = total.compose(proj)
        if bridge is not None:
            total = total.compose(bridge)
        return total

    composed = build(t)
    d = degree(composed)
    if d == -1:
        flip = _orientation_reversing_automorphism(target)
        if flip is not None:
            composed = flip.compose(composed)
            d = degree(composed)
    if d != 1:
        # fall back to a direct exhaustive search for an exactly-degree-1 map
        direct = dominates_bruteforce(t, target, exact_degree=1, budget=budget)
        if direct is None:
            raise NotPositive("no degree-1 map found; input was not positive")
        return direct
    return with_degree(composed)


# -- graph minors ---------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    @staticmethod
    def from_edges(n: int, edges: Sequence[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for i, j in edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return Graph(n, tuple(adj))

    @staticmethod
    def from_complex(t: Triangulation) -> "Graph":
        return Graph(t.n, t.adj)

    def is_connected(self) -> bool:
        seen = 1
        stack = [0]
        while stack:
            v = stack.pop()
            fresh = self.adj[v] & ~seen
            seen |= fresh
            stack.extend(bits(fresh))
        return seen == (1 << self.n) - 1


@dataclass(frozen=True)
class MinorWitness:
    """branch_sets[v] is the connected set of host vertices contracted to
    pattern vertex v; every pattern edge is realized by some host edge
    between the two branch sets."""

    branch_sets: tuple[tuple[int, ...], ...]


def verify_minor_witness(pattern: Graph, host: Graph, w: MinorWitness) -> bool:
    if len(w.branch_sets) != pattern.n:
        return False
    seen = 0
    masks = []
    for s in w.branch_sets:
        if not s:
            return False
        m = 0
        for v in s:
            if v < 0 or v >= host.n or (seen >> v) & 1:
                return False
            seen |= 1 << v
            m |= 1 << v
        masks.append(m)
        # connectivity of the branch set
        start = s[0]
        reach = 1 << start
        stack = [start]
        while stack:
            u = stack.pop()
            fresh = host.adj[u] & m & ~reach
            reach |= fresh
            stack.extend(bits(fresh))
        if reach != m:
            return False
    if seen != (1 << host.n) - 1:
        return False
    for a in range(pattern.n):
        for b in bits(pattern.adj[a]):
            if b < a:
                continue
            if not any(host.adj[u] & masks[b] for u in w.branch_sets[a]):
                return False
    return True


def minor_witness_search(pattern: Graph, host: Graph, budget: int = DEFAULT_MINOR_BUDGET) -> MinorWitness | None:
    """Small-scale backtracking search for a partition of the host's vertices
    into connected branch sets realizing every pattern edge.  None after
    exhaustion; raises SearchBudgetExceeded on budget."""
    if not pattern.is_connected():
        raise InvalidWitness("pattern graph must be connected")
    if host.n < pattern.n:
        return None
    label = [-1] * host.n
    set_mask = [0] * pattern.n
    nodes = 0

    def feasible(depth: int) -> bool:
        unassigned = host.n - depth
        empties = sum(1 for m in set_mask if m == 0)
        if empties > unassigned:
            return False
        # each started branch set must be connectable through unassigned vertices
        free = 0
        for v in range(depth, host.n):
            free |= 1 << v
        for m in set_mask:
            if m == 0 or m & (m - 1) == 0:
                continue
            allowed = m | free
            start = m & -m
            reach = start
            stack = [start.bit_length() - 1]
            while stack:
                u = stack.pop()
                fresh = host.adj[u] & allowed & ~reach
                reach |= fresh
                stack.extend(bits(fresh))
            if m & ~reach:
                return False
        return True

    def rec(v: int) -> bool:
        nonlocal nodes
        if v == host.n:
            w = MinorWitness(tuple(tuple(bits(m)) for m in set_mask))
            return verify_minor_witness(pattern, host, w)
        for ell in range(pattern.n):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"minor search exceeded {budget} nodes", nodes=nodes)
            label[v] = ell
            set_mask[ell] |= 1 << v
            if feasible(v + 1) and rec(v + 1):
                return True
            set_mask[ell] &= ~(1 << v)
            label[v] = -1
        return False

    if rec(0):
        return MinorWitness(tuple(tuple(bits(m)) for m in set_mask))
    return None


def minor_to_map(w: MinorWitness, host_t: Triangulation, pattern_t: Triangulation) -> VertexMap:
    """The branch-set labelling as a vertex map host -> pattern.  For valid
    witnesses between 2-sphere triangulations the map is simplicial of degree
    +-1; both facts are asserted, violation meaning invalid inputs."""
    pattern = Graph.from_complex(pattern_t)
    host = Graph.from_complex(host_t)
    if not verify_minor_witness(pattern, host, w):
        raise InvalidWitness("branch sets are not a valid minor witness")
    assignment = [-1] * host_t.n
    for ell, s in enumerate(w.branch_sets):
        for v in s:
            assignment[v] = ell
    m = VertexMap(host_t, pattern_t, tuple(assignment))
    assert validate(m), "minor witness between sphere triangulations must induce a simplicial map"
    d = degree(m)
    assert abs(d) == 1
    return VertexMap(host_t, pattern_t, tuple(assignment), verified_degree=d)
