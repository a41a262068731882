"""Bitset-backed finite simplicial complexes of dimension at most 3.

A Triangulation stores its 1-skeleton as one Python-int bitmask per vertex.
Flag complexes (clique complexes of their 1-skeleton) never materialize
faces; explicit complexes carry a maximal-face list.  Values are immutable:
every move returns a new Triangulation, so instances are safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .errors import (
    DegenerateComplex,
    DimensionOverflow,
    EdgeInSquare,
    EdgeNotPresent,
    FaceNotPresent,
    NotFlag,
    ParseError,
)

MAX_VERTICES = 128  # two 64-bit words per adjacency row; search window never approaches this


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Kind(Enum):
    FLAG = "flag"
    EXPLICIT = "simp"


@dataclass(frozen=True)
class FVector:
    """Face counts per dimension, including f[-1] = 1 for the empty face."""

    f: tuple[int, ...]  # (f_-1, f_0, ..., f_d)

    @property
    def euler(self) -> int:
        return sum((-1) ** i * c for i, c in enumerate(self.f[1:]))

    def __getitem__(self, i: int) -> int:
        return self.f[i + 1]


@dataclass(frozen=True)
class SphereVerdict:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Triangulation:
    n: int
    adj: tuple[int, ...]
    kind: Kind
    dim: int
    maximal_faces: tuple[tuple[int, ...], ...] | None = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def flag(n: int, edges: Sequence[tuple[int, int]]) -> "Triangulation":
        """Clique complex of the given 1-skeleton."""
        adj = _adjacency(n, edges)
        dim = _clique_dimension(n, adj)
        return Triangulation(n, adj, Kind.FLAG, dim)

    @staticmethod
    def explicit(n: int, faces: Sequence[Sequence[int]]) -> "Triangulation":
        """Complex given by its maximal faces (each of size <= 4).  The
        1-skeleton is derived; faces must form an antichain."""
        if n < 2:
            raise DegenerateComplex(f"need at least 2 vertices, got {n}")
        if n > MAX_VERTICES:
            raise DegenerateComplex(f"vertex capacity is {MAX_VERTICES}, got {n}")
        norm = sorted({tuple(sorted(set(f))) for f in faces})
        if not norm:
            raise DegenerateComplex("no maximal faces")
        covered = 0
        for f in norm:
            if len(f) > 4:
                raise DimensionOverflow(f"face {f} has dimension > 3")
            if f[0] < 0 or f[-1] >= n:
                raise DegenerateComplex(f"face {f} out of vertex range")
            for v in f:
                covered |= 1 << v
        if covered != (1 << n) - 1:
            raise DegenerateComplex("some vertex lies in no face")
        sets = [frozenset(f) for f in norm]
        for a, b in itertools.combinations(sets, 2):
            if a <= b or b <= a:
                raise DegenerateComplex("maximal faces must form an antichain")
        edges = set()
        for f in norm:
            edges.update(itertools.combinations(f, 2))
        adj = _adjacency(n, edges)
        dim = max(len(f) for f in norm) - 1
        return Triangulation(n, adj, Kind.EXPLICIT, dim, tuple(norm))

    def __post_init__(self):
        if self.n < 2:
            raise DegenerateComplex(f"need at least 2 vertices, got {self.n}")
        if self.n > MAX_VERTICES:
            raise DegenerateComplex(f"vertex capacity is {MAX_VERTICES}, got {self.n}")

    def __hash__(self):
        return hash((self.n, self.adj, self.kind, self.maximal_faces))

    # -- basic queries -----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i]) if i < j]

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and 0 <= i < self.n and 0 <= j < self.n and bool((self.adj[i] >> j) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def faces_of_size(self, k: int) -> list[tuple[int, ...]]:
        """All (k-1)-dimensional faces, lexicographically sorted."""
        if self.kind is Kind.FLAG:
            return _cliques(self.n, self.adj, k)
        out = {f for m in self.maximal_faces for f in itertools.combinations(m, k)}
        return sorted(out)

    def top_faces(self) -> list[tuple[int, ...]]:
        return self.faces_of_size(self.dim + 1)

    def all_faces(self) -> list[tuple[int, ...]]:
        """Every nonempty face."""
        out: list[tuple[int, ...]] = []
        for k in range(1, self.dim + 2):
            out.extend(self.faces_of_size(k))
        return out

    def has_face(self, face: Sequence[int]) -> bool:
        face = tuple(sorted(set(face)))
        if any(v < 0 or v >= self.n for v in face):
            return False
        if len(face) == 1:
            return True
        if not all(self.has_edge(a, b) for a, b in itertools.combinations(face, 2)):
            return False
        if self.kind is Kind.FLAG:
            return True
        fs = frozenset(face)
        return any(fs <= frozenset(m) for m in self.maximal_faces)

    def is_connected(self) -> bool:
        seen = 1
        stack = [0]
        while stack:
            v = stack.pop()
            fresh = self.adj[v] & ~seen
            seen |= fresh
            stack.extend(bits(fresh))
        return seen == (1 << self.n) - 1


def _adjacency(n: int, edges) -> tuple[int, ...]:
    if n < 2:
        raise DegenerateComplex(f"need at least 2 vertices, got {n}")
    if n > MAX_VERTICES:
        raise DegenerateComplex(f"vertex capacity is {MAX_VERTICES}, got {n}")
    adj = [0] * n
    for i, j in edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise DegenerateComplex(f"bad edge ({i}, {j})")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return tuple(adj)


def _cliques(n: int, adj: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """k-cliques of the 1-skeleton in lexicographic order, by intersecting
    neighbour bitsets upward."""
    if k == 1:
        return [(v,) for v in range(n)]
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def rec(allowed: int):
        if len(stack) == k:
            out.append(tuple(stack))
            return
        for v in bits(allowed):
            stack.append(v)
            rec(allowed & adj[v] & -(2 << v))
            stack.pop()

    rec((1 << n) - 1)
    return out


def _clique_dimension(n: int, adj: Sequence[int]) -> int:
    """Dimension of the clique complex; rejects dimension > 3."""
    dim = 0
    for i in range(n):
        a = adj[i] & -(2 << i)
        if a:
            dim = max(dim, 1)
            for j in bits(a):
                b = a & adj[j] & -(2 << j)
                if b:
                    dim = max(dim, 2)
                    for c in bits(b):
                        d = b & adj[c] & -(2 << c)
                        if d:
                            dim = max(dim, 3)
                            for e in bits(d):
                                if d & adj[e] & -(2 << e):
                                    raise DimensionOverflow("1-skeleton has a 5-clique; dimension would exceed 3")
    return dim


# -- operations -------------------------------------------------------------


def face_vector(t: Triangulation) -> FVector:
    f = [1]
    for k in range(1, t.dim + 2):
        f.append(len(t.faces_of_size(k)))
    return FVector(tuple(f))


def is_flag(t: Triangulation) -> bool:
    """True iff every clique of the 1-skeleton spans a face."""
    if t.kind is Kind.FLAG:
        return True
    for k in (3, 4):
        for c in _cliques(t.n, t.adj, k):
            if not t.has_face(c):
                return False
    # a 5-clique cannot span a face in dimension <= 3
    return not _cliques(t.n, t.adj, 5)


def as_flag(t: Triangulation) -> Triangulation:
    """Reinterpret as a flag complex (requires is_flag)."""
    if t.kind is Kind.FLAG:
        return t
    if not is_flag(t):
        raise NotFlag("complex is not flag")
    return Triangulation.flag(t.n, t.edges())


def link(t: Triangulation, face: Sequence[int]) -> tuple[Triangulation, tuple[int, ...]]:
    """Link of a face, re-indexed to 0..k-1.  Returns (link, original_ids)
    where original_ids[i] is the ambient vertex of link-vertex i."""
    face = tuple(sorted(set(face)))
    if not t.has_face(face):
        raise FaceNotPresent(f"face {face} not in complex")
    if t.kind is Kind.FLAG:
        m = (1 << t.n) - 1
        for v in face:
            m &= t.adj[v]
        verts = list(bits(m))
        idx = {v: i for i, v in enumerate(verts)}
        edges = [(idx[a], idx[b]) for a in verts for b in bits(t.adj[a] & m) if a < b]
        return Triangulation.flag(len(verts), edges), tuple(verts)
    fs = frozenset(face)
    lk_max: set[frozenset] = set()
    for m in t.maximal_faces:
        ms = frozenset(m)
        if fs <= ms:
            lk_max.add(ms - fs)
    lk_max = {a for a in lk_max if not any(a < b for b in lk_max)}
    verts = sorted({v for a in lk_max for v in a})
    if not verts:
        raise FaceNotPresent(f"face {face} has empty link")
    idx = {v: i for i, v in enumerate(verts)}
    faces = [sorted(idx[v] for v in a) for a in lk_max]
    return Triangulation.explicit(len(verts), faces), tuple(verts)


def squares_containing(t: Triangulation, edge: tuple[int, int]) -> list[tuple[int, int, int, int]]:
    """All squares (induced 4-cycles) through the edge, as tuples (x, y, z, w)
    with edges xy, yz, zw, wx.  Empty means the edge is collapsible while
    preserving flagness."""
    x, y = edge
    if not t.has_edge(x, y):
        raise EdgeNotPresent(f"edge {edge} not in complex")
    out = []
    x_only = t.adj[x] & ~t.adj[y] & ~(1 << y)
    y_only = t.adj[y] & ~t.adj[x] & ~(1 << x)
    for z in bits(y_only):
        for w in bits(t.adj[z] & x_only):
            out.append((x, y, z, w))
    return out


def edge_in_square(t: Triangulation, x: int, y: int) -> bool:
    """Fast existence check for squares_containing."""
    x_only = t.adj[x] & ~t.adj[y] & ~(1 << y)
    y_only = t.adj[y] & ~t.adj[x] & ~(1 << x)
    for z in bits(y_only):
        if t.adj[z] & x_only:
            return True
    return False


def subdivide_edge(t: Triangulation, edge: tuple[int, int]) -> Triangulation:
    """Insert a midpoint on an edge of a flag complex: the new vertex is
    adjacent to both endpoints and their common neighbours, and the original
    edge is removed."""
    if t.kind is not Kind.FLAG:
        raise NotFlag("edge subdivision is only supported on flag complexes")
    x, y = edge
    if not t.has_edge(x, y):
        raise EdgeNotPresent(f"edge {edge} not in complex")
    mid = t.n
    mid_mask = (t.adj[x] & t.adj[y]) | (1 << x) | (1 << y)
    adj = list(t.adj) + [mid_mask]
    adj[x] = (adj[x] & ~(1 << y)) | (1 << mid)
    adj[y] = (adj[y] & ~(1 << x)) | (1 << mid)
    for v in bits(t.adj[x] & t.adj[y]):
        adj[v] |= 1 << mid
    return Triangulation(t.n + 1, tuple(adj), Kind.FLAG, t.dim)


def collapse_edge(
    t: Triangulation, edge: tuple[int, int], require_flag_preserving: bool = True
) -> tuple[Triangulation, tuple[int, ...]]:
    """Collapse an edge of a flag complex: the higher-labelled endpoint is
    merged into the lower, ids are compacted, and the projection map
    old-vertex -> new-vertex is returned alongside the result.

    With require_flag_preserving (the default) the edge must not lie in a
    square, which by Nevo's criterion keeps the complex flag."""
    if t.kind is not Kind.FLAG:
        raise NotFlag("edge collapse is only supported on flag complexes")
    x, y = min(edge), max(edge)
    if not t.has_edge(x, y):
        raise EdgeNotPresent(f"edge {edge} not in complex")
    if require_flag_preserving and edge_in_square(t, x, y):
        raise EdgeInSquare(f"edge ({x}, {y}) lies in a square")
    proj = tuple(v - (1 if v > y else 0) if v != y else x for v in range(t.n))
    merged = (t.adj[x] | t.adj[y]) & ~(1 << x) & ~(1 << y)
    bit_x = 1 << x
    bit_y = 1 << y
    low_mask = bit_y - 1
    adj = []
    for v in range(t.n):
        if v == y:
            continue
        row = merged if v == x else t.adj[v]
        if row & bit_y and v != x:
            row = (row & ~bit_y) | bit_x
        adj.append((row & low_mask) | ((row >> (y + 1)) << y))
    if require_flag_preserving:
        # non-square collapse preserves the clique-complex dimension
        return Triangulation(t.n - 1, tuple(adj), Kind.FLAG, t.dim), proj
    return Triangulation(t.n - 1, tuple(adj), Kind.FLAG, _clique_dimension(t.n - 1, adj)), proj


def _induced_cycle_check(t: Triangulation, verts: Sequence[int]) -> bool:
    """verts span a single induced cycle of t's 1-skeleton."""
    if len(verts) < 3:
        return False
    m = 0
    for v in verts:
        m |= 1 << v
    for v in verts:
        if (t.adj[v] & m).bit_count() != 2:
            return False
    seen = 1 << verts[0]
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        fresh = t.adj[u] & m & ~seen
        seen |= fresh
        stack.extend(bits(fresh))
    return seen == m


def verify_sphere(t: Triangulation, d: int) -> SphereVerdict:
    """Combinatorial d-sphere check.

    d=1: connected 2-regular graph.  d=2: closed surface with Euler
    characteristic 2, which characterizes S^2 exactly.  d=3: connected
    pseudomanifold whose vertex links are all 2-spheres and whose Euler
    characteristic vanishes; this is 'S^3-consistent' (full recognition is
    out of scope, and unnecessary for complexes reached by moves from a known
    sphere)."""
    if t.dim != d:
        return SphereVerdict(False, f"dimension is {t.dim}, not {d}")
    if not t.is_connected():
        return SphereVerdict(False, "not connected")
    if d == 1:
        if all(a.bit_count() == 2 for a in t.adj):
            return SphereVerdict(True)
        return SphereVerdict(False, "not 2-regular")
    if d == 2:
        tris = t.faces_of_size(3)
        count: dict[tuple[int, int], int] = {}
        for tri in tris:
            for e in itertools.combinations(tri, 2):
                count[e] = count.get(e, 0) + 1
        for e in t.edges():
            if count.get(e, 0) != 2:
                return SphereVerdict(False, f"edge {e} lies in {count.get(e, 0)} triangles")
        for v in range(t.n):
            lk, _ = link(t, (v,))
            if not (lk.dim == 1 and lk.is_connected() and all(a.bit_count() == 2 for a in lk.adj)):
                return SphereVerdict(False, f"link of vertex {v} is not a circle")
        chi = t.n - t.n_edges + len(tris)
        if chi != 2:
            return SphereVerdict(False, f"Euler characteristic {chi} != 2")
        return SphereVerdict(True)
    if d == 3:
        tris = t.faces_of_size(3)
        tets = t.faces_of_size(4)
        count = {}
        for tet in tets:
            for f in itertools.combinations(tet, 3):
                count[f] = count.get(f, 0) + 1
        for tri in tris:
            if count.get(tri, 0) != 2:
                return SphereVerdict(False, f"triangle {tri} lies in {count.get(tri, 0)} tetrahedra")
        for v in range(t.n):
            lk, _ = link(t, (v,))
            sub = verify_sphere(lk, 2)
            if not sub:
                return SphereVerdict(False, f"link of vertex {v}: {sub.reason}")
        chi = t.n - t.n_edges + len(tris) - len(tets)
        if chi != 0:
            return SphereVerdict(False, f"Euler characteristic {chi} != 0")
        return SphereVerdict(True)
    return SphereVerdict(False, f"unsupported dimension {d}")


def is_suspension(t: Triangulation) -> tuple[int, int] | None:
    """Two nonadjacent vertices each adjacent to every other vertex, if any."""
    if t.kind is not Kind.FLAG:
        raise NotFlag("suspension detection is defined for flag complexes")
    full = (1 << t.n) - 1
    for u in range(t.n):
        if t.adj[u].bit_count() != t.n - 2:
            continue
        rest = full & ~t.adj[u] & ~(1 << u)
        v = rest.bit_length() - 1
        if v > u and t.adj[v] == full & ~(1 << u) & ~(1 << v):
            return (u, v)
    return None


# -- text format -------------------------------------------------------------
#
# One complex per file.  Flag complexes:
#     flag <d> <n_vertices> <n_edges>
#     i j            (one line per edge, 0-based, i < j, lexicographic)
# Explicit complexes:
#     simp <d> <n_vertices> <n_maxfaces>
#     v0 v1 ...      (one sorted maximal face per line)
# Lines starting with '#' are comments.  Round-trips are bit-exact.


def dumps_complex(t: Triangulation) -> str:
    lines = []
    if t.kind is Kind.FLAG:
        edges = t.edges()
        lines.append(f"flag {t.dim} {t.n} {len(edges)}")
        lines.extend(f"{i} {j}" for i, j in edges)
    else:
        lines.append(f"simp {t.dim} {t.n} {len(t.maximal_faces)}")
        lines.extend(" ".join(str(v) for v in f) for f in t.maximal_faces)
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> Triangulation:
    rows: list[tuple[int, list[int]]] = []
    header: tuple[int, str, list[int]] | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if header is None:
            if parts[0] not in ("flag", "simp") or len(parts) != 4:
                raise ParseError("expected header 'flag|simp <d> <n> <count>'", ln)
            try:
                nums = [int(p) for p in parts[1:]]
            except ValueError:
                raise ParseError("non-integer header field", ln) from None
            header = (ln, parts[0], nums)
            continue
        try:
            rows.append((ln, [int(p) for p in parts]))
        except ValueError:
            raise ParseError("non-integer entry", ln) from None
    if header is None:
        raise ParseError("empty file")
    _, kind, (d, n, count) = header
    if len(rows) != count:
        raise ParseError(f"expected {count} rows, found {len(rows)}", header[0])
    if kind == "flag":
        for ln, r in rows:
            if len(r) != 2 or not r[0] < r[1]:
                raise ParseError("edge line must be 'i j' with i < j", ln)
        t = Triangulation.flag(n, [tuple(r) for _, r in rows])
    else:
        t = Triangulation.explicit(n, [r for _, r in rows])
    if t.dim != d:
        raise ParseError(f"declared dimension {d}, actual {t.dim}", header[0])
    return t


def write_complex(t: Triangulation, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_complex(t))


def read_complex(path) -> Triangulation:
    with open(path) as fh:
        return loads_complex(fh.read())
