import itertools
import random

import pytest

from flagsphere import generators as G
from flagsphere.complexes import Triangulation, subdivide_edge, verify_sphere
from flagsphere.dim2 import (
    Graph,
    MinorWitness,
    StepKind,
    apply_elementary_reduction,
    find_elementary_reduction,
    find_empty_triangle,
    minor_to_map,
    minor_witness_search,
    positive_sv,
    split_empty_triangle,
    verify_minor_witness,
    witness_map_to_t9,
)
from flagsphere.errors import InvalidWitness, NotPositive, SearchBudgetExceeded
from flagsphere.maps import degree, dominates_bruteforce, is_isomorphic, validate


def double_subdivided_octahedron():
    """Subdivide an octahedron edge, then the resulting 4-valent half edge:
    produces a reducible flag sphere."""
    o = G.octahedral_sphere(2)
    s1 = subdivide_edge(o, (0, 2))
    mid = s1.n - 1
    s2 = subdivide_edge(s1, (0, mid))
    return s2


class TestElementaryReduction:
    def test_octahedron_none(self, octa2):
        assert find_elementary_reduction(octa2) is None

    def test_t9_none(self, t9):
        assert find_elementary_reduction(t9) is None

    def test_subdivided_has_one(self):
        t = double_subdivided_octahedron()
        edge = find_elementary_reduction(t)
        assert edge is not None
        x, y = edge
        assert t.degree(x) == 4 and t.degree(y) == 4

    def test_apply(self):
        t = double_subdivided_octahedron()
        edge = find_elementary_reduction(t)
        reduced, proj = apply_elementary_reduction(t, edge)
        assert reduced.n == t.n - 1
        assert verify_sphere(reduced, 2)
        assert abs(proj.verified_degree) == 1


class TestEmptyTriangle:
    def test_flag_none(self, t9):
        assert find_empty_triangle(t9) is None

    def test_boundary_tetrahedron_none(self, tetrahedron):
        assert find_empty_triangle(tetrahedron) is None

    def test_bipyramid(self):
        bipyr = Triangulation.explicit(
            5, [[0, 1, 3], [1, 2, 3], [0, 2, 3], [0, 1, 4], [1, 2, 4], [0, 2, 4]]
        )
        assert find_empty_triangle(bipyr) == (0, 1, 2)
        (t1, m1), (t2, m2) = split_empty_triangle(bipyr, (0, 1, 2))
        for part, m in ((t1, m1), (t2, m2)):
            assert part.n == 4 and verify_sphere(part, 2)
            assert abs(m.verified_degree) == 1


class TestPositiveSV:
    def test_octahedron_negative(self, octa2):
        pos, log = positive_sv(octa2)
        assert not pos and log == []

    def test_t9_positive(self, t9):
        pos, log = positive_sv(t9)
        assert pos

    def test_boundary_tetrahedron(self, tetrahedron):
        assert not positive_sv(tetrahedron)[0]

    def test_bipyramid_negative(self):
        bipyr = Triangulation.explicit(
            5, [[0, 1, 3], [1, 2, 3], [0, 2, 3], [0, 1, 4], [1, 2, 4], [0, 2, 4]]
        )
        pos, log = positive_sv(bipyr)
        assert not pos
        assert [s.kind for s in log] == [StepKind.EMPTY_TRIANGLE_SPLIT]

    def test_reducible_sphere(self):
        t = double_subdivided_octahedron()
        pos, log = positive_sv(t)
        assert not pos
        assert all(s.kind == StepKind.ELEMENTARY_REDUCTION for s in log)
        assert len(log) >= 1

    def test_subdivided_t9_positive(self, t9):
        t = subdivide_edge(t9, t9.edges()[0])
        assert positive_sv(t)[0]

    def test_isomorphism_invariance(self, t9):
        rng = random.Random(3)
        perm = list(range(9))
        rng.shuffle(perm)
        edges = [tuple(sorted((perm[a], perm[b]))) for a, b in t9.edges()]
        assert positive_sv(Triangulation.flag(9, edges))[0]

    def test_termination_strict_decrease(self):
        t = double_subdivided_octahedron()
        _, log = positive_sv(t)
        sizes = [t.n] + [s.results[0].n for s in log if s.kind == StepKind.ELEMENTARY_REDUCTION]
        assert all(a > b for a, b in zip(sizes, sizes[1:]))

    def test_not_a_sphere_rejected(self):
        from flagsphere.errors import NotASphere

        with pytest.raises(NotASphere):
            positive_sv(G.polygon(5))


class TestWitnessMap:
    def test_t9_identity_class(self, t9):
        w = witness_map_to_t9(t9)
        assert w.verified_degree == 1

    def test_single_subdivision(self, t9):
        t = subdivide_edge(t9, t9.edges()[0])
        w = witness_map_to_t9(t)
        assert w.verified_degree == 1 and validate(w)

    def test_negative_raises(self, octa2):
        with pytest.raises(NotPositive):
            witness_map_to_t9(octa2)

    def test_positive_nonflag(self, t9):
        # glue a tetrahedron onto one face of a positive sphere: empty
        # triangle appears, the positive summand carries the witness
        tris = [tuple(f) for f in t9.faces_of_size(3)]
        a, b, c = tris[0]
        apex = 9
        faces = [list(f) for f in tris if f != (a, b, c)]
        faces += [[a, b, apex], [a, c, apex], [b, c, apex]]
        glued = Triangulation.explicit(10, faces)
        assert verify_sphere(glued, 2)
        pos, log = positive_sv(glued)
        assert pos
        w = witness_map_to_t9(glued)
        assert w.verified_degree == 1


class TestMinors:
    def test_c4_minor_of_c5(self):
        c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        c5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        w = minor_witness_search(c4, c5)
        assert w is not None
        assert verify_minor_witness(c4, c5, w)

    def test_k5_not_minor_of_planar(self, octa2):
        k5 = Graph.from_edges(5, list(itertools.combinations(range(5), 2)))
        assert minor_witness_search(k5, Graph.from_complex(octa2)) is None

    def test_k4_minor_of_octahedron(self, octa2):
        k4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
        assert minor_witness_search(k4, Graph.from_complex(octa2)) is not None

    def test_t9_minor_of_subdivision(self, t9):
        s = subdivide_edge(t9, (0, 1))
        w = minor_witness_search(Graph.from_complex(t9), Graph.from_complex(s))
        assert w is not None

    def test_budget(self, t9):
        s = subdivide_edge(t9, (0, 1))
        with pytest.raises(SearchBudgetExceeded):
            minor_witness_search(Graph.from_complex(t9), Graph.from_complex(s), budget=5)

    def test_minor_to_map_subdivision(self, t9):
        s = subdivide_edge(t9, (0, 1))
        w = minor_witness_search(Graph.from_complex(t9), Graph.from_complex(s))
        m = minor_to_map(w, s, t9)
        assert abs(m.verified_degree) == 1 and validate(m)

    def test_identity_witness(self, t9):
        w = MinorWitness(tuple((v,) for v in range(9)))
        m = minor_to_map(w, t9, t9)
        assert abs(m.verified_degree) == 1

    def test_octahedron_in_subdivided(self, octa2):
        s = subdivide_edge(octa2, (0, 2))
        w = minor_witness_search(Graph.from_complex(octa2), Graph.from_complex(s))
        m = minor_to_map(w, s, octa2)
        assert abs(m.verified_degree) == 1

    def test_invalid_witness_rejected(self, t9):
        w = MinorWitness(tuple((v,) for v in range(8)))  # misses a vertex
        with pytest.raises(InvalidWitness):
            minor_to_map(w, t9, t9)

    def test_disconnected_branch_rejected(self, octa2):
        # {0, 1} is an antipodal (nonadjacent) pair: not connected
        sets = [(0, 1), (2,), (3,), (4, 5)]
        g = Graph.from_complex(octa2)
        assert not verify_minor_witness(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), g, MinorWitness(tuple(sets)))


class TestEquivalenceSmall:
    def test_positive_iff_dominates_t9_at_9_vertices(self, t9):
        """On every flag 2-sphere with <= 9 vertices the reduction decision
        agrees with exhaustive unit-degree dominance of the landmark sphere."""
        for n in (6, 7, 8, 9):
            for t in G.flag_sphere2_triangulations(n):
                pos, _ = positive_sv(t)
                oracle = dominates_bruteforce(t, t9, require_unit_degree=True)
                assert pos == (oracle is not None)
