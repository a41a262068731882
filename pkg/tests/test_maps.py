import itertools
import random

import pytest

from flagsphere import generators as G
from flagsphere.complexes import Triangulation, collapse_edge, subdivide_edge
from flagsphere.errors import DimensionMismatch, NotASphere, SearchBudgetExceeded
from flagsphere.maps import (
    VertexMap,
    canonical_form,
    degree,
    dominates_bruteforce,
    dumps_map,
    identity_map,
    is_isomorphic,
    loads_map,
    orient,
    validate,
    vertex_orbits,
    with_degree,
)


class TestValidate:
    def test_identity(self, t12):
        assert validate(identity_map(t12))

    def test_constant_map(self, t12, t10):
        assert validate(VertexMap(t12, t10, (0,) * 12))

    def test_pentagon_to_square(self):
        assert validate(VertexMap(G.polygon(5), G.polygon(4), (0, 1, 2, 3, 0)))

    def test_non_simplicial(self, t10):
        # send adjacent pentagon vertices to the two nonadjacent pentagon mates
        assignment = list(range(10))
        assignment[1] = 3  # 0 ~ 1 but 0 !~ 3
        assert not validate(VertexMap(t10, t10, tuple(assignment)))

    def test_explicit_target_needs_face_containment(self, tetrahedron):
        # the bipyramid's equator triple {0,1,2} is pairwise adjacent but
        # spans no 2-face, so adjacency alone is not enough for explicit
        # targets: a face mapping onto it must be rejected
        bipyr = Triangulation.explicit(
            5, [[0, 1, 3], [1, 2, 3], [0, 2, 3], [0, 1, 4], [1, 2, 4], [0, 2, 4]]
        )
        bad = VertexMap(tetrahedron, bipyr, (0, 1, 2, 3))
        assert not validate(bad)
        good = VertexMap(tetrahedron, bipyr, (0, 1, 3, 3))
        assert validate(good)


class TestOrient:
    def test_octahedron_coherent(self, octa2):
        signs = orient(octa2)
        assert len(signs) == 8 and all(s in (-1, 1) for s in signs)

    def test_t12_orientable(self, t12):
        signs = orient(t12)
        assert len(signs) == len(t12.top_faces()) == 33

    def test_non_pseudomanifold(self):
        t = Triangulation.explicit(4, [[0, 1, 2], [1, 2, 3]])
        from flagsphere.errors import NotPseudomanifold

        with pytest.raises(NotPseudomanifold):
            orient(t)

    def test_global_sign_symmetry(self, t12):
        # negating every sign is the other coherent orientation: the degree
        # engine must give opposite values against a flipped target sphere
        p5 = G.polygon(5)
        fwd = degree(VertexMap(p5, p5, (0, 1, 2, 3, 4)))
        bwd = degree(VertexMap(p5, p5, (0, 4, 3, 2, 1)))
        assert fwd == -bwd == 1


class TestDegree:
    def test_identity(self, t12):
        assert degree(identity_map(t12)) == 1

    def test_constant_is_zero(self, t10):
        assert degree(VertexMap(t10, t10, (0,) * 10)) == 0

    def test_non_surjective_is_zero(self, t10):
        m = VertexMap(t10, t10, (0, 1, 2, 3, 4, 5, 6, 7, 8, 5))
        if validate(m):
            assert degree(m) == 0

    def test_collapse_projection_unit(self, t10):
        for e in [(0, 1), (2, 3)]:
            reduced, proj = collapse_edge(t10, e)
            assert abs(degree(VertexMap(t10, reduced, proj))) == 1

    def test_multiplicative_under_composition(self):
        p6, p5, p4 = G.polygon(6), G.polygon(5), G.polygon(4)
        f = with_degree(VertexMap(p6, p5, (0, 1, 2, 3, 4, 0)))
        g = with_degree(VertexMap(p5, p4, (0, 1, 2, 3, 0)))
        gf = with_degree(g.compose(f))
        assert gf.verified_degree == f.verified_degree * g.verified_degree

    def test_reflection_degree(self):
        p5 = G.polygon(5)
        assert degree(VertexMap(p5, p5, (0, 4, 3, 2, 1))) == -1

    def test_dimension_mismatch(self, t10, octa2):
        with pytest.raises(DimensionMismatch):
            degree(VertexMap(octa2, t10, (0,) * 6))

    def test_abs_degree_invariant_under_isomorphisms(self, t10):
        # pre/post-composition with relabelling isomorphisms preserves |degree|
        rng = random.Random(2)
        reduced, proj = collapse_edge(t10, (0, 1))
        base = abs(degree(VertexMap(t10, reduced, proj)))
        for _ in range(5):
            perm = list(range(t10.n))
            rng.shuffle(perm)
            relabeled = Triangulation.flag(
                t10.n, [tuple(sorted((perm[a], perm[b]))) for a, b in t10.edges()]
            )
            inv = [0] * t10.n
            for v, p in enumerate(perm):
                inv[p] = v
            pre = VertexMap(relabeled, t10, tuple(inv))
            composed = VertexMap(t10, reduced, proj).compose(pre)
            assert abs(degree(composed)) == base


class TestCanonicalForm:
    def test_t10_equals_pentagon_join(self, t10):
        j = G.join(G.polygon(5), G.polygon(5))
        assert canonical_form(t10).canonical_edge_list == canonical_form(j).canonical_edge_list

    def test_t12_automorphism_relabellings(self, t12):
        from flagsphere.generators import T12_REFLECTION, T12_ROTATION

        base = canonical_form(t12).canonical_edge_list
        for perm in (T12_ROTATION, T12_REFLECTION):
            edges = [tuple(sorted((perm[a], perm[b]))) for a, b in t12.edges()]
            relabeled = Triangulation.flag(12, edges)
            assert canonical_form(relabeled).canonical_edge_list == base

    def test_different_sizes_differ(self, t9, octa2):
        assert canonical_form(t9).canonical_edge_list != canonical_form(octa2).canonical_edge_list

    def test_random_relabelling_invariance(self, t12):
        rng = random.Random(0)
        base = canonical_form(t12).canonical_edge_list
        for _ in range(10):
            perm = list(range(12))
            rng.shuffle(perm)
            edges = [tuple(sorted((perm[a], perm[b]))) for a, b in t12.edges()]
            assert canonical_form(Triangulation.flag(12, edges)).canonical_edge_list == base

    def test_hex_key_round_trip(self, t12):
        key = canonical_form(t12).hex_key()
        n_str, hexpart = key.split(":")
        assert int(n_str) == 12 and int(hexpart, 16).bit_count() == 45

    def test_orbits_t10(self, t10):
        assert vertex_orbits(t10) == [list(range(10))]

    def test_non_isomorphic_same_counts(self):
        # the two 8-vertex flag 2-spheres have equal f-vectors but differ
        a, b = G.flag_sphere2_triangulations(8)
        assert a.n_edges == b.n_edges
        assert not is_isomorphic(a, b)


class TestBruteForce:
    def test_t12_not_above_t10(self, t12, t10):
        assert dominates_bruteforce(t12, t10) is None

    def test_octa2_not_above_t9(self, octa2, t9):
        assert dominates_bruteforce(octa2, t9) is None

    def test_t9_self(self, t9):
        m = dominates_bruteforce(t9, t9, require_unit_degree=True)
        assert m is not None and abs(m.verified_degree) == 1

    def test_subdivided_t10_dominates(self, t10):
        bigger = subdivide_edge(t10, (0, 1))
        m = dominates_bruteforce(bigger, t10)
        assert m is not None and m.verified_degree != 0
        assert validate(m)

    def test_budget_raises(self, t12, t10):
        with pytest.raises(SearchBudgetExceeded):
            dominates_bruteforce(t12, t10, budget=50)

    def test_without_symmetry_cut_agrees(self, t12, t10):
        assert dominates_bruteforce(t12, t10, use_target_symmetry=False) is None

    def test_exact_degree_modes(self, t10):
        plus = dominates_bruteforce(t10, t10, exact_degree=1)
        minus = dominates_bruteforce(t10, t10, exact_degree=-1)
        assert plus.verified_degree == 1 and minus.verified_degree == -1

    def test_non_sphere_rejected(self):
        path = Triangulation.flag(3, [(0, 1), (1, 2)])
        with pytest.raises(NotASphere):
            dominates_bruteforce(path, G.polygon(4))

    def test_antisymmetry_at_equal_size(self, t9):
        # dominance both ways with unit degree at equal vertex count forces
        # isomorphism; exercise on the two 8-vertex flag spheres
        a, b = G.flag_sphere2_triangulations(8)
        ab = dominates_bruteforce(a, b, require_unit_degree=True)
        ba = dominates_bruteforce(b, a, require_unit_degree=True)
        assert not (ab is not None and ba is not None) or is_isomorphic(a, b)


class TestMapFormat:
    def test_round_trip(self, t12, t10):
        m = VertexMap(t12, t10, tuple(i % 10 for i in range(12)))
        text = dumps_map(m)
        back = loads_map(text, t12, t10)
        assert back.assignment == m.assignment

    def test_header_checked(self, t12, t10):
        from flagsphere.errors import ParseError

        with pytest.raises(ParseError):
            loads_map("map 3 3\n0 -> 0\n1 -> 1\n2 -> 2\n", t12, t10)
