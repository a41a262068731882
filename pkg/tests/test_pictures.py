import pytest

from flagsphere import generators as G
from flagsphere.complexes import verify_sphere
from flagsphere.errors import EdgeNotPresent, NotAlmostOmniscient, SearchBudgetExceeded
from flagsphere.maps import degree, dominates_bruteforce, validate
from flagsphere.pictures import (
    EQUATOR,
    NORTH,
    SOUTH,
    certify_dominance,
    default_targets,
    extend_to_global,
    extract,
    find_picture_map,
    is_almost_omniscient,
    validate_picture_map,
)


class TestExtract:
    def test_t10_pentagon_edge(self, t10):
        pic = extract(t10, (1, 2))
        assert pic.n == 7
        assert len(pic.equator) == 5
        assert pic.marked == (1 << pic.n) - 1  # every vertex marked
        assert all(c == 0 for c in pic.cross_adj)  # no cross edges
        assert verify_sphere(pic.sphere, 2)

    def test_t12_edge_47(self, t12):
        pic = extract(t12, (4, 7))
        marked_ambient = sorted(pic.ambient_ids[i] for i in range(pic.n) if pic.is_marked(i))
        assert marked_ambient == [0, 2, 3, 5, 6, 8]
        assert len(pic.equator) == 5
        assert verify_sphere(pic.sphere, 2)

    def test_octa3_edge(self, octa3):
        pic = extract(octa3, (0, 2))
        assert len(pic.equator) == 4
        hemis = [pic.hemisphere_of.count(h) for h in (NORTH, SOUTH, EQUATOR)]
        assert hemis == [1, 1, 4]

    def test_equator_is_edge_link(self, t12):
        for e in [(4, 7), (5, 7), (4, 5)]:
            pic = extract(t12, e)
            assert len(pic.equator) == (t12.adj[e[0]] & t12.adj[e[1]]).bit_count()
            assert len(pic.equator) >= 4

    def test_cross_graph_bipartite(self, t12):
        for e in t12.edges():
            pic = extract(t12, e)
            for i in range(pic.n):
                for j in range(pic.n):
                    if (pic.cross_adj[i] >> j) & 1:
                        assert {pic.hemisphere_of[i], pic.hemisphere_of[j]} == {NORTH, SOUTH}

    def test_missing_edge(self, t10):
        with pytest.raises(EdgeNotPresent):
            extract(t10, (0, 2))


class TestAlmostOmniscient:
    def test_t10(self, t10):
        assert is_almost_omniscient(t10, (1, 2))

    def test_t12(self, t12):
        assert is_almost_omniscient(t12, (4, 7))
        assert is_almost_omniscient(t12, (5, 7))
        assert not is_almost_omniscient(t12, (4, 5))
        assert not is_almost_omniscient(t12, (4, 10))

    def test_octa3_never(self, octa3):
        assert all(not is_almost_omniscient(octa3, e) for e in octa3.edges())


class TestPictureMaps:
    def test_identity_picture_map(self, t10):
        pic = extract(t10, (1, 2))
        pm = find_picture_map(pic, pic)
        assert pm is not None and validate_picture_map(pm)

    def test_equator_too_short(self, octa3, t10):
        src = extract(octa3, (0, 2))  # square equator
        tgt = extract(t10, (1, 2))  # pentagon equator
        assert find_picture_map(src, tgt) is None

    def test_barycentric_d4_maps_onto_t10_picture(self, boundary_d4, t10):
        b = G.barycentric_subdivision(boundary_d4)
        tgt = extract(t10, (1, 2))
        found = None
        for e in b.edges():
            pic = extract(b, e)
            if len(pic.equator) < 5:
                continue
            pm = find_picture_map(pic, tgt)
            if pm is not None:
                found = (e, pm)
                break
        assert found is not None
        e, pm = found
        g = extend_to_global(pm, b, t10)
        assert validate(g) and abs(g.verified_degree) == 1

    def test_budget(self, t12):
        pic = extract(t12, (4, 7))
        with pytest.raises(SearchBudgetExceeded):
            find_picture_map(pic, pic, budget=2)


class TestExtension:
    def test_identity_extension_degree(self, t10):
        pic = extract(t10, (1, 2))
        pm = find_picture_map(pic, pic)
        g = extend_to_global(pm, t10, t10)
        assert abs(g.verified_degree) == 1

    def test_extension_needs_almost_omniscient_target(self, octa3):
        pic = extract(octa3, (0, 2))
        pm = find_picture_map(pic, pic)
        assert pm is not None
        with pytest.raises(NotAlmostOmniscient):
            extend_to_global(pm, octa3, octa3)

    def test_every_extension_is_unit_degree(self, t12):
        # all self-certifications of t12 through its two almost-omniscient
        # edge orbits must extend to unit-degree maps
        for te in [(4, 7), (5, 7)]:
            tgt = extract(t12, te)
            for se in [(4, 7), (5, 7)]:
                pm = find_picture_map(extract(t12, se), tgt)
                if pm is None:
                    continue
                g = extend_to_global(pm, t12, t12)
                assert abs(g.verified_degree) == 1


class TestCertify:
    def test_t12_against_default_targets(self, t12):
        res = certify_dominance(t12)
        assert res[0].status == "not-found"  # consistent with basicness
        assert res[1].status == "certified"
        assert abs(res[1].witness.verified_degree) == 1

    def test_octa3(self, octa3):
        res = certify_dominance(octa3)
        assert [r.status for r in res] == ["not-found", "not-found"]

    def test_double_t12_certifies_t12(self, t12):
        d = G.double_along_vertex(t12, 0)
        res = certify_dominance(d)
        assert res[1].status == "certified"
        assert validate(res[1].witness)

    def test_subdivided_t10_certifies_t10(self, t10):
        from flagsphere.complexes import subdivide_edge

        b = subdivide_edge(t10, (0, 5))
        res = certify_dominance(b, targets=[(t10, [(1, 2)])])
        assert res[0].status == "certified"

    def test_no_false_positives_vs_oracle(self, t12, t10, octa3):
        """Certification implies brute-force dominance on the small corpus."""
        corpus = [octa3, t12, G.suspension(G.octahedral_sphere(2))]
        from flagsphere.complexes import subdivide_edge

        corpus.append(subdivide_edge(t10, (0, 1)))
        targets = default_targets()
        for t in corpus:
            for (target, edges), res in zip(targets, certify_dominance(t)):
                if res.status == "certified":
                    oracle = dominates_bruteforce(t, target)
                    assert oracle is not None and oracle.verified_degree != 0
