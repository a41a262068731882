import random

import pytest

from flagsphere import kernels
from flagsphere import generators as G
from flagsphere.catalog import Catalog, CatalogRecord, StatsWriter, CATALOG_HEADER, STATS_HEADER
from flagsphere.complexes import verify_sphere
from flagsphere.errors import ParseError
from flagsphere.generators import gamma2
from flagsphere.maps import canonical_form, is_isomorphic
from flagsphere.search import (
    SearchConfig,
    check_and_record,
    run,
    simplify_to_squares,
    walk_step,
)


class TestWalkStep:
    def test_zero_subdivisions_invalid(self):
        with pytest.raises(ValueError):
            SearchConfig(subdivisions=0)

    def test_window_bounds(self):
        with pytest.raises(ValueError):
            SearchConfig(window_low=6)
        with pytest.raises(ValueError):
            SearchConfig(window_high=300)

    def test_step_preserves_sphere(self, t10):
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        rng = random.Random(0)
        cur = t10
        for _ in range(12):
            cur = walk_step(cur, cfg, rng, control_vertices=20, control_gamma2=1)
            assert verify_sphere(cur, 3)

    def test_attempt_counts(self, t10):
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        # below window: K-1 = 2 collapses against 3 subdivisions, net +1
        rng = random.Random(1)
        out = walk_step(t10, cfg, rng, control_vertices=10, control_gamma2=0)
        assert out.n == t10.n + 1


class TestSimplify:
    def test_t12_fixed_point(self, t12):
        rng = random.Random(0)
        assert simplify_to_squares(t12, rng) == t12

    def test_octa3_fixed_point(self, octa3):
        rng = random.Random(0)
        assert simplify_to_squares(octa3, rng) == octa3

    def test_suspension_drains_to_gamma2_zero(self, octa2):
        s = G.suspension(octa2)
        rng = random.Random(5)
        out = simplify_to_squares(s, rng)
        assert gamma2(out) == 0
        assert not kernels.nonsquare_edges(out.n, out.adj)

    def test_gamma2_never_increases(self, t10):
        rng = random.Random(7)
        cur = t10
        cfg = SearchConfig(iterations=1, seed=7, catalog_path=None)
        for _ in range(8):
            cur = walk_step(cur, cfg, rng, control_vertices=20, control_gamma2=2)
        g_before = gamma2(cur)
        out = simplify_to_squares(cur, rng)
        assert gamma2(out) <= g_before


class TestCheckAndRecord:
    def test_t12_record(self, t12):
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        catalog = Catalog(None)
        rec = check_and_record(t12, catalog, cfg, iteration=5)
        assert rec.gamma2 == 1
        assert rec.t10 == "none" and rec.t12 == "certified"
        assert rec.first_seen == 5 and rec.hits == 1

    def test_octa3_skipped(self, octa3):
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        catalog = Catalog(None)
        rec = check_and_record(octa3, catalog, cfg, iteration=1)
        assert rec.gamma2 == 0
        assert rec.t10 == "skipped" and rec.t12 == "skipped"
        assert not rec.neither

    def test_repeat_increments_hits(self, t12):
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        catalog = Catalog(None)
        check_and_record(t12, catalog, cfg, iteration=1)
        rec = check_and_record(t12, catalog, cfg, iteration=9)
        assert rec.hits == 2 and rec.first_seen == 1
        assert len(catalog) == 1


class TestCatalogFile:
    def test_round_trip(self, tmp_path, t12, octa3):
        path = tmp_path / "cat.log"
        cfg = SearchConfig(iterations=1, seed=0, catalog_path=None)
        c = Catalog(str(path))
        check_and_record(t12, c, cfg, 1)
        check_and_record(octa3, c, cfg, 2)
        check_and_record(t12, c, cfg, 3)
        c.flush()
        c.close()
        again = Catalog(str(path))
        assert len(again) == 2
        key = canonical_form(t12).hex_key()
        assert again.records[key].hits == 2
        assert again.records[key].gamma2 == 1
        again.close()

    def test_header_required(self, tmp_path):
        path = tmp_path / "bad.log"
        path.write_text("not a header\n")
        with pytest.raises(ParseError):
            Catalog(str(path))

    def test_gamma2_recomputed_on_load(self, tmp_path):
        good = CatalogRecord("4:3c", 4, 4, 0, "skipped", "skipped", 1, 1)
        assert CatalogRecord.parse(good.line(), 2) == good
        forged = good.line().replace(" 0 ", " 5 ", 1)
        with pytest.raises(ParseError):
            CatalogRecord.parse(forged, 2)  # gamma2 5 != 16 - 20 + 4

    def test_stats_format(self, tmp_path):
        path = tmp_path / "stats.csv"
        w = StatsWriter(str(path))
        w.note(12, True)
        w.note(12, False)
        w.note(14, True)
        w.close()
        lines = path.read_text().splitlines()
        assert lines[0] == STATS_HEADER
        assert lines[1] == "vertex_count,encounter_index,cumulative_distinct"
        assert lines[2:] == ["12,1,1", "12,2,1", "14,1,1"]


class TestRun:
    def test_zero_iterations(self, tmp_path):
        cfg = SearchConfig(iterations=0, seed=1, catalog_path=str(tmp_path / "c.log"))
        summary = run(cfg)
        assert summary.encounters == 0 and summary.by_vertex_count == {}

    def test_determinism(self, tmp_path):
        paths = []
        for tag in ("a", "b"):
            cat = tmp_path / f"{tag}.log"
            stats = tmp_path / f"{tag}.csv"
            cfg = SearchConfig(
                iterations=40, seed=123, catalog_path=str(cat), stats_path=str(stats)
            )
            run(cfg)
            paths.append((cat.read_bytes(), stats.read_bytes()))
        assert paths[0] == paths[1]

    def test_small_run_finds_octahedron(self, tmp_path, octa3):
        cfg = SearchConfig(iterations=150, seed=7, catalog_path=None)
        summary = run(cfg)
        assert summary.neither_keys == []
        # the unique gamma2 = 0 record is the octahedral sphere
        assert summary.gamma2_zero_keys == [canonical_form(octa3).hex_key()]

    def test_resume_accumulates(self, tmp_path):
        cat = tmp_path / "c.log"
        cfg = SearchConfig(iterations=25, seed=3, catalog_path=str(cat))
        run(cfg)
        first = Catalog(str(cat))
        hits1 = sum(r.hits for r in first)
        first.close()
        cfg2 = SearchConfig(iterations=25, seed=4, catalog_path=str(cat))
        run(cfg2)
        second = Catalog(str(cat))
        hits2 = sum(r.hits for r in second)
        second.close()
        assert hits2 == hits1 + 25

    def test_workers_merge(self, tmp_path):
        cat = tmp_path / "w.log"
        cfg = SearchConfig(iterations=30, seed=11, catalog_path=str(cat), workers=2)
        summary = run(cfg)
        assert summary.iterations == 30
        c = Catalog(str(cat))
        assert sum(r.hits for r in c) == 30
        c.close()
