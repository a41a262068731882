"""Randomized exploration of flag 3-sphere triangulations: subdivide,
collapse, simplify until every edge lies in a square, then check gamma_2,
certify dominance through local pictures, and deduplicate into the catalog.
A fixed seed makes single-process runs byte-reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from . import kernels
from .catalog import Catalog, CatalogRecord, StatsWriter
from .complexes import MAX_VERTICES, Triangulation, collapse_edge, subdivide_edge, verify_sphere
from .errors import FlagsphereError
from .generators import gamma2, t10
from .maps import canonical_form
from .pictures import certify_dominance, default_targets


@dataclass
class SearchConfig:
    iterations: int = 10**6
    subdivisions: int = 3  # K
    window_low: int = 18
    window_high: int = 30
    gamma2_bias_threshold: int = 4
    picture_budget: int = 10**7
    seed: int = 0
    catalog_path: str | None = None
    stats_path: str | None = None
    targets: str = "both"  # both | t10 | t12
    workers: int = 1
    verify_each: bool = True  # re-verify the 3-sphere property on every record
    # hard brake on the *walk* complex: above this size the stronger collapse
    # count applies regardless of the window signal, keeping the walk safely
    # under the vertex capacity
    walk_size_guard: int = 64

    def __post_init__(self):
        if self.window_low < 8:
            raise ValueError("window_low must be at least 8 (no smaller flag 3-sphere exists)")
        if self.window_high > MAX_VERTICES:
            raise ValueError(f"window_high exceeds vertex capacity {MAX_VERTICES}")
        if self.subdivisions < 1:
            raise ValueError("subdivisions (K) must be >= 1")
        if self.targets not in ("both", "t10", "t12"):
            raise ValueError("targets must be both, t10 or t12")

    def target_list(self):
        pairs = default_targets()
        if self.targets == "t10":
            return pairs[:1]
        if self.targets == "t12":
            return pairs[1:]
        return pairs


@dataclass
class SearchSummary:
    iterations: int = 0
    new_records: int = 0
    encounters: int = 0
    by_vertex_count: dict = field(default_factory=dict)
    neither_keys: list = field(default_factory=list)
    gamma2_zero_keys: list = field(default_factory=list)
    certified_t10: int = 0
    certified_t12: int = 0
    timeouts: int = 0


def _pick_collapse_edge(t: Triangulation, biased: bool, rng: random.Random):
    """A random collapsible (non-square) edge: uniform normally, uniform
    among those with the biggest links when biased (which steers gamma_2
    down)."""
    candidates = kernels.nonsquare_edges(t.n, t.adj)
    if not candidates:
        return None
    if not biased:
        return candidates[rng.randrange(len(candidates))]
    sizes = [(t.adj[x] & t.adj[y]).bit_count() for x, y in candidates]
    biggest = max(sizes)
    pool = [e for e, s in zip(candidates, sizes) if s == biggest]
    return pool[rng.randrange(len(pool))]


def walk_step(
    t: Triangulation,
    cfg: SearchConfig,
    rng: random.Random,
    control_vertices: int | None = None,
    control_gamma2: int | None = None,
) -> Triangulation:
    """One walk iteration: K uniform-random edge subdivisions, then K'
    attempted collapses of non-square edges, where K' is K+1 above the vertex
    window, K-1 (at least 0) below it, and K inside it.

    Both steering inputs come from the previous *simplified* complex when
    driven by run(): its vertex count picks K', and its gamma_2 decides
    whether collapses are uniform (at or below the bias threshold) or
    restricted to biggest-link edges (above it, pulling gamma_2 back down).
    Collapses stop early when collapsible edges run out."""
    control = t.n if control_vertices is None else control_vertices
    g2 = gamma2(t) if control_gamma2 is None else control_gamma2
    biased = g2 > cfg.gamma2_bias_threshold
    cur = t
    for _ in range(cfg.subdivisions):
        edges = cur.edges()
        cur = subdivide_edge(cur, edges[rng.randrange(len(edges))])
    if control > cfg.window_high or t.n > cfg.walk_size_guard:
        attempts = cfg.subdivisions + 1
    elif control < cfg.window_low:
        attempts = max(cfg.subdivisions - 1, 0)
    else:
        attempts = cfg.subdivisions
    for _ in range(attempts):
        edge = _pick_collapse_edge(cur, biased, rng)
        if edge is None:
            break
        cur, _ = collapse_edge(cur, edge)
    return cur


def simplify_to_squares(t: Triangulation, rng: random.Random) -> Triangulation:
    """Collapse uniformly-random non-square edges until every edge lies in a
    square.  gamma_2 never increases along the way (edge links have at least
    4 vertices)."""
    cur = t
    g = gamma2(cur)
    while True:
        candidates = kernels.nonsquare_edges(cur.n, cur.adj)
        if not candidates:
            return cur
        cur, _ = collapse_edge(cur, candidates[rng.randrange(len(candidates))])
        g2 = gamma2(cur)
        assert g2 <= g, "gamma_2 increased along a non-square collapse"
        g = g2


def check_and_record(
    t: Triangulation,
    catalog: Catalog,
    cfg: SearchConfig,
    iteration: int,
    stats: StatsWriter | None = None,
) -> CatalogRecord:
    """Canonicalize a simplified triangulation and upsert it.  New records
    with gamma_2 > 0 are certified against the configured targets; gamma_2
    must be >= 0 (a violation would be a bug, not a discovery)."""
    assert not kernels.nonsquare_edges(t.n, t.adj), "record must have every edge in a square"
    g2 = gamma2(t)
    if g2 < 0:
        raise FlagsphereError(f"gamma_2 = {g2} < 0 on a flag 3-sphere; this is a bug, not a discovery")
    key = canonical_form(t).hex_key()
    existing = catalog.records.get(key)
    if existing is not None:
        # isomorphic to an already-verified record: bump hits only
        stored, _ = catalog.upsert(replace(existing, hits=1))
        if stats:
            stats.note(t.n, False)
        return stored
    if cfg.verify_each:
        v = verify_sphere(t, 3)
        if not v:
            raise FlagsphereError(f"walk produced a non-sphere: {v.reason}")
    verdicts = {"t10": "skipped", "t12": "skipped"}
    if g2 > 0:
        pairs = cfg.target_list()
        results = certify_dominance(t, pairs, budget=cfg.picture_budget, check_sphere=False)
        names = ["t10", "t12"] if cfg.targets == "both" else [cfg.targets]
        for name, res in zip(names, results):
            if res.status == "certified":
                verdicts[name] = "certified"
            elif res.timed_out:
                verdicts[name] = "timeout"
            else:
                verdicts[name] = "none"
    rec = CatalogRecord(key, t.n, t.n_edges, g2, verdicts["t10"], verdicts["t12"], iteration, 1)
    stored, new = catalog.upsert(rec)
    if stats:
        stats.note(t.n, new)
    return stored


def _run_single(cfg: SearchConfig, catalog: Catalog, stats: StatsWriter | None) -> SearchSummary:
    rng = random.Random(cfg.seed)
    summary = SearchSummary()
    current = t10()
    control = current.n
    control_g2 = gamma2(current)
    for it in range(1, cfg.iterations + 1):
        current = walk_step(current, cfg, rng, control_vertices=control, control_gamma2=control_g2)
        simplified = simplify_to_squares(current, rng)
        control = simplified.n
        control_g2 = gamma2(simplified)
        before = len(catalog)
        rec = check_and_record(simplified, catalog, cfg, it, stats)
        summary.encounters += 1
        if len(catalog) > before:
            summary.new_records += 1
            if rec.gamma2 == 0:
                summary.gamma2_zero_keys.append(rec.key)
            if rec.t10 == "certified":
                summary.certified_t10 += 1
            if rec.t12 == "certified":
                summary.certified_t12 += 1
            if "timeout" in (rec.t10, rec.t12):
                summary.timeouts += 1
            if rec.neither:
                summary.neither_keys.append(rec.key)
    summary.iterations = cfg.iterations
    summary.by_vertex_count = catalog.by_vertex_count()
    return summary


def _worker(args):
    cfg_dict, worker_index = args
    cfg = SearchConfig(**cfg_dict)
    cfg.catalog_path = None
    cfg.stats_path = None
    cfg.seed = cfg.seed + worker_index
    cfg.workers = 1
    catalog = Catalog(None)
    summary = _run_single(cfg, catalog, None)
    return [rec.__dict__ for rec in catalog.records.values()], summary.neither_keys


def run(cfg: SearchConfig) -> SearchSummary:
    """Execute the full pipeline.  With workers > 1, independent walkers run
    on derived seeds (seed + worker index) and their records merge into one
    catalog; per-walker streams stay deterministic, the merged catalog is
    order-independent as a set, and the stats CSV is only written
    single-process."""
    catalog = Catalog(cfg.catalog_path)
    if cfg.workers <= 1:
        stats = StatsWriter(cfg.stats_path)
        try:
            summary = _run_single(cfg, catalog, stats)
        finally:
            stats.close()
            catalog.flush()
            catalog.close()
        return summary
    import multiprocessing as mp

    base = dict(cfg.__dict__)
    per = cfg.iterations // cfg.workers
    base["iterations"] = per
    summary = SearchSummary(iterations=per * cfg.workers)
    with mp.Pool(cfg.workers) as pool:
        for records, neither in pool.map(_worker, [(base, i) for i in range(cfg.workers)]):
            for rd in records:
                rec = CatalogRecord(**rd)
                before = len(catalog)
                stored, new = catalog.upsert(rec)
                if len(catalog) > before:
                    summary.new_records += 1
                summary.encounters += rec.hits
            summary.neither_keys.extend(k for k in neither if k not in summary.neither_keys)
    summary.by_vertex_count = catalog.by_vertex_count()
    summary.certified_t10 = sum(1 for r in catalog if r.t10 == "certified")
    summary.certified_t12 = sum(1 for r in catalog if r.t12 == "certified")
    summary.gamma2_zero_keys = [r.key for r in catalog if r.gamma2 == 0]
    catalog.flush()
    catalog.close()
    return summary
