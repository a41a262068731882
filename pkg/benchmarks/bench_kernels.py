"""Benchmark the compiled kernels against the pure-Python fallback on the
three workloads that dominate pipeline runtime: the exhaustive dominance
search, picture-style constrained matching, and non-square edge scanning.

Run:  python benchmarks/bench_kernels.py
"""

import random
import time

from flagsphere import generators as G
from flagsphere.complexes import collapse_edge, subdivide_edge
from flagsphere.kernels import implementations
from flagsphere.maps import orient
from flagsphere.pictures import extract


def time_call(fn, *args, repeat=3, **kwargs):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, result


def dominance_args(source, target, mode):
    return dict(
        ns=source.n,
        nt=target.n,
        adj_types=[list(source.adj)],
        allow_types=[[target.adj[v] | (1 << v) for v in range(target.n)]],
        cand0=[(1 << target.n) - 1] * source.n,
        order=list(range(source.n)),
        preset=[-1] * source.n,
        require_surjective=True,
        budget=10**9,
        mode=mode,
        src_faces=source.top_faces(),
        src_signs=list(orient(source)),
        tgt_faces=target.top_faces(),
        tgt_signs=list(orient(target)),
    )


def picture_args(t, edge):
    pic = extract(t, edge)
    closed = [pic.sphere.adj[v] | (1 << v) for v in range(pic.n)]
    cross_allow = [pic.cross_adj[v] | closed[v] for v in range(pic.n)]
    interior = [v for v in range(pic.n) if pic.hemisphere_of[v] != 2]
    preset = [v if pic.hemisphere_of[v] == 2 else -1 for v in range(pic.n)]
    return dict(
        ns=pic.n,
        nt=pic.n,
        adj_types=[list(pic.sphere.adj), list(pic.cross_adj)],
        allow_types=[closed, cross_allow],
        cand0=[(1 << pic.n) - 1] * pic.n,
        order=interior,
        preset=preset,
        require_surjective=False,
        budget=10**8,
        mode=0,
    )


def walk_state(n_subdivisions=60, seed=7):
    rng = random.Random(seed)
    cur = G.t10()
    for _ in range(n_subdivisions):
        edges = cur.edges()
        cur = subdivide_edge(cur, edges[rng.randrange(len(edges))])
    return cur


def main():
    impls = implementations()
    if "c" not in impls:
        print("compiled kernels not built; install with `pip install -e . --no-build-isolation`")
    t10, t12 = G.t10(), G.t12()
    big = walk_state()
    d = G.double_along_vertex(t12, 0)

    workloads = [
        ("dominance T12->T10 (exhaustion)", "match_maps", dominance_args(t12, t10, 1)),
        ("dominance bary-like 14v self-map", "match_maps", dominance_args(G.double_along_vertex(t12, 0), t12, 2)),
        ("picture matching (doubled T12)", "match_maps", picture_args(d, d.edges()[0])),
        (f"nonsquare scan n={big.n}", "nonsquare_edges", None),
    ]
    print(f"{'workload':44s} {'python':>12s} {'c':>12s} {'speedup':>8s}")
    for label, fn_name, args in workloads:
        times = {}
        check = {}
        for name, impl in impls.items():
            fn = getattr(impl, fn_name)
            if fn_name == "nonsquare_edges":
                times[name], check[name] = time_call(fn, big.n, list(big.adj))
            else:
                times[name], check[name] = time_call(fn, **args)
        if len(check) == 2:
            assert check["python"] == check["c"], f"backend mismatch on {label}"
        py = times.get("python", float("nan"))
        cc = times.get("c", float("nan"))
        ratio = py / cc if "c" in times else float("nan")
        print(f"{label:44s} {py*1000:9.2f} ms {cc*1000:9.3f} ms {ratio:7.0f}x")


if __name__ == "__main__":
    main()
