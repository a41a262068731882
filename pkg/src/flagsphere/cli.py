"""Command-line interface.

Exit codes are a stable scripting contract: 0 success / true verdict,
1 false verdict, 2 unknown (budget exhausted), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as cat
from . import davis, dim2, generators, pictures, search
from .complexes import (
    Triangulation,
    dumps_complex,
    edge_in_square,
    face_vector,
    is_flag,
    is_suspension,
    read_complex,
    verify_sphere,
    write_complex,
)
from .errors import FlagsphereError, ParseError, SearchBudgetExceeded
from .generators import gamma2
from .maps import dominates_bruteforce, dumps_map

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3


def _cmd_gen(args) -> int:
    name = args.name
    params = args.params
    try:
        if name == "t9":
            t = generators.t9()
        elif name == "t10":
            t = generators.t10()
        elif name == "t12":
            t = generators.t12()
        elif name == "octahedral":
            t = generators.octahedral_sphere(int(params[0]))
        elif name == "polygon":
            t = generators.polygon(int(params[0]))
        elif name == "join":
            t = generators.join(read_complex(params[0]), read_complex(params[1]))
        elif name == "barycentric":
            t = generators.barycentric_subdivision(read_complex(params[0]))
        elif name == "double":
            t = generators.double_along_vertex(read_complex(params[0]), int(params[1]))
        else:
            print(f"unknown generator {name!r}", file=sys.stderr)
            return EXIT_INPUT
    except (FlagsphereError, ValueError, IndexError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        write_complex(t, args.output)
    else:
        sys.stdout.write(dumps_complex(t))
    return EXIT_TRUE


def _report(t: Triangulation) -> dict:
    fv = face_vector(t)
    report = {
        "kind": t.kind.value,
        "dim": t.dim,
        "n_vertices": t.n,
        "n_edges": t.n_edges,
        "f_vector": list(fv.f),
        "flag": is_flag(t),
    }
    verdict = verify_sphere(t, t.dim)
    report["sphere"] = bool(verdict)
    report["sphere_reason"] = verdict.reason
    if report["flag"] and t.dim >= 2:
        nonsquare = [e for e in t.edges() if not edge_in_square(t, *e)]
        report["all_edges_in_squares"] = not nonsquare
        report["n_nonsquare_edges"] = len(nonsquare)
    if report["flag"] and t.dim == 3:
        report["gamma2"] = gamma2(t)
        pair = is_suspension(t) if t.kind.value == "flag" else None
        report["suspension"] = list(pair) if pair else None
    return report


def _cmd_check(args) -> int:
    try:
        t = read_complex(args.file)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = _report(t)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    return EXIT_TRUE


def _cmd_census(args) -> int:
    try:
        t = read_complex(args.file)
        c = davis.census(t)
    except (FlagsphereError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    out = {"cells_by_dim": list(c.cells_by_dim), "euler": c.euler, "gamma2": c.gamma2}
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    if args.racg:
        with open(args.racg, "w") as fh:
            fh.write(davis.racg_presentation(t))
    return EXIT_TRUE


def _cmd_dominates(args) -> int:
    try:
        source = read_complex(args.source)
        target = read_complex(args.target)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    witness = None
    try:
        if args.method == "brute":
            witness = dominates_bruteforce(
                source, target, require_unit_degree=args.unit_degree, budget=args.budget
            )
        else:
            edges = [e for e in target.edges() if pictures.is_almost_omniscient(target, e)]
            if not edges:
                print("target has no almost-omniscient edge; local method inapplicable", file=sys.stderr)
                return EXIT_UNKNOWN
            results = pictures.certify_dominance(source, [(target, edges)], budget=args.budget)
            res = results[0]
            if res.timed_out and res.status != "certified":
                print("verdict: unknown (picture searches timed out)")
                return EXIT_UNKNOWN
            witness = res.witness
    except SearchBudgetExceeded as e:
        print(f"verdict: unknown ({e})")
        return EXIT_UNKNOWN
    except FlagsphereError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if witness is None:
        print("verdict: none")
        return EXIT_FALSE
    print(f"verdict: certified (degree {witness.verified_degree})")
    if args.map_out:
        with open(args.map_out, "w") as fh:
            fh.write(dumps_map(witness))
    return EXIT_TRUE


def _cmd_pictures(args) -> int:
    try:
        t = read_complex(args.file)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    edges = t.edges() if not args.edge else [tuple(int(x) for x in args.edge.split(","))]
    for e in edges:
        pic = pictures.extract(t, e)
        print(f"# edge {e[0]},{e[1]}  almost-omniscient={pictures.is_almost_omniscient(t, e)}")
        print(f"picture {pic.n}")
        print("equator " + " ".join(str(v) for v in pic.equator))
        print("hemis " + " ".join("NSE"[h] for h in pic.hemisphere_of))
        cross = [
            f"{i},{j}" for i in range(pic.n) for j in range(i + 1, pic.n) if (pic.cross_adj[i] >> j) & 1
        ]
        print("cross " + " ".join(cross))
        print("marked " + " ".join(str(i) for i in range(pic.n) if pic.is_marked(i)))
    return EXIT_TRUE


def _cmd_reduce2d(args) -> int:
    try:
        t = read_complex(args.file)
        positive, log = dim2.positive_sv(t)
    except FlagsphereError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    for step in log:
        fvs = " ".join("(" + ",".join(map(str, fv)) + ")" for fv in step.f_vectors)
        print(f"{step.kind.value} {step.data} -> {fvs}")
    print(f"positive: {positive}")
    return EXIT_TRUE if positive else EXIT_FALSE


def _cmd_search(args) -> int:
    try:
        cfg = search.SearchConfig(
            iterations=args.iters,
            subdivisions=args.subdivisions,
            window_low=args.window[0],
            window_high=args.window[1],
            gamma2_bias_threshold=args.gamma2_threshold,
            picture_budget=args.budget,
            seed=args.seed,
            catalog_path=args.catalog,
            stats_path=args.stats,
            targets=args.targets,
            workers=args.workers,
        )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    summary = search.run(cfg)
    print(f"iterations: {summary.iterations}")
    print(f"distinct records (this catalog): {sum(summary.by_vertex_count.values())}")
    print("by vertex count:")
    for n, c in sorted(summary.by_vertex_count.items()):
        print(f"  {n}: {c}")
    if summary.gamma2_zero_keys:
        print(f"gamma2=0 records: {len(summary.gamma2_zero_keys)}")
    if summary.neither_keys:
        print("NEITHER-DOMINATING RECORDS FOUND (candidate new minimal triangulations):", file=sys.stderr)
        for key in summary.neither_keys:
            print(f"  {key}", file=sys.stderr)
    return EXIT_TRUE


def _cmd_catalog_stats(args) -> int:
    try:
        c = cat.Catalog(args.catalog)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    counts = c.by_vertex_count()
    if args.format == "json":
        out = {
            "records": len(c),
            "by_vertex_count": counts,
            "neither": [r.key for r in c.neither_records()],
        }
        print(json.dumps(out, indent=2))
    else:
        print(f"records: {len(c)}")
        for n, k in counts.items():
            print(f"  {n}: {k}")
        for r in c.neither_records():
            print(f"neither: {r.line()}")
    c.close()
    return EXIT_TRUE


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="flagsphere", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a named triangulation")
    p.add_argument("name", help="t9|t10|t12|octahedral|polygon|join|barycentric|double")
    p.add_argument("params", nargs="*", help="generator parameters")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("check", help="structural report for a complex file")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("census", help="cubical-complex cell census and Euler characteristic")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--racg", help="also write the Coxeter presentation to this path")
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("dominates", help="decide whether SOURCE admits a nonzero-degree map onto TARGET")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--method", choices=("brute", "local"), default="brute")
    p.add_argument("--unit-degree", action="store_true", help="require |degree| = 1")
    p.add_argument("--budget", type=int, default=10**9)
    p.add_argument("--map-out", help="write the witness map file here")
    p.set_defaults(func=_cmd_dominates)

    p = sub.add_parser("pictures", help="dump local pictures around edges")
    p.add_argument("file")
    p.add_argument("--edge", help="single edge as 'i,j' (default: all edges)")
    p.set_defaults(func=_cmd_pictures)

    p = sub.add_parser("reduce2d", help="positivity decision for a 2-sphere, with witness log")
    p.add_argument("file")
    p.set_defaults(func=_cmd_reduce2d)

    p = sub.add_parser("search", help="randomized exploration pipeline")
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="mandatory for reproducibility")
    p.add_argument("--subdivisions", "-K", type=int, default=3)
    p.add_argument("--window", type=int, nargs=2, default=(18, 30), metavar=("LO", "HI"))
    p.add_argument("--gamma2-threshold", type=int, default=4)
    p.add_argument("--budget", type=int, default=10**7, help="picture-search node budget")
    p.add_argument("--catalog", help="catalog file (appended)")
    p.add_argument("--stats", help="novelty-curve CSV")
    p.add_argument("--targets", choices=("both", "t10", "t12"), default="both")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("catalog-stats", help="summarize a catalog file")
    p.add_argument("catalog")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_catalog_stats)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
