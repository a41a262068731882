"""Backend parity: the compiled kernels must traverse exactly the same search
tree as the pure-Python ones (same status, same witness, same node count)."""

import itertools
import random

import pytest

from flagsphere import generators as G
from flagsphere.complexes import collapse_edge, subdivide_edge
from flagsphere.kernels import implementations
from flagsphere.maps import orient

IMPLS = implementations()
HAVE_C = "c" in IMPLS


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


def test_backends_available():
    assert "python" in IMPLS
    assert HAVE_C, "compiled kernels should be built in this environment"


@pytest.mark.skipif(not HAVE_C, reason="compiled kernels not built")
class TestParity:
    def test_dominance_cases(self, t9, t10, t12, octa3):
        cases = [
            (t12, t10, 1),
            (t10, t10, 1),
            (t12, t12, 2),
            (octa3, t10, 1),
            (t9, t9, 3),
            (t9, t9, 4),
        ]
        for s, t, mode in cases:
            results = {name: impl.match_maps(**dominance_args(s, t, mode)) for name, impl in IMPLS.items()}
            assert results["python"] == results["c"], (s.n, t.n, mode)

    def test_budget_parity(self, t12, t10):
        for budget in (1, 10, 100, 1000):
            args = dominance_args(t12, t10, 1)
            args["budget"] = budget
            assert IMPLS["python"].match_maps(**args) == IMPLS["c"].match_maps(**args)

    def test_nonsquare_parity_random_walks(self, t10):
        rng = random.Random(17)
        cur = t10
        for step in range(150):
            edges = cur.edges()
            cur = subdivide_edge(cur, edges[rng.randrange(len(edges))])
            a = IMPLS["python"].nonsquare_edges(cur.n, list(cur.adj))
            b = IMPLS["c"].nonsquare_edges(cur.n, list(cur.adj))
            assert a == b
            if a and step % 2:
                cur, _ = collapse_edge(cur, a[rng.randrange(len(a))])

    def test_first_mode_with_presets(self, t12):
        # mimic a picture-search call: two constraint types, presets, unary masks
        from flagsphere.pictures import extract

        pic = extract(t12, (4, 7))
        closed = [pic.sphere.adj[v] | (1 << v) for v in range(pic.n)]
        cross_allow = [pic.cross_adj[v] | closed[v] for v in range(pic.n)]
        interior = [v for v in range(pic.n) if pic.hemisphere_of[v] != 2]
        preset = [v if pic.hemisphere_of[v] == 2 else -1 for v in range(pic.n)]
        cand = [(1 << pic.n) - 1] * pic.n
        for v, a in enumerate(preset):
            if a >= 0:
                for w in range(pic.n):
                    if preset[w] < 0 and (pic.sphere.adj[v] >> w) & 1:
                        cand[w] &= closed[a]
        args = dict(
            ns=pic.n,
            nt=pic.n,
            adj_types=[list(pic.sphere.adj), list(pic.cross_adj)],
            allow_types=[closed, cross_allow],
            cand0=cand,
            order=interior,
            preset=preset,
            require_surjective=False,
            budget=10**6,
            mode=0,
        )
        assert IMPLS["python"].match_maps(**args) == IMPLS["c"].match_maps(**args)

    def test_randomized_instances(self):
        rng = random.Random(23)
        for trial in range(30):
            ns, nt = rng.randrange(3, 9), rng.randrange(3, 7)
            adj = [0] * ns
            for i, j in itertools.combinations(range(ns), 2):
                if rng.random() < 0.5:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
            allow = [rng.randrange(1 << nt) | 1 for _ in range(nt)]
            cand = [rng.randrange(1 << nt) | (1 << rng.randrange(nt)) for _ in range(ns)]
            args = dict(
                ns=ns,
                nt=nt,
                adj_types=[adj],
                allow_types=[allow],
                cand0=cand,
                order=list(range(ns)),
                preset=[-1] * ns,
                require_surjective=bool(rng.randrange(2)),
                budget=10**5,
                mode=0,
            )
            assert IMPLS["python"].match_maps(**args) == IMPLS["c"].match_maps(**args), trial
