"""Shared fixtures and independent oracles.

The oracles recompute quantities by brute enumeration (subset scans,
4-cycle scans) so the optimized bitset paths are checked against something
that shares no code with them.
"""

import itertools

import pytest

from flagsphere import generators
from flagsphere.complexes import Kind, Triangulation


def brute_face_count(t: Triangulation, k: int) -> int:
    """Number of (k-1)-faces by scanning every k-subset of vertices."""
    count = 0
    for sub in itertools.combinations(range(t.n), k):
        if not all(t.has_edge(a, b) for a, b in itertools.combinations(sub, 2)):
            continue
        if t.kind is Kind.FLAG:
            count += 1
        else:
            if any(set(sub) <= set(m) for m in t.maximal_faces):
                count += 1
    return count


def brute_squares(t: Triangulation) -> list[tuple[int, int, int, int]]:
    """All induced 4-cycles, each as its sorted vertex quadruple."""
    out = []
    for quad in itertools.combinations(range(t.n), 4):
        sub = [[t.has_edge(a, b) for b in quad] for a in quad]
        edges = sum(sub[i][j] for i in range(4) for j in range(i + 1, 4))
        degs = [sum(sub[i][j] for j in range(4) if j != i) for i in range(4)]
        if edges == 4 and all(d == 2 for d in degs):
            out.append(quad)
    return out


def brute_edge_in_square(t: Triangulation, x: int, y: int) -> bool:
    return any(x in q and y in q for q in brute_squares(t))


@pytest.fixture(scope="session")
def octa2():
    return generators.octahedral_sphere(2)


@pytest.fixture(scope="session")
def octa3():
    return generators.octahedral_sphere(3)


@pytest.fixture(scope="session")
def t9():
    return generators.t9()


@pytest.fixture(scope="session")
def t10():
    return generators.t10()


@pytest.fixture(scope="session")
def t12():
    return generators.t12()


@pytest.fixture(scope="session")
def tetrahedron():
    return Triangulation.explicit(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])


@pytest.fixture(scope="session")
def boundary_d4():
    """Boundary of the 4-simplex: five tetrahedra."""
    return Triangulation.explicit(5, [[a for a in range(5) if a != i] for i in range(5)])
