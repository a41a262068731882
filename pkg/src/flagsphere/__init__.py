"""flagsphere: flag triangulations of low-dimensional spheres, the dominance
relation between them, and Euler-characteristic invariants of the associated
cubical complexes."""

from .complexes import (
    FVector,
    Kind,
    SphereVerdict,
    Triangulation,
    collapse_edge,
    dumps_complex,
    edge_in_square,
    face_vector,
    is_flag,
    is_suspension,
    link,
    loads_complex,
    read_complex,
    squares_containing,
    subdivide_edge,
    verify_sphere,
    write_complex,
)
from .generators import gamma2

__version__ = "0.1.0"

__all__ = [
    "FVector",
    "Kind",
    "SphereVerdict",
    "Triangulation",
    "collapse_edge",
    "dumps_complex",
    "edge_in_square",
    "face_vector",
    "gamma2",
    "is_flag",
    "is_suspension",
    "link",
    "loads_complex",
    "read_complex",
    "squares_containing",
    "subdivide_edge",
    "verify_sphere",
    "write_complex",
    "__version__",
]
