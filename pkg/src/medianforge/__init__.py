"""medianforge: computation with median graphs and their cube completions.

Verification of medianness (exhaustive oracle and radius-3 local criterion),
hyperplane combinatorics and canonical Hamming embeddings, cube-completion
enumeration with flag links, wallspace dualization, fixed cubes of finite
group actions, and growth of singular sets of piecewise-linear circle
homeomorphisms.
"""

__version__ = "0.1.0"

from .actions import (
    Automorphism,
    BalanceEntry,
    BalanceTable,
    check_automorphism,
    classify_hyperplanes,
    invariant_cube,
    is_flippable,
    orbit,
    orbit_diameter,
    parse_action,
)
from .core import (
    FAMILIES,
    Graph,
    MedianReport,
    generate,
    interval,
    median,
    medianness_oracle,
)
from .cubes import (
    Cube,
    CubeComplex,
    LocalReport,
    SimplicialLink,
    enumerate_cubes,
    is_flag,
    is_hypercube_set,
    maximal_cubes,
    maximal_transverse_families,
    vertex_link,
    verylocal_check,
)
from .cubulation import (
    Orientation,
    WallDistanceReport,
    Wallspace,
    dualize,
    principal_orientation,
    wall_distance_check,
)
from .errors import (
    HalfspaceError,
    InputError,
    InternalError,
    MedianForgeError,
    NoMedianError,
    NotAdjacencyPreservingError,
    NotBijectiveError,
    NotUniqueError,
    ResourceLimitError,
)
from .hyperplanes import (
    EmbeddingTable,
    FacingTriple,
    Hyperplane,
    canonical_embedding,
    convex_hull,
    facing_triple,
    gate,
    hyperplanes,
    is_convex,
    is_geodesic,
    separating,
    transverse,
)
from .plcircle import (
    GrowthReport,
    PLCircleHomeo,
    compose,
    growth_profile,
    orbit_distance,
    power,
    sing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
