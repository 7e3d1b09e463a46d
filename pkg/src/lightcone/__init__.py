"""Geometry and transformation analysis on Minkowski space.

Light-cone predicates and constructions, Lorentz/Poincare similarities, the
2x2 Hermitian-matrix model, degenerate coherency preservers, and a
sampling-based classifier for coherency-preserving maps.
"""

from .analyzer import (
    BlackBoxMap,
    ClassifierConfig,
    Degenerate,
    Inconclusive,
    Similarity,
    TableMap,
    Violator,
    check_coherency_preservation,
    classify,
    constant_line_detect,
    degree,
    find_collapsed_line,
    fit_cone_vertex,
    induced_directions,
    induced_sphere_map,
    sample_coherent_pair,
)
from .degenerate import DegenerateSpec, Patch, build_default, bump, evaluate, validate_spec
from .errors import (
    Collinear,
    DegenerateSamples,
    DimensionMismatch,
    EpsilonTooLarge,
    InvalidSpec,
    LightconeError,
    LineCollapse,
    MeshTooCoarse,
    NoConvergence,
    NotCoherent,
    NotNull,
    NotProjection,
    SchemaError,
    SingularT,
    TimeComponentVanishes,
    VertexCoincidence,
)
from .hermitian import (
    Herm2,
    event_to_herm,
    herm_to_event,
    rank2,
    standard_preserver,
    standard_preserver_as_affine,
    trace_degenerate_preserver,
)
from .mesh import DegreeResult, SphereMesh, icosphere, sphere_map_degree
from .quadratic import (
    DEFAULT_TOL,
    CoherentLine,
    TolerancePolicy,
    collinear,
    eta,
    find_common_coherent,
    find_transversal_coherent,
    is_adjacent,
    is_coherent,
    is_direction,
    make_direction,
    metric,
    minkowski_inner,
    polar,
    project_to_section,
    q,
    random_directions,
    spatial,
)
from .transforms import (
    AffineMap,
    PoincareSimilarity,
    apply_similarity,
    boost,
    compose,
    decompose_similarity,
    fit_affine,
    invert,
    is_lorentz,
    random_similarity,
    spatial_rotation,
)

__version__ = "0.1.0"
