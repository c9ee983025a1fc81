"""Combinatorial triangulations, edge flips and lower bounds on flip distance."""

from .bounds import (
    MaxCommonResult,
    VertexBijection,
    common_edges,
    exhaustive_max_common_edges,
    lemma1_bound,
    max_common_edges,
    theorem_bound,
)
from .constructions import (
    ColoredTriangulation,
    build_g1,
    build_g2,
    check_lemma2_structure,
    host_max_deg6,
    lemma2_bound,
)
from .covers import matching_mapping, max_matching, min_path_cover, path_cover, path_cover_mapping
from .flipgraph import FlipGraphCatalog, diameter, distance, enumerate_flip_graph
from .kernel import (
    CanonicalCode,
    Triangulation,
    apply_sequence,
    canonical_code,
    faces,
    flip,
    format_rotation,
    from_code,
    parse,
)

__version__ = "0.1.0"
