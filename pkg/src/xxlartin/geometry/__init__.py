"""Tree of polygons T_m, the product T_m x R, its quotient and angle arithmetic."""

from .angles import (
    DEFAULT_ALPHA,
    DEFAULT_PRECISION,
    MAX_PRECISION,
    PI,
    TWO_PI,
    Alpha,
    CertifiedAngle,
    PrecisionExhausted,
    RationalAngle,
    parse_alpha,
    pi_frac,
    pi_string,
    product_angle,
)
from .quotient import (
    AngleTable,
    AxesWitness,
    CertificationError,
    QuotientComplex,
    even_orientation_orbits,
    fixed_vertex_of_u,
    generator_directions,
    base_angle_table,
    quotient_complex,
    verify_axes,
)
from .treeball import (
    MetricGraph,
    TreeOfPolygons,
    build_tree_ball,
    horizontal_angle,
    vertex_label,
    vertex_link,
)

__all__ = [
    "DEFAULT_ALPHA", "DEFAULT_PRECISION", "MAX_PRECISION", "PI", "TWO_PI", "Alpha", "AngleTable",
    "AxesWitness", "CertificationError", "CertifiedAngle", "MetricGraph", "PrecisionExhausted",
    "QuotientComplex", "RationalAngle", "TreeOfPolygons", "build_tree_ball", "even_orientation_orbits",
    "fixed_vertex_of_u", "generator_directions", "horizontal_angle", "base_angle_table",
    "parse_alpha", "pi_frac", "pi_string", "product_angle", "quotient_complex", "vertex_label",
    "vertex_link", "verify_axes",
]
