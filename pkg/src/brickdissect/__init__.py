"""Cube-to-brick dissection maps, 2D piece enumeration, and figure rendering.

Modules
-------
core        brick specs, the bidiagonal lattice generator, and the O(n)
            forward / inverse dissection maps
montucla2d  the classical 2D square-to-rectangle dissection as polygons
oracle      dense reference implementation used for cross-checks
svg         deterministic SVG rendering of the 2D figures
selfcheck   seeded verification suites (round trip, oracle agreement,
            row norms, uniformity)
bench       per-point wall-time scaling benchmark
cli         the ``brickdissect`` command-line tool
"""

from .core import (
    BidiagonalLower,
    BidiagonalUpper,
    BrickSpec,
    DissectionImage,
    DissectionMap,
    OrthogonalRealization,
    brick_to_brick,
    brick_to_cube,
    build_generator,
    build_gs_coefficients,
    build_realization,
    canonical_from_realization,
    cube_to_brick,
    make_brick_spec,
    mul_upper,
    normalize_volume,
    solve_lower,
)
from .errors import (
    DimensionMismatch,
    DissectionError,
    InvalidAspect,
    NonPositiveLength,
    NotFound,
    OutOfDomain,
    SingularMatrix,
    VolumeNotUnit,
)
from .montucla2d import Lattice2D, Piece2D, enumerate_pieces, montucla_lattice, piece_count_bound
from .svg import render_dissection_svg

__version__ = "0.1.0"

__all__ = [
    "BidiagonalLower",
    "BidiagonalUpper",
    "BrickSpec",
    "DimensionMismatch",
    "DissectionError",
    "DissectionImage",
    "DissectionMap",
    "InvalidAspect",
    "Lattice2D",
    "NonPositiveLength",
    "NotFound",
    "OrthogonalRealization",
    "OutOfDomain",
    "Piece2D",
    "SingularMatrix",
    "VolumeNotUnit",
    "brick_to_brick",
    "brick_to_cube",
    "build_generator",
    "build_gs_coefficients",
    "build_realization",
    "canonical_from_realization",
    "cube_to_brick",
    "enumerate_pieces",
    "make_brick_spec",
    "montucla_lattice",
    "mul_upper",
    "normalize_volume",
    "piece_count_bound",
    "render_dissection_svg",
    "solve_lower",
]
