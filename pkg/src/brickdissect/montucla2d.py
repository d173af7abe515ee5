"""The two-dimensional square-to-rectangle dissection, made explicit.

For an aspect ratio a > 1 the shear parameter is beta = sqrt(a^2 - 1) and
the lattice generated by [[1, 0], [beta, 1]] tiles the plane both by unit
squares and by a rotated a x 1/a rectangle spanned by the orthogonal pair

    r1 = (1/(1+beta^2), -beta/(1+beta^2)),   r2 = (beta, 1).

The dissection pieces are the intersections of the rectangle with the
translated squares; this module enumerates them as convex polygons, which
is Montucla's classical construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidAspect

__all__ = [
    "Lattice2D",
    "Piece2D",
    "montucla_lattice",
    "enumerate_pieces",
    "fuzzy_ceil",
    "piece_count_bound",
    "polygon_area",
    "clip_convex",
]

# Pieces with area below this are edge/vertex touches, not dissection pieces.
MIN_PIECE_AREA = 1e-12


@dataclass(frozen=True)
class Lattice2D:
    """Shear lattice with generator [[1, 0], [beta, 1]]."""

    beta: float

    @property
    def generator(self) -> np.ndarray:
        return np.array([[1.0, 0.0], [self.beta, 1.0]])

    @property
    def aspect(self) -> float:
        return math.sqrt(1.0 + self.beta * self.beta)

    @property
    def rect_sides(self) -> tuple[float, float]:
        """Side lengths of the rectangle realization: (a, 1/a)."""
        a = self.aspect
        return a, 1.0 / a

    def orthogonal_rows(self) -> np.ndarray:
        """Rows r1, r2 spanning the rectangle realization."""
        b = self.beta
        d = 1.0 + b * b
        return np.array([[1.0 / d, -b / d], [b, 1.0]])


@dataclass(frozen=True)
class Piece2D:
    """One piece of the 2D dissection.

    ``u`` is the lattice label matching the forward map's piece label:
    ``polygon_in_square == polygon_in_rect + u B`` vertexwise, with the
    rectangle polygon a subset of the realization and the square polygon a
    subset of [0,1]^2.  Vertices are counterclockwise, starting from the
    lexicographically smallest.
    """

    u: tuple[int, int]
    polygon_in_rect: np.ndarray
    polygon_in_square: np.ndarray

    @property
    def area(self) -> float:
        return polygon_area(self.polygon_in_square)


def montucla_lattice(a: float) -> Lattice2D:
    """Lattice for the square-to-(a x 1/a)-rectangle dissection.

    Requires a >= 1 (a == 1 degenerates to the integer lattice and a
    single piece); for a < 1 call with 1/a and swap the two axes.
    """
    if not math.isfinite(a) or a < 1.0:
        raise InvalidAspect(
            f"aspect must be >= 1, got {a!r}; for a < 1 use 1/a and swap axes"
        )
    return Lattice2D(beta=math.sqrt(max(a * a - 1.0, 0.0)))


def fuzzy_ceil(v: float, rel: float = 1e-9) -> int:
    """Ceiling that forgives values a hair above an integer.

    sqrt(a^2 - 1) evaluated in doubles can land ~1e-16 above an exact
    integer (e.g. a = sqrt(2)), which would inflate the piece-count bound.
    """
    return math.ceil(v - rel * max(1.0, abs(v)))


def piece_count_bound(a: float) -> int:
    """Upper bound 2 + ceil(sqrt(a^2 - 1)) on the number of pieces."""
    if not math.isfinite(a) or a < 1.0:
        raise InvalidAspect(f"aspect must be >= 1, got {a!r}")
    return 2 + fuzzy_ceil(math.sqrt(max(a * a - 1.0, 0.0)))


def polygon_area(vertices) -> float:
    """Shoelace area of a simple polygon (positive for CCW order)."""
    pts = np.asarray(vertices, dtype=float)
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_convex(subject, clip_polygon) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex subject against a CCW convex clip."""
    output = [tuple(map(float, p)) for p in subject]
    clip_pts = [tuple(map(float, p)) for p in clip_polygon]
    cx1, cy1 = clip_pts[-1]
    for cx2, cy2 in clip_pts:
        if not output:
            return []
        ex, ey = cx2 - cx1, cy2 - cy1

        def inside(p):
            return ex * (p[1] - cy1) - ey * (p[0] - cx1) >= 0.0

        def intersect(s, e):
            dx, dy = e[0] - s[0], e[1] - s[1]
            denom = ex * dy - ey * dx
            if denom == 0.0:
                # parallel edge straddling within rounding noise; both
                # endpoints sit on the clip line, any segment point works
                return e
            t = (ex * (cy1 - s[1]) - ey * (cx1 - s[0])) / denom
            return (s[0] + t * dx, s[1] + t * dy)

        polygon = output
        output = []
        s = polygon[-1]
        s_in = inside(s)
        for e in polygon:
            e_in = inside(e)
            if e_in:
                if not s_in:
                    output.append(intersect(s, e))
                output.append(e)
            elif s_in:
                output.append(intersect(s, e))
            s, s_in = e, e_in
        cx1, cy1 = cx2, cy2
    return output


_UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def _normalize_polygon(vertices) -> np.ndarray:
    """Drop duplicate vertices, force CCW, start at the lexicographic minimum."""
    pts = [tuple(map(float, p)) for p in vertices]
    cleaned = []
    for p in pts:
        if not cleaned or math.hypot(p[0] - cleaned[-1][0], p[1] - cleaned[-1][1]) > 1e-12:
            cleaned.append(p)
    if len(cleaned) > 1 and math.hypot(
        cleaned[0][0] - cleaned[-1][0], cleaned[0][1] - cleaned[-1][1]
    ) <= 1e-12:
        cleaned.pop()
    arr = np.array(cleaned)
    if polygon_area(arr) < 0:
        arr = arr[::-1]
    start = min(range(len(arr)), key=lambda k: (arr[k, 0], arr[k, 1]))
    return np.roll(arr, -start, axis=0)


def enumerate_pieces(a: float) -> list[Piece2D]:
    """Enumerate the dissection pieces for the a x 1/a rectangle.

    Clips the rectangle realization against every candidate square
    translate with ||u||_inf <= ceil(a) + 2 (the rectangle fits in a box
    of extent a, so the scan provably covers every piece) and keeps the
    intersections with positive area.  Pieces come back sorted by label.
    """
    lattice = montucla_lattice(a)
    rows = lattice.orthogonal_rows()
    rect = np.array([
        [0.0, 0.0],
        rows[0],
        rows[0] + rows[1],
        rows[1],
    ])
    B = lattice.generator
    radius = math.ceil(a) + 2
    pieces = []
    for u1 in range(-radius, radius + 1):
        for u2 in range(-radius, radius + 1):
            shift = np.array([u1, u2], dtype=float) @ B
            clipped = clip_convex(rect + shift, _UNIT_SQUARE)
            if len(clipped) < 3:
                continue
            poly_square = _normalize_polygon(clipped)
            if polygon_area(poly_square) < MIN_PIECE_AREA:
                continue
            poly_rect = poly_square - shift
            pieces.append(
                Piece2D(
                    u=(u1, u2),
                    polygon_in_rect=poly_rect,
                    polygon_in_square=poly_square,
                )
            )
    pieces.sort(key=lambda p: p.u)
    return pieces
