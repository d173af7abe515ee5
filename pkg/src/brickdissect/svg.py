"""Deterministic SVG rendering of the 2D dissection figures.

Output is plain SVG 1.1 text assembled by hand: fixed 6-decimal coordinate
formatting, a fixed 8-color palette assigned in sorted piece-label order,
and stable element ordering make the documents byte-for-byte reproducible,
which the golden-file tests rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidAspect
from .montucla2d import enumerate_pieces, montucla_lattice

__all__ = ["SvgScene", "PALETTE", "MODES", "build_scene", "render_dissection_svg"]

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#59a14f",
    "#e15759",
    "#b07aa1",
    "#76b7b2",
    "#edc948",
    "#9c755f",
)

MODES = ("rectangle", "square", "tiling", "side-by-side")

PX_PER_UNIT = 160
STROKE_WIDTH = 0.01
FONT_SIZE = 0.09
MARGIN_FRACTION = 0.05


@dataclass
class SvgScene:
    """Polygons and labels in world coordinates, pre-serialization.

    Each polygon entry is (vertices, fill color, opacity); each label is
    (x, y, text).  ``to_svg`` flips the y axis to screen convention and
    computes a viewBox enclosing everything with a 5% margin.
    """

    polygons: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    stroke_width: float = STROKE_WIDTH

    def add_polygon(self, vertices, fill: str, opacity: float = 1.0) -> None:
        self.polygons.append((np.asarray(vertices, dtype=float), fill, opacity))

    def add_label(self, x: float, y: float, text: str) -> None:
        self.labels.append((float(x), float(y), text))

    def to_svg(self) -> str:
        xs, ys = [], []
        for vertices, _, _ in self.polygons:
            xs.extend(vertices[:, 0])
            ys.extend(-vertices[:, 1])
        if not xs:
            xs, ys = [0.0, 1.0], [0.0, 1.0]
        min_x, max_x = min(xs), max(xs)
        min_y, max_y = min(ys), max(ys)
        span_x = max(max_x - min_x, 1e-9)
        span_y = max(max_y - min_y, 1e-9)
        margin = MARGIN_FRACTION * max(span_x, span_y)
        vb = (min_x - margin, min_y - margin, span_x + 2 * margin, span_y + 2 * margin)
        width = max(1, round(vb[2] * PX_PER_UNIT))
        height = max(1, round(vb[3] * PX_PER_UNIT))
        parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width}" height="{height}" '
            f'viewBox="{_fmt(vb[0])} {_fmt(vb[1])} {_fmt(vb[2])} {_fmt(vb[3])}">',
        ]
        for vertices, fill, opacity in self.polygons:
            pts = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in vertices)
            opacity_attr = "" if opacity >= 1.0 else f' fill-opacity="{_fmt(opacity)}"'
            parts.append(
                f'<polygon points="{pts}" fill="{fill}"{opacity_attr} '
                f'stroke="#1a1a1a" stroke-width="{_fmt(self.stroke_width)}"/>'
            )
        for x, y, text in self.labels:
            parts.append(
                f'<text x="{_fmt(x)}" y="{_fmt(-y)}" font-size="{_fmt(FONT_SIZE)}" '
                f'font-family="monospace" text-anchor="middle">{text}</text>'
            )
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _piece_colors(pieces) -> dict:
    return {piece.u: PALETTE[i % len(PALETTE)] for i, piece in enumerate(pieces)}


def _centroid(vertices: np.ndarray) -> tuple[float, float]:
    return float(vertices[:, 0].mean()), float(vertices[:, 1].mean())


def build_scene(a: float, mode: str = "side-by-side") -> SvgScene:
    """Assemble the scene for one figure mode.

    rectangle     pieces inside the rotated rectangle realization
    square        the same pieces translated back into [0,1]^2
    tiling        a 5x5 grid of lattice translates of the cut rectangle
    side-by-side  rectangle and square panels with matching colors
    """
    if not math.isfinite(a) or a < 1.0:
        raise InvalidAspect(f"aspect must be >= 1, got {a!r}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    pieces = enumerate_pieces(a)
    colors = _piece_colors(pieces)
    scene = SvgScene()

    def label_of(piece) -> str:
        return f"u=({piece.u[0]},{piece.u[1]})"

    if mode == "rectangle":
        for piece in pieces:
            scene.add_polygon(piece.polygon_in_rect, colors[piece.u])
            scene.add_label(*_centroid(piece.polygon_in_rect), label_of(piece))
    elif mode == "square":
        for piece in pieces:
            scene.add_polygon(piece.polygon_in_square, colors[piece.u])
            scene.add_label(*_centroid(piece.polygon_in_square), label_of(piece))
    elif mode == "tiling":
        B = montucla_lattice(a).generator
        for v1 in range(-2, 3):
            for v2 in range(-2, 3):
                shift = np.array([v1, v2], dtype=float) @ B
                ghost = (v1, v2) != (0, 0)
                for piece in pieces:
                    scene.add_polygon(
                        piece.polygon_in_rect + shift,
                        colors[piece.u],
                        opacity=0.35 if ghost else 1.0,
                    )
        for piece in pieces:
            scene.add_label(*_centroid(piece.polygon_in_rect), label_of(piece))
    else:  # side-by-side
        rect_max_x = max(float(p.polygon_in_rect[:, 0].max()) for p in pieces)
        offset = np.array([rect_max_x + 0.25, 0.0])
        for piece in pieces:
            scene.add_polygon(piece.polygon_in_rect, colors[piece.u])
            scene.add_label(*_centroid(piece.polygon_in_rect), label_of(piece))
        for piece in pieces:
            shifted = piece.polygon_in_square + offset
            scene.add_polygon(shifted, colors[piece.u])
            scene.add_label(*_centroid(shifted), label_of(piece))
    return scene


def render_dissection_svg(a: float, mode: str = "side-by-side") -> str:
    """Render one dissection figure as an SVG 1.1 document string."""
    return build_scene(a, mode).to_svg()
