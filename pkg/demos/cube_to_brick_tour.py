#!/usr/bin/env python3
"""Tour of the n-dimensional cube-to-brick map.

Walks through the construction for a 3D brick: the bidiagonal lattice
generator, the orthogonalized realization, a few mapped points, and a
large seeded round trip.
"""

import numpy as np

from brickdissect import (
    DissectionMap,
    brick_to_brick,
    build_generator,
    build_gs_coefficients,
    build_realization,
    make_brick_spec,
)
from brickdissect.selfcheck import random_unit_lengths

np.set_printoptions(precision=6, suppress=True)

# A unit-volume brick: 0.5 x 1 x 2
spec = make_brick_spec([2.0, 1.0, 0.5])
print("side lengths (user order):", spec.lengths_input)
print("sorted ascending:         ", spec.lengths)
print("axis permutation:         ", spec.perm)

B = build_generator(spec)
A = build_gs_coefficients(spec)
print("\nlattice generator B (lower bidiagonal, unit diagonal):")
print(B.to_dense())
print("orthogonalization coefficients A (upper bidiagonal):")
print(A.to_dense())

R = build_realization(spec)
print("\northogonal rows spanning the brick realization:")
print(R.rows)
print("row norms (= sorted side lengths):", R.norms)
print("A @ R - B residual:", np.abs(A.to_dense() @ R.rows - B.to_dense()).max())

# Map a few cube points.  Coordinates go in sorted axis order; the brick
# point c comes back in the user's original axis order.
dmap = DissectionMap(spec)
for x in ([0.0, 0.0, 0.0], [0.25, 0.5, 0.75], [0.9, 0.9, 0.9]):
    image = dmap.forward(np.array(x))
    print(f"\nx = {x}")
    print("  piece label u =", image.u)
    print("  realization point y =", image.y)
    print("  brick point c (user order) =", image.c)
    x_back, _ = dmap.inverse(image.c)
    print("  round trip error =", np.abs(x_back - np.array(x)).max())

# A seeded bulk round trip in higher dimension.
rng = np.random.default_rng(0)
big = make_brick_spec(random_unit_lengths(64, rng))
big_map = DissectionMap(big)
X = rng.random((50_000, 64))
image = big_map.forward(X)
X_back, _ = big_map.inverse(image.c)
print("\nn=64, 50000 points: max round-trip error =", np.abs(X_back - X).max())
print("alpha range:", image.alpha.min(), "to", image.alpha.max())

# Brick-to-brick goes through the cube.
other = make_brick_spec([0.25, 2.0, 2.0])
c2 = brick_to_brick(image.c[:100], big_spec := big, other) if False else None
src = make_brick_spec([0.5, 2.0])
dst = make_brick_spec([2.0, 0.5])
c = DissectionMap(src).forward(rng.random((5, 2))).c
print("\nbrick (0.5 x 2) -> brick (2 x 0.5) sample:")
print(brick_to_brick(c, src, dst))
