"""Slow, obviously-correct reference routines used to cross-check the fast path.

Everything here is dense and exhaustive on purpose: classical Gram-Schmidt
over full rows, dense linear solves, and a brute-force scan of lattice
translates.  It ships with the library (not only the test tree) so the
command-line ``verify`` subcommand can run the same checks.
"""

from __future__ import annotations

import math

import numpy as np

from .core import SNAP_TOL, BrickSpec, build_generator
from .errors import NotFound, SingularMatrix

__all__ = [
    "dense_gram_schmidt",
    "exhaustive_piece_search",
    "dense_cube_to_brick",
    "dense_cube_to_brick_many",
]


def dense_gram_schmidt(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical Gram-Schmidt on the rows of B, starting from the last row.

    Returns (R, A) with mutually orthogonal rows in R, A upper triangular
    with unit diagonal, and B = A R.  Coefficients are the projections of
    the original rows: A[i, j] = <b_i, r_j> / <r_j, r_j> for j > i.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("expected a square matrix")
    n = B.shape[0]
    R = B.copy()
    A = np.eye(n)
    for i in range(n - 2, -1, -1):
        for j in range(n - 1, i, -1):
            denom = float(R[j] @ R[j])
            if not math.isfinite(denom) or denom == 0.0:
                raise SingularMatrix(f"row {j + 1} vanished during orthogonalization")
            coeff = float(B[i] @ R[j]) / denom
            A[i, j] = coeff
            R[i] = R[i] - coeff * R[j]
    if not np.all(np.isfinite(R)) or float(R[0] @ R[0]) == 0.0:
        raise SingularMatrix("input matrix is singular")
    return R, A


def _candidate_grid(n: int, radius: int) -> np.ndarray:
    axes = [np.arange(-radius, radius + 1)] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, n)


def _dense_pipeline(spec: BrickSpec) -> tuple[np.ndarray, np.ndarray]:
    Bd = build_generator(spec).to_dense()
    R, _ = dense_gram_schmidt(Bd)
    return Bd, R


def default_radius(spec: BrickSpec) -> int:
    return int(math.ceil(spec.lengths[-1])) + 2

def _alpha_of(points: np.ndarray, R: np.ndarray) -> np.ndarray:
    # alpha solves alpha R = point, i.e. R^T alpha^T = point^T
    return np.linalg.solve(R.T, points.T).T


def exhaustive_piece_search(x: np.ndarray, spec: BrickSpec, radius: int) -> np.ndarray:
    """Find the lattice translate of a cube point by scanning all candidates.

    Tries every integer u with ||u||_inf <= radius and returns the unique
    one whose alpha(x - u B) lies in the half-open cell [0, 1)^n (with the
    shared SNAP_TOL boundary convention).  Cost (2 radius + 1)^n; meant
    for n <= 4.  Raises NotFound when no candidate matches, which means
    the radius is too small or something else is broken.
    """
    if spec.n > 4:
        raise ValueError("exhaustive search is limited to n <= 4")
    if radius < default_radius(spec):
        raise ValueError(f"radius must be at least ceil(a_n) + 2 = {default_radius(spec)}")
    x = np.asarray(x, dtype=float)
    Bd, R = _dense_pipeline(spec)
    U = _candidate_grid(spec.n, radius)
    alpha = _alpha_of(x[None, :] - U @ Bd, R)
    mask = np.all((alpha >= -SNAP_TOL) & (alpha < 1.0 - SNAP_TOL), axis=1)
    count = int(mask.sum())
    if count == 0:
        raise NotFound(f"no translate within radius {radius} maps the point into the cell")
    if count > 1:
        raise RuntimeError(f"{count} translates matched; tiling uniqueness is broken")
    return U[mask][0].astype(np.int64)


def dense_cube_to_brick(
    x: np.ndarray, spec: BrickSpec, radius: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reference forward map: exhaustive search plus dense algebra.

    Returns (u, y, alpha) for a single cube point.
    """
    if radius is None:
        radius = default_radius(spec)
    u = exhaustive_piece_search(x, spec, radius)
    Bd, R = _dense_pipeline(spec)
    y = np.asarray(x, dtype=float) - u @ Bd
    alpha = _alpha_of(y[None, :], R)[0]
    return u, y, alpha


def dense_cube_to_brick_many(
    X: np.ndarray, spec: BrickSpec, radius: int | None = None, chunk: int = 32
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched reference forward map sharing one dense precomputation.

    Identical convention to :func:`exhaustive_piece_search`; the per-spec
    grid, Gram-Schmidt, and candidate offsets are built once.  Returns
    (U, Y, Alpha) arrays of shape (m, n).
    """
    if spec.n > 4:
        raise ValueError("exhaustive search is limited to n <= 4")
    if radius is None:
        radius = default_radius(spec)
    X = np.asarray(X, dtype=float)
    Bd, R = _dense_pipeline(spec)
    Rinv = np.linalg.inv(R)
    U = _candidate_grid(spec.n, radius)
    offsets = (U @ Bd) @ Rinv  # alpha-space offsets of every candidate
    m = X.shape[0]
    out_u = np.empty((m, spec.n), dtype=np.int64)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        base = X[lo:hi] @ Rinv
        alpha = base[:, None, :] - offsets[None, :, :]
        mask = np.all((alpha >= -SNAP_TOL) & (alpha < 1.0 - SNAP_TOL), axis=2)
        counts = mask.sum(axis=1)
        if np.any(counts == 0):
            raise NotFound(f"no translate within radius {radius} for some point")
        if np.any(counts > 1):
            raise RuntimeError("multiple translates matched; tiling uniqueness is broken")
        out_u[lo:hi] = U[np.argmax(mask, axis=1)]
    Y = X - out_u @ Bd
    Alpha = _alpha_of(Y, R)
    return out_u, Y, Alpha
