"""Cube-to-brick dissection maps built from a bidiagonal lattice tiling.

A unit-volume brick with sorted side lengths ``a_1 <= ... <= a_n`` and the
unit cube both tile n-space under the lattice generated by a lower
bidiagonal matrix B with unit diagonal.  Orthogonalizing the rows of B from
the last row upward yields orthogonal rows ``r_j`` with ``||r_j|| = a_j``,
so the fundamental parallelotope of B is simultaneously cut into cubes by
integer translates and is a rotated copy of the brick.  Mapping a cube
point to its brick image therefore amounts to locating the lattice
translate whose copy of the brick realization contains it.

Because both B and the orthogonalization coefficient matrix A are
bidiagonal, every step (the triangular solve, the coefficient
multiplication, the translate search, and the translation itself) is a
two-term recurrence: the whole map costs O(n) arithmetic operations.

All quantities are derived from the suffix products ``P_j = a_j ... a_n``
(with ``P_{n+1} = 1``), which are >= 1 for sorted unit-volume lengths:

    sub[j] = B[j+1, j] = sqrt(P_{j+1}^2 - 1) / P_{j+2}      (0-based j)
    sup[j] = A[j, j+1] = sqrt(P_{j+1}^2 - 1) / (a_{j+1} P_{j+1})

Conventions: row vectors act on the left (``z B = x``), the cube is the
half-open cell ``[0,1)^n``, and floor assignments within SNAP_TOL of a cut
snap onto it, so points exactly on a cut land in the cell whose lower
boundary carries them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPositiveLength,
    OutOfDomain,
    VolumeNotUnit,
)

__all__ = [
    "SNAP_TOL",
    "DOMAIN_SLACK",
    "BrickSpec",
    "BidiagonalLower",
    "BidiagonalUpper",
    "OrthogonalRealization",
    "DissectionImage",
    "DissectionMap",
    "make_brick_spec",
    "normalize_volume",
    "build_generator",
    "build_gs_coefficients",
    "build_realization",
    "solve_lower",
    "mul_upper",
    "cube_to_brick",
    "brick_to_cube",
    "brick_to_brick",
    "canonical_from_realization",
]

# Width of the snapping window around the cuts, and the slack accepted on
# domain boundaries.  Outputs satisfy alpha in [-SNAP_TOL, 1 + SNAP_TOL).
SNAP_TOL = 1e-12
DOMAIN_SLACK = 1e-12

# Relative unit-volume tolerance is VOLUME_TOL_PER_DIM * n.
VOLUME_TOL_PER_DIM = 1e-6

# Above this magnitude suffix products are handled in the log domain when
# forming sqrt(P^2 - 1); P^2 would otherwise approach overflow.
_LOG_DOMAIN_THRESHOLD = 1e150


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BrickSpec:
    """Validated side lengths of a unit-volume brick.

    ``lengths`` is sorted ascending; ``perm`` maps sorted positions to the
    user's original axis order: ``lengths[i] == lengths_input[perm[i]]``.
    Construct through :func:`make_brick_spec`.
    """

    lengths_input: np.ndarray
    lengths: np.ndarray
    perm: np.ndarray
    n: int


@dataclass(frozen=True)
class BidiagonalLower:
    """Lower bidiagonal matrix with unit diagonal, stored by its subdiagonal.

    ``sub[j]`` holds entry (j+1, j); the determinant is exactly 1.
    """

    n: int
    sub: np.ndarray

    def to_dense(self) -> np.ndarray:
        dense = np.eye(self.n)
        if self.n > 1:
            dense[np.arange(1, self.n), np.arange(self.n - 1)] = self.sub
        return dense


@dataclass(frozen=True)
class BidiagonalUpper:
    """Upper bidiagonal matrix with unit diagonal, stored by its superdiagonal.

    ``sup[i]`` holds entry (i, i+1); the determinant is exactly 1.
    """

    n: int
    sup: np.ndarray

    def to_dense(self) -> np.ndarray:
        dense = np.eye(self.n)
        if self.n > 1:
            dense[np.arange(self.n - 1), np.arange(1, self.n)] = self.sup
        return dense


@dataclass(frozen=True)
class OrthogonalRealization:
    """Orthogonal rows r_1..r_n spanning the brick realization.

    ``rows[j]`` has Euclidean norm ``norms[j] == lengths[j]``; the brick
    realization is ``{sum_j alpha_j rows[j] : alpha in [0,1]^n}``.
    Dense (n x n); intended for verification and canonical-coordinate
    work, not for the O(n) mapping fast path.
    """

    rows: np.ndarray
    norms: np.ndarray


@dataclass(frozen=True)
class DissectionImage:
    """Result of mapping cube points into the brick.

    y      point(s) in the brick realization, ``y = x - u B``
    u      integer lattice coordinates of the translate (the piece label)
    alpha  coordinates of y in the orthogonal row basis, in [0,1) up to snap
    c      axis-aligned brick point, ``c_j = alpha_j * a_j``, reported in
           the user's original axis order

    Arrays are shaped (n,) for a single point or (m, n) for a batch.
    """

    y: np.ndarray
    u: np.ndarray
    alpha: np.ndarray
    c: np.ndarray


def normalize_volume(lengths_input: Sequence[float]) -> np.ndarray:
    """Rescale positive lengths so their product is 1, preserving ratios.

    The scale factor is exp(-mean(log a)), computed in the log domain so
    extreme magnitudes cannot overflow.
    """
    arr = np.asarray(lengths_input, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("lengths must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise NonPositiveLength("all lengths must be positive and finite")
    logs = np.log(arr)
    return arr * math.exp(-float(logs.mean()))


def make_brick_spec(lengths_input: Sequence[float]) -> BrickSpec:
    """Validate side lengths and return the sorted spec with its permutation.

    Raises
    ------
    NonPositiveLength
        If any entry is <= 0 or not finite.
    VolumeNotUnit
        If |prod(a) - 1| exceeds 1e-6 * n.  Call :func:`normalize_volume`
        first to rescale deliberately; the constructor never rescales.
    """
    arr = np.asarray(lengths_input, dtype=float)
    if arr.ndim != 1:
        raise ValueError("lengths must be a 1-D sequence")
    n = int(arr.size)
    if n < 1:
        raise ValueError("at least one length is required")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise NonPositiveLength("all lengths must be positive and finite")
    volume_error = abs(math.expm1(float(np.log(arr).sum())))
    tol = VOLUME_TOL_PER_DIM * n
    if volume_error > tol:
        raise VolumeNotUnit(
            f"volume deviates from 1 by {volume_error:.3e} "
            f"(tolerance {tol:.1e}); use normalize_volume to rescale"
        )
    perm = np.argsort(arr, kind="stable")
    return BrickSpec(
        lengths_input=_readonly(arr.copy()),
        lengths=_readonly(arr[perm]),
        perm=_readonly(perm),
        n=n,
    )


def _suffix_products(lengths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Suffix products P[i] = prod(lengths[i:]) with P[n] = 1, plus log sums."""
    n = lengths.size
    prods = np.ones(n + 1)
    prods[:n] = np.cumprod(lengths[::-1])[::-1]
    logs = np.zeros(n + 1)
    logs[:n] = np.cumsum(np.log(lengths)[::-1])[::-1]
    return prods, logs


def _bidiagonal_entries(lengths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Off-diagonal entries of the generator B and coefficient matrix A."""
    n = lengths.size
    if n == 1:
        return np.zeros(0), np.zeros(0)
    prods, logs = _suffix_products(lengths)
    q = prods[1:n]
    # sqrt(q^2 - 1); a negative rounding residue clamps to zero.  Entries
    # where q is huge overflow here and are recomputed below.
    with np.errstate(over="ignore", invalid="ignore"):
        s = np.sqrt(np.maximum(q * q - 1.0, 0.0))
        sub = s / prods[2 : n + 1]
        sup = s / (lengths[1:] * q)
    big = q > _LOG_DOMAIN_THRESHOLD
    if np.any(big):
        # sqrt(P^2-1) = P sqrt(1 - P^-2); work with log P to avoid overflow.
        lq = logs[1:n][big]
        ls = lq + 0.5 * np.log1p(-np.exp(-2.0 * lq))
        sub[big] = np.exp(ls - logs[2 : n + 1][big])
        sup[big] = np.exp(ls - np.log(lengths[1:][big]) - lq)
    return sub, sup


def build_generator(spec: BrickSpec) -> BidiagonalLower:
    """Lattice generator under which both the cube and the brick tile space."""
    sub, _ = _bidiagonal_entries(spec.lengths)
    return BidiagonalLower(n=spec.n, sub=_readonly(sub))


def build_gs_coefficients(spec: BrickSpec) -> BidiagonalUpper:
    """Closed-form Gram-Schmidt coefficient matrix A with B = A R."""
    _, sup = _bidiagonal_entries(spec.lengths)
    return BidiagonalUpper(n=spec.n, sup=_readonly(sup))


def build_realization(spec: BrickSpec) -> OrthogonalRealization:
    """Orthogonalize the generator rows from the last row upward.

    O(n^2) time and memory; the mapping fast path never needs it.  Row i
    of B overlaps only row i+1 of the orthogonalized set, so the
    recurrence is the single projection ``r_i = b_i - sup[i] r_{i+1}``,
    using the closed-form coefficient (safe at extreme magnitudes where
    inner products would overflow; the dense oracle cross-checks it
    against true inner-product coefficients).
    """
    B = build_generator(spec)
    _, sup = _bidiagonal_entries(spec.lengths)
    rows = B.to_dense()
    for i in range(spec.n - 2, -1, -1):
        rows[i] = rows[i] - sup[i] * rows[i + 1]
    return OrthogonalRealization(rows=_readonly(rows), norms=_readonly(_row_norms(rows)))


def _row_norms(rows: np.ndarray) -> np.ndarray:
    """Euclidean row norms with scaling, so squares cannot overflow."""
    scale = np.abs(rows).max(axis=1)
    scale[scale == 0.0] = 1.0
    scaled = rows / scale[:, None]
    return scale * np.sqrt((scaled * scaled).sum(axis=1))


def solve_lower(B: BidiagonalLower, x: np.ndarray) -> np.ndarray:
    """Solve ``z B = x`` by backward substitution in O(n).

    ``x`` may be a single point (n,) or a batch (m, n); the recurrence is
    ``z_n = x_n`` and ``z_j = x_j - z_{j+1} sub[j]`` going backward.
    """
    z = np.array(x, dtype=float, copy=True)
    sub = B.sub
    for j in range(B.n - 2, -1, -1):
        z[..., j] -= z[..., j + 1] * sub[j]
    return z


def mul_upper(A: BidiagonalUpper, z: np.ndarray) -> np.ndarray:
    """Compute ``z A`` in O(n): out_1 = z_1, out_j = z_j + z_{j-1} sup[j-1]."""
    out = np.array(z, dtype=float, copy=True)
    if A.n > 1:
        out[..., 1:] += np.asarray(z, dtype=float)[..., :-1] * A.sup
    return out


def _floor_snap(t: float) -> int:
    """Floor with snapping: values within SNAP_TOL of an integer round to it."""
    r = round(t)
    if abs(t - r) <= SNAP_TOL:
        return r
    return math.floor(t)


class DissectionMap:
    """Precomputed forward/inverse dissection maps for one brick spec.

    Construction costs O(n); every mapped point costs O(n).  Instances are
    immutable after construction and safe to share across threads.  Single
    points take the scalar path, (m, n) batches a vectorized path; the two
    paths perform identical arithmetic and agree bitwise.
    """

    def __init__(self, spec: BrickSpec):
        self.spec = spec
        self.generator = build_generator(spec)
        self.coefficients = build_gs_coefficients(spec)
        self._sub = self.generator.sub.tolist()
        self._sup = self.coefficients.sup.tolist()
        self._lengths = spec.lengths.tolist()
        self._inv_perm = _readonly(np.argsort(spec.perm))
        self._identity_perm = bool(np.array_equal(spec.perm, np.arange(spec.n)))

    # -- forward ---------------------------------------------------------

    def forward(self, x: np.ndarray) -> DissectionImage:
        """Map cube point(s) in sorted axis order to the brick."""
        arr = np.asarray(x, dtype=float)
        self._check_cube_domain(arr)
        if arr.ndim == 1:
            return self._forward_single(arr)
        if arr.ndim == 2:
            return self._forward_batch(arr)
        raise ValueError("expected a point (n,) or a batch (m, n)")

    def _check_cube_domain(self, arr: np.ndarray) -> None:
        if arr.shape[-1] != self.spec.n:
            raise DimensionMismatch(
                f"point has {arr.shape[-1]} coordinates, spec has {self.spec.n}"
            )
        bad = ~np.isfinite(arr) | (arr < -DOMAIN_SLACK) | (arr > 1.0 + DOMAIN_SLACK)
        if np.any(bad):
            idx = np.argwhere(bad)[0]
            coord = int(idx[-1])
            point = int(idx[0]) if arr.ndim == 2 else None
            value = float(arr[tuple(idx)])
            raise OutOfDomain(
                f"coordinate {coord + 1} out of [0, 1]: {value!r}",
                point=point,
                coordinate=coord,
                value=value,
            )

    def _forward_single(self, arr: np.ndarray) -> DissectionImage:
        n = self.spec.n
        sub, sup, lengths = self._sub, self._sup, self._lengths
        x = arr.tolist()
        z = [0.0] * n
        z[n - 1] = x[n - 1]
        for j in range(n - 2, -1, -1):
            z[j] = x[j] - z[j + 1] * sub[j]
        xbar = [0.0] * n
        xbar[0] = z[0]
        for j in range(1, n):
            xbar[j] = z[j] + z[j - 1] * sup[j - 1]
        u = [0] * n
        alpha = [0.0] * n
        t = xbar[0]
        u[0] = _floor_snap(t)
        alpha[0] = t - u[0]
        for i in range(1, n):
            t = xbar[i] - u[i - 1] * sup[i - 1]
            u[i] = _floor_snap(t)
            alpha[i] = t - u[i]
        y = [0.0] * n
        for j in range(n - 1):
            y[j] = (x[j] - u[j]) - u[j + 1] * sub[j]
        y[n - 1] = x[n - 1] - u[n - 1]
        c_sorted = [alpha[i] * lengths[i] for i in range(n)]
        return self._assemble(np.array(y), np.array(u, dtype=np.int64),
                              np.array(alpha), np.array(c_sorted))

    def _forward_batch(self, arr: np.ndarray) -> DissectionImage:
        n = self.spec.n
        sub = self.generator.sub
        sup = self.coefficients.sup
        z = arr.copy()
        for j in range(n - 2, -1, -1):
            z[:, j] -= z[:, j + 1] * sub[j]
        xbar = z.copy()
        if n > 1:
            xbar[:, 1:] += z[:, :-1] * sup
        u = np.empty_like(arr)
        alpha = np.empty_like(arr)
        t = xbar[:, 0]
        u[:, 0] = _floor_snap_array(t)
        alpha[:, 0] = t - u[:, 0]
        for i in range(1, n):
            t = xbar[:, i] - u[:, i - 1] * sup[i - 1]
            u[:, i] = _floor_snap_array(t)
            alpha[:, i] = t - u[:, i]
        y = arr - u
        if n > 1:
            y[:, :-1] -= u[:, 1:] * sub
        c_sorted = alpha * self.spec.lengths
        return self._assemble(y, u.astype(np.int64), alpha, c_sorted)

    def _assemble(self, y, u, alpha, c_sorted) -> DissectionImage:
        c = c_sorted if self._identity_perm else c_sorted[..., self._inv_perm]
        return DissectionImage(y=_readonly(y), u=_readonly(u),
                               alpha=_readonly(alpha), c=_readonly(np.ascontiguousarray(c)))

    # -- inverse ---------------------------------------------------------

    def inverse(self, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map brick point(s) (user axis order) back into the cube.

        Returns ``(x, u)`` with x in sorted axis order and u the lattice
        coordinates satisfying ``x = y + u B``.
        """
        arr = np.asarray(c, dtype=float)
        self._check_brick_domain(arr)
        if arr.ndim == 1:
            return self._inverse_single(arr)
        if arr.ndim == 2:
            return self._inverse_batch(arr)
        raise ValueError("expected a point (n,) or a batch (m, n)")

    def _check_brick_domain(self, arr: np.ndarray) -> None:
        if arr.shape[-1] != self.spec.n:
            raise DimensionMismatch(
                f"point has {arr.shape[-1]} coordinates, spec has {self.spec.n}"
            )
        hi = self.spec.lengths_input + DOMAIN_SLACK
        bad = ~np.isfinite(arr) | (arr < -DOMAIN_SLACK) | (arr > hi)
        if np.any(bad):
            idx = np.argwhere(bad)[0]
            coord = int(idx[-1])
            point = int(idx[0]) if arr.ndim == 2 else None
            value = float(arr[tuple(idx)])
            side = float(self.spec.lengths_input[coord])
            raise OutOfDomain(
                f"coordinate {coord + 1} out of [0, {side:.12g}]: {value!r}",
                point=point,
                coordinate=coord,
                value=value,
            )

    def _inverse_single(self, arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.spec.n
        sub, sup, lengths = self._sub, self._sup, self._lengths
        perm = self.spec.perm
        c = arr[perm].tolist()
        alpha = [c[i] / lengths[i] for i in range(n)]
        w = [0.0] * n
        w[0] = alpha[0]
        for j in range(1, n):
            w[j] = alpha[j] - w[j - 1] * sup[j - 1]
        y = [0.0] * n
        for j in range(n - 1):
            y[j] = w[j] + w[j + 1] * sub[j]
        y[n - 1] = w[n - 1]
        u = [0] * n
        x = [0.0] * n
        t = y[n - 1]
        u[n - 1] = -math.floor(t)
        x[n - 1] = t + u[n - 1]
        for j in range(n - 2, -1, -1):
            t = y[j] + u[j + 1] * sub[j]
            u[j] = -math.floor(t)
            x[j] = t + u[j]
        return _readonly(np.array(x)), _readonly(np.array(u, dtype=np.int64))

    def _inverse_batch(self, arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.spec.n
        sub = self.generator.sub
        sup = self.coefficients.sup
        alpha = arr[:, self.spec.perm] / self.spec.lengths
        w = alpha.copy()
        for j in range(1, n):
            w[:, j] -= w[:, j - 1] * sup[j - 1]
        y = w.copy()
        if n > 1:
            y[:, :-1] += w[:, 1:] * sub
        u = np.empty_like(arr)
        x = np.empty_like(arr)
        t = y[:, n - 1]
        u[:, n - 1] = -np.floor(t)
        x[:, n - 1] = t + u[:, n - 1]
        for j in range(n - 2, -1, -1):
            t = y[:, j] + u[:, j + 1] * sub[j]
            u[:, j] = -np.floor(t)
            x[:, j] = t + u[:, j]
        return _readonly(x), _readonly(u.astype(np.int64))


def _floor_snap_array(t: np.ndarray) -> np.ndarray:
    r = np.rint(t)
    return np.where(np.abs(t - r) <= SNAP_TOL, r, np.floor(t))


def cube_to_brick(x: np.ndarray, spec: BrickSpec) -> DissectionImage:
    """Map point(s) of the unit cube to the brick in O(n) per point.

    Parameters
    ----------
    x : array (n,) or (m, n)
        Cube point(s) in sorted axis order, each coordinate in [0, 1]
        (up to 1e-12 slack; the cell is half-open, so 1 wraps to 0).
    spec : BrickSpec
        Validated unit-volume side lengths.

    Returns
    -------
    DissectionImage
        Realization point y, integer piece label u, basis coordinates
        alpha, and the axis-aligned brick point c in user axis order.

    The pipeline is: solve ``z B = x`` backward, form ``xbar = z A``,
    peel the integer translate ``u_1 = floor(xbar_1)``,
    ``u_i = floor(xbar_i - u_{i-1} sup[i-1])``, and return
    ``y = x - u B`` with ``alpha = xbar - u A``.
    """
    return DissectionMap(spec).forward(x)


def brick_to_cube(c: np.ndarray, spec: BrickSpec) -> tuple[np.ndarray, np.ndarray]:
    """Map brick point(s) c (user axis order) back to the cube in O(n).

    Sets ``alpha_j = c_j / a_j``, recomposes ``y = (alpha A^{-1}) B`` by a
    forward substitution and a bidiagonal product, then finds the unique
    integer translate putting ``x = y + u B`` into [0,1)^n by the backward
    recursion ``u_n = -floor(y_n)``, ``u_j = -floor(y_j + u_{j+1} sub[j])``.
    Returns ``(x, u)``; inverse of :func:`cube_to_brick` up to the
    boundary convention.
    """
    return DissectionMap(spec).inverse(c)


def brick_to_brick(c: np.ndarray, src: BrickSpec, dst: BrickSpec) -> np.ndarray:
    """Map point(s) in the src brick to the dst brick via the cube."""
    if src.n != dst.n:
        raise DimensionMismatch(f"src has n={src.n}, dst has n={dst.n}")
    x, _ = brick_to_cube(c, src)
    return cube_to_brick(x, dst).c


def canonical_from_realization(y: np.ndarray, spec: BrickSpec) -> np.ndarray:
    """Recover alpha coordinates of realization point(s) y in O(n).

    Solves ``y = w B`` backward, then returns ``alpha = w A``.  Raises
    OutOfDomain if any alpha escapes [0, 1] beyond 1e-12 slack, i.e. if y
    is not in the brick realization.
    """
    B = build_generator(spec)
    A = build_gs_coefficients(spec)
    arr = np.asarray(y, dtype=float)
    if arr.shape[-1] != spec.n:
        raise DimensionMismatch(
            f"point has {arr.shape[-1]} coordinates, spec has {spec.n}"
        )
    alpha = mul_upper(A, solve_lower(B, arr))
    bad = ~np.isfinite(alpha) | (alpha < -DOMAIN_SLACK) | (alpha > 1.0 + DOMAIN_SLACK)
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        coord = int(idx[-1])
        raise OutOfDomain(
            f"alpha coordinate {coord + 1} outside [0, 1]: point is not "
            f"in the brick realization",
            point=int(idx[0]) if arr.ndim == 2 else None,
            coordinate=coord,
            value=float(alpha[tuple(idx)]),
        )
    return alpha
