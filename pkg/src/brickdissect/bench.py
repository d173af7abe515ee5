"""Wall-clock scaling benchmark for the per-point forward map.

Spec construction (validation, sorting, generator entries) happens once
per size and is excluded from the timing; the measured quantity is the
cube-to-brick map alone, which should scale linearly in n.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import DissectionMap, make_brick_spec
from .selfcheck import random_unit_lengths

__all__ = ["BenchRow", "BenchResult", "auto_points", "run_benchmark", "DEFAULT_SIZES"]

DEFAULT_SIZES = tuple(2**k for k in range(8, 21))


@dataclass(frozen=True)
class BenchRow:
    n: int
    points: int
    seconds_per_point: float


@dataclass(frozen=True)
class BenchResult:
    rows: list
    slope: float | None

    def csv(self) -> str:
        lines = ["n,points,seconds_per_point"]
        for row in self.rows:
            lines.append(f"{row.n},{row.points},{row.seconds_per_point:.9g}")
        out = "\n".join(lines) + "\n"
        if self.slope is not None:
            out += f"# loglog_slope = {self.slope:.4f}\n"
        return out


def auto_points(n: int) -> int:
    """Enough repetitions for a stable measurement without blowing the budget."""
    return max(4, (1 << 18) // n)


def run_benchmark(
    sizes=DEFAULT_SIZES, points_per_n: int = 0, seed: int = 0
) -> BenchResult:
    """Time the single-point forward map across sizes and fit a log-log slope.

    ``points_per_n = 0`` picks an adaptive repetition count per size.
    The slope is omitted (None) when fewer than two sizes are given.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValueError("at least one size is required")
    if any(n < 1 for n in sizes):
        raise ValueError("sizes must be positive")
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        points = points_per_n if points_per_n > 0 else auto_points(n)
        spec = make_brick_spec(random_unit_lengths(n, rng))
        dmap = DissectionMap(spec)
        X = rng.random((points, n))
        dmap.forward(X[0])  # warm-up, untimed
        start = time.perf_counter()
        for i in range(points):
            dmap.forward(X[i])
        elapsed = time.perf_counter() - start
        rows.append(BenchRow(n=n, points=points, seconds_per_point=elapsed / points))
    slope = None
    if len(rows) >= 2:
        log_n = np.log([row.n for row in rows])
        log_t = np.log([max(row.seconds_per_point, 1e-12) for row in rows])
        slope = float(np.polyfit(log_n, log_t, 1)[0])
    return BenchResult(rows=rows, slope=slope)
