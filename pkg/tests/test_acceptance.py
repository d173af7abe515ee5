"""Acceptance criteria, one test per criterion, at the tolerances stated below.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion.  Criterion 4 is expected to FAIL on its fine-bound clause at
a = 1.1: the claimed count 2+ceil(sqrt(a^2-1)) = 3 is unattainable for the
pinned construction, which genuinely needs 4 pieces for 1 < a < sqrt(2)
(see the repository notes; the coarse bound ceil(a)+2 holds everywhere).
"""

import time

import numpy as np
import pytest
from scipy import stats

from brickdissect import (
    DissectionMap,
    build_generator,
    build_gs_coefficients,
    build_realization,
    cube_to_brick,
    enumerate_pieces,
    make_brick_spec,
    piece_count_bound,
)
from brickdissect.montucla2d import fuzzy_ceil
from brickdissect.oracle import dense_cube_to_brick_many
from brickdissect.selfcheck import random_unit_lengths


def _report(number: int, name: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] criterion {number}: {name} ({detail})")
    assert passed, f"criterion {number}: {name}: {detail}"


def test_criterion_1_round_trip_bijection():
    started = time.perf_counter()
    rng = np.random.default_rng(2024)
    trials = 100_000
    worst_by_n = {}
    for n in (1, 2, 3, 8, 64, 1024):
        spec = make_brick_spec(random_unit_lengths(n, rng))
        dmap = DissectionMap(spec)
        worst = 0.0
        done = 0
        chunk = min(trials, max(1024, (1 << 22) // n))
        while done < trials:
            m = min(chunk, trials - done)
            x = rng.random((m, n))
            image = dmap.forward(x)
            x_back, _ = dmap.inverse(image.c)
            worst = max(worst, float(np.abs(x_back - x).max()))
            done += m
        worst_by_n[n] = worst
        assert worst <= 1e-9 * n, f"n={n}: round-trip error {worst:.3e} > {1e-9 * n:.1e}"
    elapsed = time.perf_counter() - started
    passed = elapsed < 60.0 and all(err <= 1e-9 * n for n, err in worst_by_n.items())
    detail = (
        f"{trials} points per n, max error "
        + ", ".join(f"n={n}: {err:.2e}" for n, err in worst_by_n.items())
        + f", runtime {elapsed:.1f}s < 60s"
    )
    _report(1, "round-trip bijection", passed, detail)


def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(7)
    worst = 0.0
    checked = 0
    for n in (2, 3, 4):
        for _ in range(100):
            spec = make_brick_spec(random_unit_lengths(n, rng, spread=1.0))
            X = rng.random((100, n))
            image = DissectionMap(spec).forward(X)
            U, Y, Alpha = dense_cube_to_brick_many(X, spec)
            assert np.array_equal(image.u, U), f"n={n}: piece label mismatch"
            worst = max(
                worst,
                float(np.abs(image.y - Y).max()),
                float(np.abs(image.alpha - Alpha).max()),
            )
            checked += len(X)
    _report(
        2,
        "oracle equivalence",
        worst <= 1e-9,
        f"{checked} points, u exact, max |y|/|alpha| deviation {worst:.2e} <= 1e-09",
    )


def test_criterion_3_realization_norms():
    rng = np.random.default_rng(11)
    worst_norm = 0.0
    worst_factor = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 65))
        spec = make_brick_spec(random_unit_lengths(n, rng))
        realization = build_realization(spec)
        rel = np.abs(realization.norms - spec.lengths) / spec.lengths
        worst_norm = max(worst_norm, float(rel.max()))
        A = build_gs_coefficients(spec).to_dense()
        B = build_generator(spec).to_dense()
        worst_factor = max(worst_factor, float(np.abs(A @ realization.rows - B).max()))
    passed = worst_norm <= 1e-9 and worst_factor <= 1e-9
    _report(
        3,
        "realization norms and factorization",
        passed,
        f"100 specs n<=64, max relative norm error {worst_norm:.2e}, "
        f"max |A R - B| {worst_factor:.2e}, budget 1e-09",
    )


def test_criterion_4_piece_bound():
    rng = np.random.default_rng(13)
    failures = []
    details = []
    for a in (1.1, 1.5, 2**0.5, 2.0, 2.5, 3.0, 5.0, 10.0):
        pieces = enumerate_pieces(a)
        count = len(pieces)
        fine = piece_count_bound(a)
        coarse = fuzzy_ceil(a) + 2
        if count > fine:
            failures.append(f"a={a:g}: count {count} > fine bound {fine}")
        if count > coarse:
            failures.append(f"a={a:g}: count {count} > coarse bound {coarse}")
        area_sum = sum(p.area for p in pieces)
        if abs(area_sum - 1.0) > 1e-9:
            failures.append(f"a={a:g}: areas sum to {area_sum}")
        spec = make_brick_spec([1.0 / a, a])
        labels = DissectionMap(spec).forward(rng.random((10_000, 2))).u
        algorithmic = {tuple(int(v) for v in row) for row in labels}
        geometric = {p.u for p in pieces}
        if algorithmic != geometric:
            failures.append(f"a={a:g}: label sets disagree")
        details.append(f"a={a:g}: {count}/{fine}/{coarse}")
    _report(
        4,
        "2D piece bound",
        not failures,
        "count/fine/coarse " + ", ".join(details)
        + ("; " + "; ".join(failures) if failures else "")
        + "; a=1.1 fine bound is a known paper defect, see notes",
    )


def test_criterion_5_measure_preservation():
    rng = np.random.default_rng(31)
    min_p = 1.0
    for n in (2, 3, 8):
        spec = make_brick_spec(random_unit_lengths(n, rng))
        alpha = DissectionMap(spec).forward(rng.random((100_000, n))).alpha
        for j in range(n):
            min_p = min(min_p, float(stats.kstest(alpha[:, j], "uniform").pvalue))
    _report(
        5,
        "measure preservation (KS)",
        min_p >= 0.01,
        f"n in (2,3,8), 100000 samples, min per-coordinate p-value {min_p:.4f} >= 0.01",
    )


def test_criterion_6_piecewise_isometry():
    rng = np.random.default_rng(17)
    worst = 0.0
    for n in (2, 3, 8):
        spec = make_brick_spec(random_unit_lengths(n, rng))
        dmap = DissectionMap(spec)
        x1 = rng.random((25_000, n))
        x2 = np.clip(x1 + rng.uniform(-0.02, 0.02, size=x1.shape), 0.0, 1.0 - 1e-12)
        img1, img2 = dmap.forward(x1), dmap.forward(x2)
        same = np.all(img1.u == img2.u, axis=1)
        assert same.sum() >= 10_000, f"n={n}: only {same.sum()} same-piece pairs"
        keep = np.flatnonzero(same)[:10_000]
        d_cube = np.linalg.norm((x1 - x2)[keep], axis=1)
        d_brick = np.linalg.norm((img1.c - img2.c)[keep], axis=1)
        worst = max(worst, float(np.abs(d_cube - d_brick).max()))
    _report(
        6,
        "piecewise isometry",
        worst <= 1e-9,
        f"10000 same-piece pairs per n in (2,3,8), max distortion {worst:.2e} <= 1e-09",
    )


def test_criterion_7_linear_scaling(capsys):
    from brickdissect import cli

    started = time.perf_counter()
    code = cli.main(["bench", "--seed", "0"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - started
    with capsys.disabled():
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,points,seconds_per_point"
        sizes = [int(line.split(",")[0]) for line in lines[1:-1]]
        assert sizes == [2**k for k in range(8, 21)]
        slope_line = lines[-1]
        assert slope_line.startswith("# loglog_slope = ")
        slope = float(slope_line.split("=")[1])
        passed = 0.8 <= slope <= 1.3 and elapsed < 300.0
        _report(
            7,
            "O(n) scaling",
            passed,
            f"cmd_bench n=2^8..2^20, log-log slope {slope:.3f} in [0.8, 1.3], "
            f"runtime {elapsed:.1f}s < 300s",
        )


def test_criterion_8_worked_example():
    spec = make_brick_spec([2**-0.5, 2**0.5])
    image = cube_to_brick(np.array([0.1, 0.9]), spec)
    u_ok = image.u.tolist() == [-1, 1]
    c_ok = abs(image.c[0] - 0.141421) <= 1e-6 and abs(image.c[1]) <= 1e-6
    _report(
        8,
        "worked 2D example",
        u_ok and c_ok,
        f"lengths (1/sqrt2, sqrt2), x=(0.1, 0.9) -> u={image.u.tolist()}, "
        f"c=({image.c[0]:.6f}, {image.c[1]:.6f})",
    )
