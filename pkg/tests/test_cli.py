"""Command-line surface: formats, exit codes, diagnostics, determinism."""

import json

import numpy as np
import pytest

from brickdissect import cli
from brickdissect.core import DissectionMap


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_map_identity_lengths(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("0.3,0.7\n")
    out = tmp_path / "out.csv"
    code, _, _ = run(["map", "--lengths", "1,1", str(src), str(out)], capsys)
    assert code == 0
    values = [float(v) for v in out.read_text().strip().split(",")]
    assert values == [0.3, 0.7, 0, 0]


def test_map_worked_example(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("0.1,0.9\n")
    out = tmp_path / "out.csv"
    code, _, _ = run(
        ["map", "--lengths", "0.70710678,1.41421356", str(src), str(out)], capsys
    )
    assert code == 0
    row = [float(v) for v in out.read_text().strip().split(",")]
    assert row[0] == pytest.approx(0.141421, abs=1e-6)
    assert row[1] == pytest.approx(0.0, abs=1e-6)
    assert row[2:] == [-1.0, 1.0]


def test_map_rejects_out_of_domain_point(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("0.2,0.2\n1.5,0.2\n")
    code, _, err = run(["map", "--lengths", "1,1", str(src), "-"], capsys)
    assert code == 2
    assert "line 2" in err
    assert "coordinate 1" in err


def test_map_rejects_nonunit_volume_without_normalize(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("0.5,0.5\n")
    code, _, err = run(["map", "--lengths", "2,2", str(src), "-"], capsys)
    assert code == 2
    assert "volume" in err.lower()
    code, out, _ = run(["map", "--lengths", "2,2", "--normalize", str(src), "-"], capsys)
    assert code == 0
    assert out.strip() == "0.5,0.5,0,0"


def test_map_invmap_round_trip_csv(tmp_path, capsys):
    rng = np.random.default_rng(7)
    points = rng.random((25, 3))
    src = tmp_path / "in.csv"
    src.write_text("\n".join(",".join(f"{v:.17g}" for v in row) for row in points) + "\n")
    mapped = tmp_path / "brick.csv"
    back = tmp_path / "cube.csv"
    lengths = "0.5,2.0,1.0"
    assert run(["map", "--lengths", lengths, str(src), str(mapped)], capsys)[0] == 0
    brick_rows = [line.split(",") for line in mapped.read_text().strip().splitlines()]
    only_points = "\n".join(",".join(row[:3]) for row in brick_rows) + "\n"
    (tmp_path / "brickpts.csv").write_text(only_points)
    assert run(
        ["invmap", "--lengths", lengths, str(tmp_path / "brickpts.csv"), str(back)], capsys
    )[0] == 0
    restored = np.array(
        [[float(v) for v in line.split(",")][:3] for line in back.read_text().strip().splitlines()]
    )
    assert np.abs(restored - points).max() <= 1e-9


def test_invmap_origin_and_domain_error(tmp_path, capsys):
    src = tmp_path / "c.csv"
    src.write_text("0,0\n")
    code, out, _ = run(["invmap", "--lengths", "0.5,2", str(src), "-"], capsys)
    assert code == 0
    assert out.strip() == "0,0,0,0"
    src.write_text("0.9,0.2\n")  # 0.9 > side 0.5
    code, _, err = run(["invmap", "--lengths", "0.5,2", str(src), "-"], capsys)
    assert code == 2
    assert "line 1" in err


def test_json_format_round_trip(tmp_path, capsys):
    payload = {"lengths": [0.5, 2.0], "points": [[0.25, 0.75], [0.1, 0.2]]}
    src = tmp_path / "in.json"
    src.write_text(json.dumps(payload))
    out = tmp_path / "out.json"
    code, _, _ = run(["map", "--format", "json", str(src), str(out)], capsys)
    assert code == 0
    result = json.loads(out.read_text())
    assert set(result) == {"lengths", "points", "labels"}
    assert len(result["points"]) == 2
    assert all(len(row) == 2 for row in result["labels"])
    spec_points = np.array(payload["points"])
    from brickdissect import cube_to_brick, make_brick_spec

    spec = make_brick_spec([0.5, 2.0])
    expected = cube_to_brick(spec_points, spec)
    np.testing.assert_allclose(np.array(result["points"]), expected.c, atol=1e-11)
    np.testing.assert_array_equal(np.array(result["labels"]), expected.u)


def test_json_requires_lengths_somewhere(tmp_path, capsys):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"points": [[0.1, 0.2]]}))
    code, _, err = run(["map", "--format", "json", str(src), "-"], capsys)
    assert code == 1
    assert "lengths" in err


def test_malformed_inputs_exit_one(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("0.1,0.2\n0.3\n")
    assert run(["map", "--lengths", "1,1", str(src), "-"], capsys)[0] == 1
    src.write_text("0.1,abc\n")
    assert run(["map", "--lengths", "1,1", str(src), "-"], capsys)[0] == 1
    assert run(["map", "--lengths", "1,1", str(tmp_path / "missing.csv"), "-"], capsys)[0] == 1
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert run(["map", "--format", "json", bad_json.as_posix(), "-"], capsys)[0] == 1


def test_usage_errors_exit_one(capsys):
    assert cli.main(["map"]) == 1  # missing positionals
    capsys.readouterr()
    assert cli.main(["bogus-command"]) == 1
    capsys.readouterr()


def test_pieces_output(capsys):
    code, out, _ = run(["pieces", "1.4142135623730951"], capsys)
    assert code == 0
    assert "pieces: 3" in out
    assert "bound 2+ceil(sqrt(a^2-1)): 3" in out
    assert out.count("piece u=") == 3
    code, out, _ = run(["pieces", "1"], capsys)
    assert code == 0
    assert "pieces: 1" in out
    code, out, _ = run(["pieces", "5"], capsys)
    assert code == 0
    assert "pieces: 7" in out
    assert "bound ceil(a)+2: 7" in out
    assert run(["pieces", "0.5"], capsys)[0] == 2


def test_svg_command(tmp_path, capsys):
    out = tmp_path / "figure.svg"
    code, _, _ = run(["svg", "1.4142135623730951", "--out", str(out)], capsys)
    assert code == 0
    text = out.read_text()
    assert text.startswith("<?xml")
    assert text.count("<polygon") == 6  # 3 pieces x 2 panels
    assert run(["svg", "0.5", "--out", str(tmp_path / "no.svg")], capsys)[0] == 2


def test_svg_golden_match_via_cli(tmp_path, capsys):
    from pathlib import Path

    golden = Path(__file__).parent / "golden" / "dissection_a2_side_by_side.svg"
    out = tmp_path / "a2.svg"
    assert run(["svg", "2", "--out", str(out)], capsys)[0] == 0
    assert out.read_bytes() == golden.read_bytes()


def test_verify_passes_and_is_deterministic(capsys):
    code, out1, _ = run(["verify", "--n", "2", "--trials", "2000", "--seed", "5"], capsys)
    assert code == 0
    assert out1.count("PASS") == 4
    code, out2, _ = run(["verify", "--n", "2", "--trials", "2000", "--seed", "5"], capsys)
    assert out1 == out2


def test_verify_n1_passes(capsys):
    code, out, _ = run(["verify", "--n", "1", "--trials", "500"], capsys)
    assert code == 0


def test_verify_fails_on_injected_fault(monkeypatch, capsys):
    original = DissectionMap.inverse

    def broken(self, c):
        x, u = original(self, c)
        return x + 1e-6, u

    monkeypatch.setattr(DissectionMap, "inverse", broken)
    code, out, _ = run(["verify", "--n", "2", "--trials", "500"], capsys)
    assert code != 0
    assert "FAIL" in out


def test_bench_csv_and_slope(capsys):
    code, out, _ = run(
        ["bench", "--sizes", "32,64,128", "--points-per-n", "20", "--seed", "1"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,points,seconds_per_point"
    assert len(lines) == 5
    assert lines[-1].startswith("# loglog_slope = ")


def test_bench_singleton_omits_slope(capsys):
    code, out, _ = run(["bench", "--sizes", "64", "--points-per-n", "5"], capsys)
    assert code == 0
    assert "loglog_slope" not in out


def test_bench_empty_sizes_exits_one(capsys):
    assert run(["bench", "--sizes", ""], capsys)[0] == 1
    assert run(["bench", "--sizes", "12,x"], capsys)[0] == 1
    assert run(["bench", "--sizes", "0,4"], capsys)[0] == 1


def test_map_output_deterministic(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("0.25,0.5\n0.125,0.875\n")
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    run(["map", "--lengths", "0.5,2", str(src), str(out1)], capsys)
    run(["map", "--lengths", "0.5,2", str(src), str(out2)], capsys)
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_adds_no_arithmetic(tmp_path, capsys):
    # CLI output must equal the library result exactly at 12 significant digits
    from brickdissect import cube_to_brick, make_brick_spec

    rng = np.random.default_rng(13)
    points = rng.random((10, 2))
    src = tmp_path / "pts.csv"
    src.write_text("\n".join(",".join(f"{v:.17g}" for v in row) for row in points) + "\n")
    out = tmp_path / "out.csv"
    run(["map", "--lengths", "0.70710678,1.41421356", str(src), str(out)], capsys)
    spec = make_brick_spec([0.70710678, 1.41421356])
    image = cube_to_brick(np.asarray([[float(f"{v:.17g}") for v in row] for row in points]), spec)
    for line, c_row, u_row in zip(out.read_text().strip().splitlines(), image.c, image.u):
        parts = line.split(",")
        assert parts[:2] == [f"{v:.12g}" for v in c_row]
        assert [int(p) for p in parts[2:]] == list(u_row)
