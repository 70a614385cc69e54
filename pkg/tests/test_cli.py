"""Tests for the command line front end."""

import csv
import json
import math
import os

import numpy as np

from quatwave import cli
from quatwave.synthesis import SampledFunction


def _main(argv):
    try:
        return cli.main(argv)
    except SystemExit as err:
        return err.code


def test_usage_errors(tmp_path):
    out = str(tmp_path / "o")
    for argv in (["--eta", "5", "--out", out],
                 ["--eta", "2", "--out", out],
                 ["--mu", "0", "--out", out],
                 ["--cascade-level", "0", "--out", out],
                 ["--grid-n", "1", "--out", out],
                 ["--tol", "0", "--out", out],
                 ["--eta", "four", "--out", out],
                 ["--no-such-flag", "--out", out],
                 []):
        assert _main(argv) == 64, argv


def test_unwritable_out(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    code = _main(["--seed", "0", "--max-iters", "5",
                  "--out", str(blocker / "sub")])
    assert code == 1


def test_unsolved_run(tmp_path):
    out = tmp_path / "r"
    code = _main(["--eta", "4", "--mu", "1", "--seed", "2",
                  "--max-iters", "40", "--out", str(out)])
    assert code == 2
    doc = json.loads((out / "manifest.json").read_text())
    assert doc["report"]["solved"] is False
    assert doc["report"]["iterations"] == 40
    assert doc["checks"] is None and doc["passed"] is False
    assert not (out / "filters.json").exists()


def test_run_end_to_end(tmp_path):
    out = tmp_path / "run"
    level, grid_n = 3, 21
    code = _main(["--eta", "4", "--mu", "1", "--seed", "0",
                  "--cascade-level", str(level), "--grid-n", str(grid_n),
                  "--out", str(out)])
    assert code == 0

    doc = json.loads((out / "manifest.json").read_text())
    assert doc["passed"] is True
    cfg = doc["config"]
    assert cfg["eta"] == 4 and cfg["mu"] == 1 and cfg["seed"] == 0
    assert cfg["max_iters"] == 10000 and cfg["tol"] == 1e-9
    assert cfg["cascade_level"] == level and cfg["grid_n"] == grid_n
    assert doc["report"]["solved"] is True
    assert doc["report"]["final_residual"] < 1e-9
    assert doc["report"]["constraint_residual_max"] < 1e-8
    checks = doc["checks"]
    assert checks["qqmf"] <= 1e-7
    assert checks["completeness"] <= 1e-7
    assert checks["moments"] <= 1e-7
    assert checks["symmetry"] is None
    assert checks["lambda_min"] > 0
    assert checks["partition"] <= 5e-3
    assert checks["integral_phi_error"] <= 5e-3
    assert checks["integral_psi_max"] <= 5e-3
    assert checks["separability"] > 1e-3

    for name in doc["files"]:
        path = out / name
        assert path.exists() and path.stat().st_size > 0

    n = 3 * 2 ** level + 1
    for name in ("samples_phi.csv", "samples_psi1.csv",
                 "samples_psi2.csv", "samples_psi3.csv"):
        with open(out / name, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x1", "x2", "magnitude", "R", "G", "B"]
        assert len(rows) - 1 == n * n
        assert float(rows[1][0]) == 0.0
        assert float(rows[2][1]) == 2.0 ** (-level)
        assert float(rows[-1][0]) == 3.0 and float(rows[-1][1]) == 3.0

    with open(out / "lambda_grid.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["xi1", "xi2", "lambda"]
    assert len(rows) - 1 == grid_n * grid_n
    assert float(rows[1][0]) == -0.25
    assert all(float(r[2]) > 0 for r in rows[1:])


def test_filters_roundtrip(tmp_path):
    out = tmp_path / "run"
    code = _main(["--seed", "0", "--cascade-level", "3",
                  "--grid-n", "11", "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "manifest.json").read_text())
    fb = cli.load_filters(out / "filters.json")
    assert fb.eta == 4
    checks, _, _, passed = cli.run_checks(fb, 1, False, 0, 3, 11)
    assert passed
    for key, value in doc["checks"].items():
        if value is None:
            assert checks[key] is None
        else:
            assert abs(checks[key] - value) <= 1e-12, key


def test_export_samples_rgb(tmp_path):
    n = 7
    spin = np.ones((n, n), dtype=complex)
    vec = np.zeros((n, n), dtype=complex)
    spin[2, 3] = 1j
    spin[4, 4] = 0.0
    sf = SampledFunction(1, 4, spin, vec)
    path = tmp_path / "s.csv"
    cli.export_samples(sf, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    table = {(float(r[0]), float(r[1])): [float(v) for v in r[2:]]
             for r in rows}
    assert len(rows) == n * n
    # constant 1: unit magnitude, zero color
    assert table[(0.0, 0.0)] == [1.0, 0.0, 0.0, 0.0]
    # pure e12 value: magnitude 1, blue channel pi/2
    got = table[(1.0, 1.5)]
    assert abs(got[0] - 1.0) <= 1e-15
    assert got[1] == 0.0 and got[2] == 0.0
    assert abs(got[3] - math.pi / 2) <= 1e-15
    # zero value: all zeros
    assert table[(2.0, 2.0)] == [0.0, 0.0, 0.0, 0.0]


def test_batch(tmp_path):
    out = tmp_path / "batch"
    code = _main(["--eta", "4", "--mu", "1", "--seeds", "0", "2",
                  "--max-iters", "3000", "--cascade-level", "3",
                  "--grid-n", "11", "--out", str(out)])
    assert code == 0
    assert (out / "seed_0" / "filters.json").exists()
    assert (out / "seed_2" / "manifest.json").exists()
    assert not (out / "seed_2" / "filters.json").exists()

    with open(out / "stats.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(cli.STATS_COLUMNS)
    row = dict(zip(rows[0], rows[1]))
    assert row["eta"] == "4" and row["mu"] == "1"
    assert row["symmetric"] == "False"
    assert row["seeds"] == "2" and row["solved"] == "1"
    # a single solved run: every iteration statistic equals its count
    iters = float(row["min_iters"])
    assert iters > 0
    for key in ("q1_iters", "median_iters", "q3_iters", "mean_iters",
                "max_iters"):
        assert float(row[key]) == iters

    first = (out / "stats.csv").read_bytes()
    code = _main(["--eta", "4", "--mu", "1", "--seeds", "0", "2",
                  "--max-iters", "3000", "--cascade-level", "3",
                  "--grid-n", "11", "--out", str(out)])
    assert code == 0
    assert (out / "stats.csv").read_bytes() == first


def test_batch_zero_solved(tmp_path):
    out = tmp_path / "batch0"
    code = _main(["--seeds", "2", "--max-iters", "40", "--out", str(out)])
    assert code == 0
    with open(out / "stats.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    row = dict(zip(rows[0], rows[1]))
    assert row["solved"] == "0"
    assert all(math.isnan(float(row[k]))
               for k in ("min_iters", "q1_iters", "median_iters",
                         "q3_iters", "mean_iters", "max_iters"))
