import csv
import json
import math

import numpy as np
import pytest

from qwgo.experiments import output, runner
from qwgo.experiments.cli import main
from qwgo.optimizer import ROTATION_SCHEDULE, RunConfig


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def header(path):
    with open(path) as fh:
        return tuple(fh.readline().strip().split(","))


def test_optimize_writes_full_trace(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["optimize", "--objective", "rastrigin", "--algo", "bbw-qw", "--qubits", "9", "--r0", "2",
                 "--seed", "42", "--out", str(out), "--jobs", "1"]) == 0
    assert header(out) == output.TRACE_COLUMNS
    rows = read_csv(out)
    assert len(rows) == 44
    assert [int(r["iteration"]) for r in rows] == list(range(44))
    assert all(int(r["rotations"]) == (0 if r["step_kind"] == "walk" else rc)
               for r, rc in zip(rows, ROTATION_SCHEDULE))


def test_optimize_bbw_has_no_walks(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["optimize", "--algo", "bbw", "--seed", "42", "--out", str(out)]) == 0
    assert {r["step_kind"] for r in read_csv(out)} <= {"uniform", "grover"}


def test_optimize_small_register(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["optimize", "--qubits", "3", "--out", str(out)]) == 0
    assert all(0 <= int(r["sample_index"]) < 8 for r in read_csv(out))


def test_output_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["optimize", "--seed", "3", "--objective", "schwefel", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_experiment_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["experiment", "--runs", "6", "--r0", "2", "--budget", "80"]
    assert main(common + ["--jobs", "1", "--out", str(a)]) == 0
    assert main(common + ["--jobs", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_experiment_groups_and_single_run(tmp_path):
    out, svg = tmp_path / "curve.csv", tmp_path / "curve.svg"
    assert main(["experiment", "--runs", "1", "--budget", "100", "--jobs", "1", "--out", str(out),
                 "--svg", str(svg)]) == 0
    assert header(out) == output.CURVE_COLUMNS
    rows = read_csv(out)
    groups = {(r["algorithm"], r["r0"]) for r in rows}
    assert len(groups) == 6
    assert {float(r["success_prob"]) for r in rows} <= {0.0, 1.0}
    assert svg.read_text().startswith("<svg")
    for key in groups:
        for axis in ("iterations", "evaluations"):
            probs = [float(r["success_prob"]) for r in rows if (r["algorithm"], r["r0"]) == key and r["axis"] == axis]
            assert probs == sorted(probs)


def test_curve_statistics():
    curve = runner.success_curve([3, None, 1, 5], range(7), algorithm="a", objective="o", r0=0, axis="evaluations")
    assert [p.success_prob for p in curve.points] == [0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75]
    for p in curve.points:
        assert p.stderr == pytest.approx(math.sqrt(p.success_prob * (1 - p.success_prob) / 4))


def test_pdf_rows_are_distributions(tmp_path):
    out = tmp_path / "pdf.csv"
    assert main(["pdf", "--runs", "3", "--jobs", "1", "--out", str(out), "--svg", str(tmp_path / "p.svg")]) == 0
    assert header(out) == output.PDF_COLUMNS
    rows = read_csv(out)
    assert len(rows) == 44 * 512
    sums = {}
    for r in rows:
        sums[r["iteration"]] = sums.get(r["iteration"], 0.0) + float(r["mean_probability"])
    assert all(abs(s - 1) <= 1e-9 for s in sums.values())


def test_bbw_zero_rotation_pdfs_are_uniform():
    traces = runner.run_many("bbw", RunConfig(), 4, record_pdf=True)
    pdfs = runner.average_pdfs(traces)
    for avg, rc in zip(pdfs, ROTATION_SCHEDULE):
        if rc == 0:
            np.testing.assert_allclose(avg.mean_probability, 1 / 512, atol=1e-12)
            assert runner.shannon_entropy(avg.mean_probability) == pytest.approx(math.log(512), abs=1e-12)
    qw = runner.average_pdfs(runner.run_many("bbw-qw", RunConfig(), 4, record_pdf=True))
    assert np.ptp(qw[0].mean_probability) > 0


def test_validate_all_pass(capsys):
    assert main(["validate"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 7 and all(line.startswith("PASS") for line in lines)


def test_validate_single_check(capsys):
    assert main(["validate", "--check", "grover-law"]) == 0
    assert capsys.readouterr().out.count("\n") == 1
    assert main(["validate", "--check", "expm", "--n", "256", "--z", "20"]) == 0
    line = capsys.readouterr().out
    err = float(line.split("max_err=")[1].split()[0])
    assert err <= 1e-6


def test_baseline_groups(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["baseline", "--method", "sa", "--t0", "100", "--runs", "3", "--budget", "200", "--jobs", "1",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert {r["algorithm"] for r in rows} == {"sa-t0-100"}
    assert {r["axis"] for r in rows} == {"evaluations"}
    assert main(["baseline", "--method", "ga", "--pop", "5,25,50", "--runs", "2", "--budget", "100", "--jobs", "1",
                 "--out", str(out)]) == 0
    assert {r["algorithm"] for r in read_csv(out)} == {"ga-pop-5", "ga-pop-25", "ga-pop-50"}


def test_baseline_rejects_constant_objective(tmp_path, table_objective):
    path, (lo, hi) = table_objective(np.full(8, 5.0))
    assert main(["baseline", "--objective", path, "--domain", f"{lo}:{hi}", "--qubits", "3", "--runs", "1",
                 "--out", str(tmp_path / "c.csv")]) == 1


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"qubits": 4, "seed": 5, "domain": [-2, 2], "max-iter": 10, "algo": "bbw"}))
    out = tmp_path / "t.csv"
    assert main(["optimize", "--config", str(cfg), "--max-iter", "12", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 12
    assert all(-2 <= float(r["sample_x"]) < 2 and int(r["sample_index"]) < 16 for r in rows)
    assert {r["step_kind"] for r in rows} <= {"uniform", "grover"}


@pytest.mark.parametrize("argv", [
    ["optimize", "--qubits", "nine"],
    ["optimize", "--objective", "rosenbrock"],
    ["optimize", "--domain", "5"],
    ["optimize", "--domain", "5:-5"],
    ["experiment", "--runs", "0"],
    ["experiment", "--algo", "dh"],
    ["baseline", "--method", "pso"],
    ["validate", "--check", "nope"],
    ["frobnicate"],
])
def test_bad_usage_exits_1(argv, tmp_path, capsys):
    argv = argv + (["--out", str(tmp_path / "x.csv")] if argv[0] in ("optimize", "experiment", "baseline") else [])
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert main(["optimize", "--config", str(cfg), "--out", str(tmp_path / "t.csv")]) == 1


def test_numerical_failure_exits_2(tmp_path, table_objective):
    path, (lo, hi) = table_objective(np.full(8, -1000.0))
    assert main(["optimize", "--objective", path, "--domain", f"{lo}:{hi}", "--qubits", "3",
                 "--out", str(tmp_path / "t.csv")]) == 2


def test_fmt():
    assert output.fmt(True) == "1" and output.fmt(None) == "" and output.fmt(0.1) == "0.1"


def test_svg_is_well_formed():
    import xml.etree.ElementTree as ET

    svg = output.polyline_svg([("a<b", [0, 1, 2], [0, 0.5, 1])], title="t&t")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
