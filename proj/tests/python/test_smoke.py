import csv
import json
import math
import os
import subprocess
from pathlib import Path

import pytest

import ctxprob as cp

DATA = Path(os.environ.get("CTXPROB_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))
CLI = os.environ.get("CTXPROB_CLI")


def test_version():
    assert cp.__version__ == "0.1.0"


def test_forward_matches_born_rule():
    c = cp.SplittingCoefficients(0.3, 0.7)
    for theta in (0.1, 1.0, 2.0, 3.0):
        amp = cp.synthesize_wave(c, 0.4, 0.6, theta)
        assert abs(cp.forward_trig(c, 0.4, 0.6, theta) - abs(amp) ** 2) < 1e-12


def test_round_trip_trigonometric():
    c = cp.SplittingCoefficients()
    p_s = cp.forward_trig(c, 0.5, 0.5, 0.9)
    kind = cp.classify(cp.lambda_coefficient(c, p_s, 0.5, 0.5))
    assert isinstance(kind, cp.Trigonometric)
    assert kind.theta == pytest.approx(0.9, abs=1e-9)


def test_hyperbolic_classification_and_range():
    c = cp.SplittingCoefficients()
    kind = cp.classify(-8.9)
    assert isinstance(kind, cp.Hyperbolic) and kind.sign == -1
    assert kind.theta == pytest.approx(math.acosh(8.9), abs=1e-12)
    assert isinstance(cp.classify(1.0), cp.Boundary)
    p_s = cp.forward_hyp(c, 0.2, 0.1, 0.5, 1)
    back = cp.classify(cp.lambda_coefficient(c, p_s, 0.2, 0.1))
    assert back.theta == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(cp.OutOfRange) as info:
        cp.forward_hyp(c, 0.5, 0.5, 0.7, 1)
    assert info.value.value > 1


def test_degenerate_lambda():
    with pytest.raises(cp.DegenerateBranch):
        cp.lambda_coefficient(cp.SplittingCoefficients(), 0.3, 0.0, 0.5)


def test_decompose_and_validation():
    model = cp.ContextualModel(["a", "b"], [0.5, 0.5], [0.8, 0.2], [0.2, 0.8], cp.SplittingCoefficients())
    assert cp.validate_model(model) == []
    d = cp.decompose(model)
    assert [b.delta for b in d.bins] == pytest.approx([0.0, 0.0], abs=1e-15)
    bad = cp.ContextualModel(["a", "b"], [0.5, 0.6], [0.8, 0.2], [0.2, 0.8], cp.SplittingCoefficients())
    assert cp.validate_model(bad)
    with pytest.raises(cp.InvariantError):
        cp.decompose(bad)


def test_split_complex_identity():
    a, b, theta = 0.7, 0.4, 2.3
    z = cp.SplitComplex(a) + cp.SplitComplex(b) * cp.SplitComplex.exp_j(theta)
    expected = a * a + b * b + 2 * a * b * math.cosh(theta)
    assert cp.split_modulus(z) == pytest.approx(expected, rel=1e-12)
    lhs, rhs = cp.cos_identity(a, b, theta)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_two_slit_wave_is_normalized():
    p1 = [0.25, 0.25, 0.25, 0.25]
    wave = cp.synthesize_two_slit_wave(["0", "1", "2", "3"], p1, p1, [math.pi / 2] * 4)
    assert sum(wave.born()) == pytest.approx(1.0, abs=1e-12)


def test_scenario_errors():
    with pytest.raises(cp.ParseError) as info:
        cp.Scenario.load(str(DATA / "invalid.json"))
    assert "grid.bins" in str(info.value)
    with pytest.raises(cp.ParseError):
        cp.Scenario.from_json("{")


def test_experiment_in_process():
    sc = cp.Scenario.load(str(DATA / "small.json"))
    probs, norm = cp.analytic_pattern(sc)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)
    assert norm == pytest.approx(1.0, abs=0.05)
    report = cp.run_experiment(sc)
    assert report.violation_statistic > 5
    passed, _ = cp.alternative_condition_check(report)
    assert passed
    assert sum(report.c_hat) == pytest.approx(1.0, abs=0.02)
    again = cp.run_experiment(sc, threads=3)
    assert cp.report_json(report, sc) == cp.report_json(again, sc)


def test_simulate_context_counts():
    sc = cp.Scenario.load(str(DATA / "small.json"))
    counts = cp.simulate_context(sc, cp.Context.S1)
    assert counts.total_emitted == 20000
    assert 0 < counts.detected <= 20000
    assert len(counts.counts) == sc.bins


@pytest.mark.skipif(not CLI, reason="CLI path not provided")
def test_cli_matches_library(tmp_path):
    scenario = str(DATA / "small.json")
    report_path = tmp_path / "report.json"
    subprocess.run([CLI, "simulate", scenario, "--out", str(report_path), "--counts-prefix", str(tmp_path / "c_")],
                   check=True)
    sc = cp.Scenario.load(scenario)
    assert report_path.read_text() == cp.report_json(cp.run_experiment(sc), sc)

    analysis_path = tmp_path / "analysis.csv"
    subprocess.run([CLI, "analyze", *(str(tmp_path / f"c_{k}.csv") for k in ("S", "S1", "S2")),
                    "--out", str(analysis_path)], check=True)
    report = json.loads(report_path.read_text())
    lines = analysis_path.read_text().splitlines()
    rows = list(csv.DictReader(l for l in lines if not l.startswith("#")))
    summary = dict(l[2:].split("=", 1) for l in lines if l.startswith("# "))
    assert len(rows) == len(report["bins"])
    for row, b in zip(rows, report["bins"]):
        assert row["bin"] == b["bin"]
        assert row["kind"] == b["kind"]
        assert float(row["delta"]) == pytest.approx(b["delta"], rel=1e-13, abs=1e-300)
        if b["lambda"] is None:
            assert row["lambda"] == ""
        else:
            assert float(row["lambda"]) == pytest.approx(b["lambda"], rel=1e-13)
    assert float(summary["violation_statistic"]) == pytest.approx(report["violation"]["statistic"], rel=1e-13)
