import random

import pytest

from biasgame.metrics.alpha import bootstrap_alpha
from biasgame.metrics.report import metrics_report, write_alpha_histogram
from biasgame.metrics.comparison import ConfusionMatrix

from test_alpha import data_from_matrix, random_matrix


def test_perfect_agreement_interval_is_one_one():
    m = [[1, 0, 1, 0], [1, 0, 1, 0], [1, 0, 1, 0]]
    res = bootstrap_alpha(data_from_matrix(m), b=250, seed=3)
    assert res.interval.low == 1.0 and res.interval.high == 1.0
    assert all(a == pytest.approx(1.0) for a in res.alphas)


def test_fixed_seed_reproduces_bit_identical():
    rng = random.Random(11)
    m = random_matrix(rng, 5, 10)
    data = data_from_matrix(m)
    a = bootstrap_alpha(data, b=400, seed=9)
    b = bootstrap_alpha(data, b=400, seed=9)
    assert a.alphas == b.alphas
    assert (a.interval.low, a.interval.high) == (b.interval.low, b.interval.high)
    c = bootstrap_alpha(data, b=400, seed=10)
    assert c.alphas != a.alphas


def test_skipped_resamples_counted():
    # two units, opposite unanimous values: a resample picking one unit twice
    # is degenerate and must be skipped, not scored as alpha = 1
    m = [[1, 0], [1, 0]]
    res = bootstrap_alpha(data_from_matrix(m), b=200, seed=0)
    assert res.skipped > 0
    assert len(res.alphas) == 200 - res.skipped
    assert all(a == pytest.approx(1.0) for a in res.alphas)


def test_unit_resampling_keeps_columns():
    # one noisy unit among perfect ones: every resample alpha stays within bounds
    m = [[1, 0, 1, 1], [1, 0, 0, 1], [1, 0, 1, 1]]
    res = bootstrap_alpha(data_from_matrix(m), b=300, seed=2)
    assert res.interval.low <= res.alpha <= res.interval.high or res.skipped > 0
    assert all(a <= 1.0 + 1e-12 for a in res.alphas)


def test_point_alpha_attached():
    m = [[1, 0, 1, 1, 0], [1, 0, 1, 0, 0]]
    res = bootstrap_alpha(data_from_matrix(m), b=50, seed=1)
    assert res.alpha == pytest.approx(0.64, abs=1e-12)


# -- report assembly ------------------------------------------------------------


def test_metrics_report_fields():
    m = [[1, 0, 1, 1, 0], [1, 0, 1, 0, 0]]
    report = metrics_report(data_from_matrix(m), b=100, seed=4, level=0.95)
    for key in ("alpha", "ci_low", "ci_high", "level", "bootstrap_b", "seed", "skipped_resamples"):
        assert key in report
    assert report["alpha"] == pytest.approx(0.64, abs=1e-12)
    assert report["bootstrap_b"] == 100 and report["seed"] == 4


def test_metrics_report_flags_empty_store():
    report = metrics_report(None)
    assert report["error"] == "no_pairable_values"
    assert report["alpha"] is None


def test_metrics_report_with_confusion_block():
    report = metrics_report(None, confusion=ConfusionMatrix(tp=1, fn=1, fp=1, tn=1))
    assert report["confusion"] == {"tp": 1, "fn": 1, "fp": 1, "tn": 1}
    assert report["metrics"]["accuracy"] == pytest.approx(0.5)


def test_histogram_csv_roundtrip(tmp_path):
    path = tmp_path / "hist.csv"
    with open(path, "w", newline="") as fh:
        write_alpha_histogram(fh, (0.5, 0.25, 1.0))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "resample_index,alpha"
    assert lines[1].startswith("0,") and len(lines) == 4
    assert float(lines[2].split(",")[1]) == 0.25
