import xml.etree.ElementTree as ET

import pytest

from commnet.config import ExperimentConfig
from commnet.figures import FigureSpec, compute_figure_rows, figure_header, run_figure
from commnet.validate import format_report, run_validation

FAST = dict(n_jumps=2000, n_mc=2000, seed=123)


@pytest.fixture(scope="module")
def fast_cfg():
    return ExperimentConfig(**FAST)


def test_figure_headers_stable():
    assert figure_header(2) == ["figure_id", "model", "v_mps", "sc_st_ratio",
                                "analytic", "simulated", "std_error", "n_samples", "seed"]
    assert figure_header(4) == ["figure_id", "model", "gamma0_db", "lambda_c_bs_km2",
                                "lambda_s_bs_km2", "analytic", "simulated",
                                "std_error", "n_samples", "seed"]
    assert figure_header(7) == ["figure_id", "model", "gamma0_db", "v_mps",
                                "analytic", "simulated", "std_error", "n_samples", "seed"]


def test_unknown_figure_rejected():
    with pytest.raises(ValueError):
        FigureSpec(1)


@pytest.mark.parametrize("fid", [2, 3])
def test_mobility_figure_grid_shape(fast_cfg, fid):
    rows = compute_figure_rows(fid, fast_cfg)
    assert len(rows) == 2 * 4 * 10  # models x speeds x ratios
    header = figure_header(fid)
    for row in rows:
        assert len(row) == len(header)
        assert row[1] in ("IMM", "RWP")
        for col in ("analytic", "simulated"):
            val = float(row[header.index(col)])
            assert 0.0 <= val <= 1.0
        assert float(row[header.index("std_error")]) >= 0.0


def test_figure5_rows(fast_cfg):
    rows = compute_figure_rows(5, fast_cfg)
    assert len(rows) == 3 * 11
    header = figure_header(5)
    for row in rows:
        assert row[header.index("analytic")] == ""  # no closed form in scope
        assert 0.0 <= float(row[header.index("simulated")]) <= 1.0


def test_figure7_rows(fast_cfg):
    rows = compute_figure_rows(7, fast_cfg)
    assert len(rows) == 4 * 11
    header = figure_header(7)
    for row in rows:
        assert 0.0 <= float(row[header.index("analytic")]) <= 1.0
        assert 0.0 <= float(row[header.index("simulated")]) <= 1.0


def test_csv_determinism_same_seed(fast_cfg, tmp_path):
    a = run_figure(2, fast_cfg, tmp_path / "a")[0]
    b = run_figure(2, fast_cfg, tmp_path / "b")[0]
    assert open(a, "rb").read() == open(b, "rb").read()


def test_csv_determinism_across_workers(tmp_path):
    one = ExperimentConfig(workers=1, **FAST)
    four = ExperimentConfig(workers=4, **FAST)
    a = run_figure(3, one, tmp_path / "w1")[0]
    b = run_figure(3, four, tmp_path / "w4")[0]
    assert open(a, "rb").read() == open(b, "rb").read()


def test_csv_changes_with_seed(tmp_path):
    a = run_figure(2, ExperimentConfig(n_jumps=2000, n_mc=2000, seed=1), tmp_path / "s1")[0]
    b = run_figure(2, ExperimentConfig(n_jumps=2000, n_mc=2000, seed=2), tmp_path / "s2")[0]
    assert open(a, "rb").read() != open(b, "rb").read()


def test_svg_emission(fast_cfg, tmp_path):
    paths = run_figure(7, fast_cfg, tmp_path, svg=True)
    assert paths[1].endswith(".svg")
    root = ET.parse(paths[1]).getroot()
    assert root.tag.endswith("svg")
    polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(polylines) == 4  # one curve per speed


def test_validate_report_passes_at_defaults():
    cfg = ExperimentConfig(n_mc=20000)
    checks = run_validation(cfg)
    by_name = {c.name: c for c in checks}
    assert by_name["config-constraints"].status == "PASS"
    assert by_name["community-hit-fraction"].status in ("PASS", "INCONCLUSIVE")
    assert by_name["fixed-point-convergence"].status == "PASS"
    assert not any(c.status == "FAIL" for c in checks), format_report(checks)


def test_validate_reports_named_violation():
    cfg = ExperimentConfig(lambda_c_bs_km2=3.0, lambda_s_bs_km2=5.0)
    checks = run_validation(cfg)
    assert checks[0].name == "config-constraints"
    assert checks[0].status == "FAIL"
    assert "lambda_c_bs_km2" in checks[0].detail


def test_validate_noise_floor_inconclusive():
    # tiny Monte Carlo budgets must degrade to inconclusive, not fail
    cfg = ExperimentConfig(n_mc=100)
    checks = run_validation(cfg)
    noisy = [c for c in checks if c.name.startswith(("wait-mean", "single-interferer",
                                                     "macro-numeric"))]
    assert all(c.status in ("PASS", "INCONCLUSIVE") for c in noisy)
