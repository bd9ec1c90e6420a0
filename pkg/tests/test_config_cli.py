import pytest

from commnet.cli import main
from commnet.config import ExperimentConfig, default_config_text, load_config, parse_config_text
from commnet.errors import ConfigError


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    assert load_config(path) == ExperimentConfig()


def test_defaults_text_round_trips():
    values = parse_config_text(default_config_text())
    assert ExperimentConfig(**values) == ExperimentConfig()


def test_default_values():
    cfg = ExperimentConfig()
    assert cfg.st_km2 == 10.0 and cfg.sc_km2 == 1.0
    assert cfg.lambda_c_bs_km2 == 20.0 and cfg.lambda_s_bs_km2 == 5.0
    assert cfg.rho == 1.0 and cfg.beta_c == 0.5 and cfg.beta_s == 1.5
    assert cfg.p_t_w == 0.1 and cfg.lambda_h == 1.0 and cfg.alpha == 4.0
    assert cfg.v_mps == 5.0 and cfg.delta_t_m_s == 10.0


def test_community_exceeding_plane_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("sc_km2 = 11\n")
    with pytest.raises(ConfigError, match="sc_km2"):
        load_config(path)


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("sc_miles2 = 1\n")
    with pytest.raises(ConfigError, match="sc_miles2"):
        load_config(path)


def test_non_numeric_value_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("rho = fast\n")
    with pytest.raises(ConfigError, match="rho"):
        load_config(path)


def test_density_ordering_enforced(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("lambda_c_bs_km2 = 3\nlambda_s_bs_km2 = 5\n")
    with pytest.raises(ConfigError, match="lambda_c_bs_km2"):
        load_config(path)


def test_override_beats_file(tmp_path):
    path = tmp_path / "seed.cfg"
    path.write_text("seed = 1\n")
    cfg = load_config(path, overrides={"seed": 7})
    assert cfg.seed == 7


def test_comments_and_blank_lines(tmp_path):
    path = tmp_path / "ok.cfg"
    path.write_text("# a comment\n\nseed = 3\n")
    assert load_config(path).seed == 3


def test_unit_conversions():
    cfg = ExperimentConfig()
    lay = cfg.layout()
    assert lay.s_total == pytest.approx(10e6)
    assert lay.s_community == pytest.approx(1e6)
    dep = cfg.deployment()
    assert dep.lambda_c_bs == pytest.approx(20e-6)
    assert dep.m_community(lay) == 20
    assert dep.m_outside(lay) == 45
    assert cfg.channel(gamma0_db=10.0).gamma0 == pytest.approx(10.0)
    assert cfg.macro_mobility().delta_r == pytest.approx(50.0)


def test_cli_print_defaults(capsys):
    assert main(["config", "--print-defaults"]) == 0
    out = capsys.readouterr().out
    assert "st_km2 = 10.0" in out
    assert "seed =" in out


def test_cli_config_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("sc_km2 = 11\n")
    assert main(["validate", "--config", str(path)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_missing_config_file(capsys):
    assert main(["validate", "--config", "/nonexistent/x.cfg"]) == 2


def test_cli_seed_override_changes_output(tmp_path):
    cfgfile = tmp_path / "c.cfg"
    cfgfile.write_text("seed = 1\nn_jumps = 50\n")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(cfgfile), "--out", str(a)]) == 0
    assert main(["simulate", "--config", str(cfgfile), "--seed", "1", "--out", str(b)]) == 0
    assert (a / "trajectory_imm.csv").read_bytes() == (b / "trajectory_imm.csv").read_bytes()
    c = tmp_path / "c"
    assert main(["simulate", "--config", str(cfgfile), "--seed", "2", "--out", str(c)]) == 0
    assert (a / "trajectory_imm.csv").read_bytes() != (c / "trajectory_imm.csv").read_bytes()


def test_cli_simulate_rwp(tmp_path):
    assert main(["simulate", "--model", "rwp", "--n-jumps", "20",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "trajectory_rwp.csv").read_text().splitlines()
    assert len(lines) == 21
    assert all(line.split(",")[6] == "explore" for line in lines[1:])
