"""Tests for the run configuration and the command line interface."""

import json

import pytest

import logchoquard as lcq
from logchoquard.errors import ConfigError

from .utils import MINIMAL_CONFIG, QUICK_CONFIG


def test_minimal_config_defaults():
    config = lcq.parse_config_text(MINIMAL_CONFIG)
    assert config.problem == lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    assert config.potential == "constant"
    assert config.solver_enabled
    assert config.solver == lcq.SaddleOptions()
    assert config.nonlinearity.lam is None
    assert config.seed == 0
    assert config.mu_form == "difference"
    assert config.R == pytest.approx(1 / 3)
    # the plateau corners are grid nodes
    grid = config.make_grid()
    for radius in (1 / 8, 1 / 6, 1 / 4, 1 / 3):
        assert grid.has_node(radius)


def test_kebab_and_snake_keys():
    kebab = lcq.parse_config_text(QUICK_CONFIG)
    snake = lcq.parse_config_text(QUICK_CONFIG.replace("-", "_"))
    assert kebab == snake
    assert kebab.grid.n_uniform == 32
    assert kebab.grid.r_max == 8.0
    assert not kebab.solver_enabled
    assert kebab.seed == 3


def test_config_invalid_envelope():
    """tau must lie in ((1 - 2/N) s, s)."""
    text = MINIMAL_CONFIG.replace("tau = 0.25", "tau = 0.6")
    with pytest.raises(ConfigError, match="problem"):
        lcq.parse_config_text(text)


def test_config_unknown_key():
    text = MINIMAL_CONFIG + "sigma = 1\n"
    with pytest.raises(ConfigError, match="sigma") as info:
        lcq.parse_config_text(text)
    assert info.value.line == 5


@pytest.mark.parametrize(
    ("text", "match"),
    [
        ("[problem\nN = 2\n", "not valid TOML"),
        (MINIMAL_CONFIG + "[solvr]\n", "Unknown table"),
        ("[problem]\nN = 2\ns = 0.5\n", "N, s and tau"),
        ('mu-form = "exact"\n' + MINIMAL_CONFIG, "mu-form"),
        ("R = 2.0\n" + MINIMAL_CONFIG, "R must lie"),
        (MINIMAL_CONFIG + '[potential]\nkind = "gauss"\n', "potential"),
        (MINIMAL_CONFIG + "[grid]\nratio = 1.5\n", "grid"),
        (MINIMAL_CONFIG + '[solver]\nstep-rule = "newton"\n', "solver"),
        (MINIMAL_CONFIG + "[continuation]\nrho = 0.9\n", "rho must lie"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        lcq.parse_config_text(text)


def test_parse_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="does not exist"):
        lcq.parse_config(tmp_path / "missing.toml")


def test_config_echo():
    """The echoed configuration parses back to the same configuration."""
    config = lcq.parse_config_text(QUICK_CONFIG)
    config = config._replace(
        nonlinearity=config.nonlinearity._replace(lam=2.5)
    )
    data = json.loads(config.echo())
    assert data["grid"]["n_uniform"] == 32
    assert data["nonlinearity"]["lam"] == 2.5
    assert lcq.config_from_echo(config.echo()) == config


def test_run_directory(tmp_path):
    config = lcq.parse_config_text(QUICK_CONFIG)
    directory = lcq.RunDirectory(tmp_path / "run")
    assert directory.fields.is_dir()
    directory.write_config(config)
    assert directory.read_config() == config

    u = lcq.bump_field(config.make_grid(), radius=2.0)
    directory.write_field("u0", u)
    again = directory.read_field("u0", order=config.grid.order)
    assert again.grid.n_nodes == u.grid.n_nodes
    assert float(abs(again.values - u.values).max()) == 0.0


def test_cli_constants(capsys):
    code = lcq.main(["constants", "--N", "2", "--s", "0.5", "--tau", "0.25"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["norm_cap"] == 2.0
    assert data["mu_form"] == "difference"
    assert "provenance" in data


def test_cli_constants_invalid(capsys):
    code = lcq.main(["constants", "--N", "2", "--s", "0.5", "--tau", "0.6"])
    assert code == 2
    assert capsys.readouterr().out == ""


def test_cli_config_errors(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text(MINIMAL_CONFIG.replace("tau = 0.25", "tau = 0.6"))
    assert lcq.main(["check-f", "--config", str(path)]) == 2
    missing = str(tmp_path / "missing.toml")
    assert lcq.main(["verify-all", "--config", missing]) == 2


def test_cli_check_f(tmp_path, capsys):
    path = tmp_path / "run.toml"
    path.write_text(QUICK_CONFIG)
    code = lcq.main(["-q", "check-f", "--config", str(path)])
    assert code in (0, 1)
    data = json.loads(capsys.readouterr().out)
    assert data["lambda"] > 0
    assert data["beta"] >= data["beta_0"]


def test_cli_verify_all_without_solver(tmp_path):
    """With the solver disabled only the cheap stages run."""
    path = tmp_path / "run.toml"
    path.write_text(QUICK_CONFIG)
    run = tmp_path / "run"
    argv = ["-q", "verify-all", "--config", str(path), "--run", str(run)]
    code = lcq.main(argv)
    assert code in (0, 1)
    report = lcq.VerificationReport.read(run / "report.json")
    ids = {record.check_id for record in report}
    assert "riesz-planar" in ids
    assert "growth-at-zero" in ids
    assert "kernel-log-lower" in ids
    assert not any(i.startswith("seminorm-oracle") for i in ids)
    assert not any("@mu=" in check_id for check_id in ids)
    assert (code == 0) == report.passed

    # the echoed configuration records the calibrated amplitude
    echoed = lcq.RunDirectory(run).read_config()
    assert echoed.nonlinearity.lam is not None
