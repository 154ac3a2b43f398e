"""End-to-end runs of the saddle search and of the verification pipeline.

These runs solve the mountain-pass problem and take minutes; deselect them
with ``-m "not slow"``.
"""

import pytest

import logchoquard as lcq

PIPELINE_CONFIG = """\
seed = 1

[problem]
N = 2
s = 0.5
tau = 0.25

[grid]
n-uniform = 32
r-max = 12.0
ratio = 1.2
order = 4

[solver]
path-points = 21
tol-residual = 1e-3
max-iterations = 400

[continuation]
schedule = [1.0, 0.5, 0.25]

[verification]
gradient-every = 16
rim-samples = 8
"""

pytestmark = [
    pytest.mark.slow,
    pytest.mark.filterwarnings("ignore::UserWarning"),
]


@pytest.fixture(scope="module")
def config():
    return lcq.parse_config_text(PIPELINE_CONFIG)


def test_saddle_search(config):
    """The level lies strictly between 0 and s/(2N)."""
    config, nl = lcq.cli.run.resolve(config)
    result, records = lcq.cli.run.solve(config, nl, 1.0)
    assert 0 < result.c_mu < lcq.level_threshold(2, 0.5)
    assert result.residual <= config.solver.tol_residual
    assert result.norm < lcq.norm_cap(2, 0.5, 0.25)
    assert float(result.u_mu.values.min()) >= 0
    ids = {record.check_id for record in records}
    assert "level-bound@mu=1" in ids


def test_continuation(config):
    config, nl = lcq.cli.run.resolve(config)
    out, _ = lcq.cli.run.run_continuation(config, nl)
    levels = [row[1] for row in out.levels()]
    assert len(levels) == 3
    assert all(0 < c < 0.125 for c in levels)
    assert out.u0.sup > 0


def test_verify_all(config, tmp_path):
    report = lcq.run_verify_all(config, tmp_path)
    assert (tmp_path / "report.json").is_file()
    assert (tmp_path / "levels.csv").is_file()
    assert (tmp_path / "fields" / "u0.csv").is_file()
    assert (tmp_path / "potential.json").is_file()
    assert lcq.VerificationReport.read(tmp_path / "report.json") == report
    ids = {record.check_id for record in report}
    assert "laplace-residual-h-0.05" in ids
    assert {"seminorm-oracle-hat", "seminorm-oracle-plateau"} <= ids
