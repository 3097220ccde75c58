import subprocess
import sys

import pytest

from fracsim.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from fracsim.harness import read_csv

SMALL = """\
[sample]
n = 200
[ml-eval]
points = 5
[green]
points = 7
[solve]
M = 60
N = 40
snapshots = 0, 0.005
[mass-report]
M = 60
N = 40
[agents]
count = 20
dt = 1e-6
T = 1e-4
snapshots = 1e-5, 1e-4
[ctrw]
count = 50
T = 20
[compare]
count = 500
dt = 0.01
T = 0.1
M = 100
N = 100
"""

SCHEMAS = {
    "sample": {"sample.csv": ["index", "value"]},
    "ml-eval": {"ml_eval.csv": ["z", "value"]},
    "green": {"green.csv": ["x", "density"]},
    "solve": {"macro_t0.csv": ["x", "density"], "macro_t0.005.csv": ["x", "density"]},
    "mass-report": {"mass_report.csv": ["step", "time", "mass"]},
    "agents": {
        "agents_t1e-05.csv": ["agent_id", "x", "y"],
        "agents_t0.0001.csv": ["agent_id", "x", "y"],
        "agents_stats.csv": ["axis", "median", "q1", "q3", "whisker_lo", "whisker_hi", "outliers"],
    },
    "ctrw": {"ctrw.csv": ["walker_id", "position", "jumps"]},
    "compare": {"compare.csv": ["metric", "value"]},
}


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text(SMALL)
    return p


def run(command, config, out, *extra):
    return main([command, "--config", str(config), "--out", str(out), "--format", "csv", *extra])


@pytest.mark.parametrize("command", sorted(SCHEMAS))
def test_command_outputs_and_reproducibility(command, config, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(command, config, a, "--seed", "5") == EXIT_OK
    assert run(command, config, b, "--seed", "5") == EXIT_OK
    for name, header in SCHEMAS[command].items():
        meta, got, rows = read_csv(a / name)
        assert got == header
        assert rows
        assert meta["command"] == command and meta["global.seed"] == 5
        # data rows are byte-identical; metadata differs only in the echoed output directory
        la, lb = (a / name).read_bytes().splitlines(), (b / name).read_bytes().splitlines()
        assert la[1:] == lb[1:]
        mb = read_csv(b / name)[0]
        assert {k: v for k, v in meta.items() if k != "global.out"} == {k: v for k, v in mb.items() if k != "global.out"}


def test_seed_changes_random_output(config, tmp_path):
    run("sample", config, tmp_path / "a", "--seed", "1")
    run("sample", config, tmp_path / "b", "--seed", "2")
    rows = [(tmp_path / d / "sample.csv").read_text().splitlines()[1:] for d in "ab"]
    assert rows[0] != rows[1]


@pytest.mark.parametrize("command", ["sample", "agents", "ctrw", "compare"])
def test_randomized_commands_need_seed(command, config, tmp_path, capsys):
    assert run(command, config, tmp_path) == EXIT_CONFIG
    assert "--seed" in capsys.readouterr().err


def test_seed_from_config(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text("seed = 3\n[ctrw]\ncount = 5\nT = 2\n")
    assert main(["ctrw", "--config", str(p), "--out", str(tmp_path)]) == EXIT_OK
    meta, _, _ = read_csv(tmp_path / "ctrw.csv")
    assert meta["global.seed"] == 3


def test_config_errors(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[solve]\nalpha = 2.5\n")
    assert main(["solve", "--config", str(p), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "line 2" in capsys.readouterr().err
    assert main(["solve", "--config", str(tmp_path / "missing.ini")]) == EXIT_CONFIG
    assert main(["sample", "--seed", str(2**64), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_numerical_failure_exit_code(tmp_path, capsys):
    p = tmp_path / "unstable.ini"
    p.write_text("[solve]\nalpha = 2\nD = 500\nM = 60\nN = 40\nsnapshots = 0.005\n")
    assert main(["solve", "--config", str(p), "--out", str(tmp_path)]) == EXIT_NUMERIC
    assert "unstable" in capsys.readouterr().err


def test_metadata_echoes_defaults(config, tmp_path):
    run("solve", config, tmp_path)
    meta, _, _ = read_csv(tmp_path / "macro_t0.005.csv")
    assert "solve.method" in meta["defaulted"]
    assert meta["snapshot_time"] == 0.005 and meta["step"] == 40
    assert meta["solve.M"] == 60


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "fracsim", "ml-eval", "--out", str(tmp_path)], capture_output=True, text=True
    )
    assert res.returncode == 0, res.stderr
    _, header, rows = read_csv(tmp_path / "ml_eval.csv")
    assert header == ["z", "value"] and len(rows) == 101
    assert rows[-1] == [0.0, 1.0]
