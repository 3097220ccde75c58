import json
import math

import numpy as np
import pytest

from fracsim.green import cdf_from_density, scaled_green
from fracsim.harness import (
    ConfigError,
    compare_micro_macro,
    mass_report,
    parse_config,
    read_csv,
    tail_mass,
    write_csv,
)
from fracsim.riesz import GridSpec, identity_kernel, solve
from fracsim.stable import RandomStream

REF = GridSpec(-3.0, 3.0, 300, 199, 0.005)
gaussian0 = lambda x: np.exp(-x * x / (2 * 0.2**2))

MACRO_BLOCK = """\
# macroscopic runs
seed = 42
[solve]
alpha = 1.5
D = 1
a = -3
b = 3
M = 300
N = 199
T = 0.005
sigma = 0.2
[mass-report]
alpha = 1.99
D = 0.02   # regular run
"""


def test_parse_sets_solver_alpha():
    cfg = parse_config("[solve]\nalpha = 1.5\n")
    assert cfg["solve"]["alpha"] == 1.5
    assert "solve.alpha" not in cfg.defaulted
    assert "solve.D" in cfg.defaulted


def test_parse_rejects_alpha_out_of_range():
    with pytest.raises(ConfigError, match=r"alpha.*line 2.*\(1, 2\]"):
        parse_config("[solve]\nalpha = 2.5\n")
    assert parse_config("[solve]\nalpha = 2\n")["solve"]["alpha"] == 2.0


def test_macro_block_round_trip():
    cfg = parse_config(MACRO_BLOCK)
    assert cfg.seed == 42
    s = cfg["solve"]
    assert (s["M"], s["N"], s["a"], s["b"], s["T"], s["sigma"], s["D"]) == (300, 199, -3.0, 3.0, 0.005, 0.2, 1.0)
    assert cfg["mass-report"]["D"] == 0.02
    meta = json.loads(json.dumps(cfg.metadata("solve")))
    assert meta["command"] == "solve"
    assert meta["global.seed"] == 42
    assert meta["solve.M"] == 300 and meta["solve.D"] == 1.0
    assert "solve.method" in meta["defaulted"]
    assert not any(k.startswith("agents.") for k in meta)


@pytest.mark.parametrize(
    "text, pattern",
    [
        ("[solve]\nalpha = 1.5\nbogus = 1\n", r"unknown key 'bogus'.*line 3"),
        ("seed = 1\n\n[nowhere]\nx = 1\n", r"unknown section \[nowhere\].*line 3"),
        ("[solve]\nM = three\n", r"malformed value for 'M'.*line 2"),
        ("[solve]\nM = 301\n", r"'M'.*line 2.*even"),
        ("[solve]\na = 3\nb = -3\n", r"b > a"),
        ("[agents]\nq = 1, 2, 2, 1\n", r"'q'.*positive-definite"),
        ("[solve]\nalpha = 1.5\nalpha = 1.6\n", r"malformed"),
        ("seed = -4\n", r"'seed'.*line 1"),
    ],
)
def test_parse_errors_name_key_and_line(text, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text)


def test_parse_empty_gives_defaults():
    cfg = parse_config("")
    assert cfg.seed is None
    assert cfg["agents"]["snapshots"] == [1e-6, 2.5e-5, 5e-5, 1e-4]
    assert cfg["solve"]["method"] == "direct"


def test_tail_mass_gaussian():
    x = np.linspace(-10, 10, 20001)
    d = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    assert tail_mass(x, d, 1.0) == pytest.approx(math.erfc(1 / math.sqrt(2)), abs=1e-5)


def test_compare_self_consistency():
    # agents drawn from the oracle by inverse CDF
    x = np.linspace(-5, 5, 2001)
    d = scaled_green(1.5, x, 1.0)
    F = cdf_from_density(x, d)
    F /= F[-1]
    n = 20_000
    u = RandomStream(1).generator().random(n)
    agents = np.interp(u, F, x)
    rep = compare_micro_macro(agents, (x, d), (x, d))
    bound = 1.5 * 1.36 / math.sqrt(n)
    assert rep.ks_statistic["oracle"] <= bound
    assert rep.ks_statistic["solver"] == rep.ks_statistic["oracle"]
    assert 0 <= rep.l1_distance["oracle"] < 0.05
    thr, a, b = rep.tail_mass_pairs[0]
    assert thr == 1.5 and a == pytest.approx(b, abs=0.01)


def test_compare_default_bins_and_rows():
    x = np.linspace(-1, 1, 201)
    d = np.full_like(x, 0.5)
    agents = np.linspace(-0.999, 0.999, 1000)
    rep = compare_micro_macro(agents, (x, d), (x, d), tails=(0.5,))
    names = [name for name, _ in rep.rows()]
    assert names == ["l1_solver", "l1_oracle", "ks_solver", "ks_oracle", "tail_agents_0.5", "tail_solver_0.5"]
    assert rep.l1_distance["oracle"] < 1e-12  # 20 equal bins of 50 points each


def test_compare_tails_heavier_for_smaller_alpha():
    heavy = solve(REF, 1.5, 1.0, gaussian0, [REF.T])[-1]
    light = solve(REF, 1.99, 0.02, gaussian0, [REF.T])[-1]
    agents = np.zeros(10)
    oracle = (REF.x, gaussian0(REF.x))
    th = compare_micro_macro(agents, heavy, oracle, tails=(1.5,)).tail_mass_pairs[0][2]
    tl = compare_micro_macro(agents, light, oracle, tails=(1.5,)).tail_mass_pairs[0][2]
    assert th > tl


def test_compare_errors():
    x = np.linspace(-1, 1, 11)
    with pytest.raises(ValueError, match="empty"):
        compare_micro_macro([], (x, x * 0 + 1), (x, x * 0 + 1))
    with pytest.raises(ValueError, match="cover"):
        compare_micro_macro([0.0], (x, x * 0 + 1), (x[2:], x[2:] * 0 + 1))
    with pytest.raises(ValueError, match="no samples"):
        compare_micro_macro([5.0], (x, x * 0 + 1), (x, x * 0 + 1))


def test_mass_report_identity():
    snaps = solve(REF, 1.5, 1.0, gaussian0, [0.0, 0.001, REF.T], kernel=identity_kernel(REF.M))
    rep = mass_report(snaps)
    assert rep.relative_change == 0.0
    assert rep.monotone
    assert [t[0] for t in rep.trace] == [0, 40, 199]


def test_mass_report_domain_size():
    rel = []
    for grid in (REF, GridSpec(-6.0, 6.0, 600, 199, 0.005)):
        rel.append(abs(mass_report(solve(grid, 1.99, 0.02, gaussian0, [0.0, grid.T])).relative_change))
    assert rel[1] <= rel[0]


def test_mass_report_alpha_15_regression():
    times = [n * REF.tau for n in range(REF.N + 1)]
    rep = mass_report(solve(REF, 1.5, 1.0, gaussian0, times, method="fft"))
    # measured once with this implementation and frozen
    assert rep.relative_change == pytest.approx(-3.8190563441908854e-4, rel=1e-9)
    assert rep.monotone
    with pytest.raises(ValueError):
        mass_report(rep.trace[:1])


def test_csv_round_trip(tmp_path):
    path = tmp_path / "sub" / "out.csv"
    rows = [(0, 0.1, "a"), (1, 1 / 3, "b")]
    write_csv(path, ["i", "v", "tag"], rows, {"seed": np.uint64(7), "grid": np.arange(2)})
    meta, header, back = read_csv(path)
    assert meta == {"seed": 7, "grid": [0, 1]}
    assert header == ["i", "v", "tag"]
    assert back[1][1] == 1 / 3
    assert path.read_text().splitlines()[0].startswith("# {")
