"""Command-line entry point: ``fracsim <command> --config run.ini --seed 1 --out results/``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

import numpy as np

from . import agents, green, mittag_leffler, riesz, stable
from .harness import ConfigError, compare_micro_macro, mass_report, parse_config, write_csv

log = logging.getLogger("fracsim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = ("sample", "ml-eval", "green", "solve", "agents", "ctrw", "compare", "mass-report")
RANDOMIZED = {"sample", "agents", "ctrw", "compare"}


def _tag(t):
    return f"{t:.6g}"


def _q(values):
    return np.array(values, dtype=float).reshape(2, 2)


def _initial(sigma):
    return lambda x: np.exp(-x * x / (2.0 * sigma * sigma))


def _warn_edges(grid, U0):
    peak = np.abs(U0).max()
    if max(abs(U0[0]), abs(U0[-1])) > 1e-6 * peak:
        log.warning("initial data does not decay at the domain ends; the periodic wrap will couple them")


def cmd_sample(cfg, out, meta):
    c = cfg["sample"]
    stream = stable.RandomStream(cfg.seed)
    if c["kind"] == "subgaussian":
        z = stable.sample_subgaussian_2d(stable.EllipticalParams(c["alpha"], _q(c["q"])), stream, c["n"])
        rows = [(i, float(a), float(b)) for i, (a, b) in enumerate(z)]
        write_csv(os.path.join(out, "sample.csv"), ["index", "x", "y"], rows, meta)
        return
    if c["kind"] == "one-sided":
        v = stable.sample_one_sided_S(c["alpha"], stream, c["n"])
    else:
        v = stable.sample_stable(stable.StableParams(c["alpha"], c["beta"], c["sigma"], c["mu"]), stream, c["n"])
    write_csv(os.path.join(out, "sample.csv"), ["index", "value"], [(i, float(x)) for i, x in enumerate(v)], meta)


def cmd_ml_eval(cfg, out, meta):
    c = cfg["ml-eval"]
    zs = np.linspace(c["z_min"], c["z_max"], c["points"])
    rows = [(float(z), mittag_leffler.ml_derivative(c["beta"], c["derivative"], float(z))) for z in zs]
    write_csv(os.path.join(out, "ml_eval.csv"), ["z", "value"], rows, meta)


def cmd_green(cfg, out, meta):
    c = cfg["green"]
    xs = np.linspace(c["x_min"], c["x_max"], c["points"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", green.SlowDecayWarning)
        d = green.green_pdf(c["alpha"], c["beta"], xs, c["t"])
    write_csv(os.path.join(out, "green.csv"), ["x", "density"], zip(xs.tolist(), d.tolist()), meta)


def _grid(c):
    return riesz.GridSpec(c["a"], c["b"], c["M"], c["N"], c["T"])


def cmd_solve(cfg, out, meta):
    c = cfg["solve"]
    grid = _grid(c)
    phi0 = _initial(c["sigma"])
    _warn_edges(grid, phi0(grid.x))
    snaps = riesz.solve(grid, c["alpha"], c["D"], phi0, c["snapshots"], method=c["method"])
    by_step = {f.step_index: f for f in snaps}
    for t in c["snapshots"]:
        f = by_step[grid.step_for_time(t)]
        m = dict(meta, snapshot_time=t, step=f.step_index, mass=riesz.total_mass(f, c["mass_rule"]))
        rows = zip(grid.x.tolist(), f.values.tolist())
        write_csv(os.path.join(out, f"macro_t{_tag(t)}.csv"), ["x", "density"], rows, m)


def cmd_mass_report(cfg, out, meta):
    c = cfg["mass-report"]
    grid = _grid(c)
    phi0 = _initial(c["sigma"])
    _warn_edges(grid, phi0(grid.x))
    times = [n * grid.tau for n in range(grid.N + 1)]
    snaps = riesz.solve(grid, c["alpha"], c["D"], phi0, times)
    rep = mass_report(snaps, c["mass_rule"])
    m = dict(meta, relative_change=rep.relative_change, monotone=rep.monotone)
    write_csv(os.path.join(out, "mass_report.csv"), ["step", "time", "mass"], rep.trace, m)
    print(f"relative mass change {rep.relative_change:.6e} (monotone: {rep.monotone})")


def cmd_agents(cfg, out, meta):
    c = cfg["agents"]
    conf = agents.AgentConfig(c["alpha"], c["dt"], c["T"], c["count"], _q(c["q"]), cfg.seed, tuple(c["snapshots"]))
    snaps = agents.run_ensemble(conf)
    for s in snaps:
        m = dict(meta, requested_time=s.requested_time, step=s.step, time=s.time)
        rows = [(i, float(p[0]), float(p[1])) for i, p in enumerate(s.positions)]
        write_csv(os.path.join(out, f"agents_t{_tag(s.requested_time)}.csv"), ["agent_id", "x", "y"], rows, m)
    final = snaps[-1]
    rows = []
    for axis, name in ((0, "x"), (1, "y")):
        b = agents.boxplot_stats(final.positions[:, axis])
        rows.append((name, b["median"], b["q1"], b["q3"], b["whisker_lo"], b["whisker_hi"], b["outlier_count"]))
    header = ["axis", "median", "q1", "q3", "whisker_lo", "whisker_hi", "outliers"]
    write_csv(os.path.join(out, "agents_stats.csv"), header, rows, dict(meta, time=final.time))


def cmd_ctrw(cfg, out, meta):
    c = cfg["ctrw"]
    pos, counts = agents.ctrw_simulate(
        c["mu"], c["alpha"], c["jump_scale"], c["T"], c["count"], stable.RandomStream(cfg.seed), return_counts=True
    )
    rows = [(i, float(p), int(k)) for i, (p, k) in enumerate(zip(pos, counts))]
    write_csv(os.path.join(out, "ctrw.csv"), ["walker_id", "position", "jumps"], rows, meta)


def cmd_compare(cfg, out, meta):
    c = cfg["compare"]
    conf = agents.AgentConfig(c["alpha"], c["dt"], c["T"], c["count"], np.eye(2), cfg.seed)
    final = agents.run_ensemble(conf)[-1]
    grid = riesz.GridSpec(c["a"], c["b"], c["M"], c["N"], c["T"])
    # a narrow Gaussian stands in for the point source; its width is far below the kernel scale
    width = 2 * grid.h
    phi0 = lambda x: np.exp(-x * x / (2 * width * width)) / (width * np.sqrt(2 * np.pi))
    field = riesz.solve(grid, c["alpha"], 1.0, phi0, [c["T"]])[-1]
    oracle = green.convolve_initial(c["alpha"], c["T"], grid.x, phi0(grid.x))
    rep = compare_micro_macro(final.positions[:, 0], field, (grid.x, oracle), c["bins"] or None, c["tails"])
    rep.mass_trace = [(0.0, float(riesz.total_mass(riesz.DensityField(phi0(grid.x), grid)))), (c["T"], riesz.total_mass(field))]
    write_csv(os.path.join(out, "compare.csv"), ["metric", "value"], rep.rows(), meta)


HANDLERS = {
    "sample": cmd_sample,
    "ml-eval": cmd_ml_eval,
    "green": cmd_green,
    "solve": cmd_solve,
    "agents": cmd_agents,
    "ctrw": cmd_ctrw,
    "compare": cmd_compare,
    "mass-report": cmd_mass_report,
}


def build_parser():
    p = argparse.ArgumentParser(prog="fracsim", description="Fractional diffusion simulations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value config file with [section] headers")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (required for randomized commands)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=["csv"], default="csv")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config) as fh:
                text = fh.read()
        cfg = parse_config(text)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must be an unsigned 64-bit integer")
            cfg.sections["global"]["seed"] = args.seed
            cfg.defaulted = [d for d in cfg.defaulted if d != "global.seed"]
        if args.out is not None:
            cfg.sections["global"]["out"] = args.out
            cfg.defaulted = [d for d in cfg.defaulted if d != "global.out"]
        if args.command in RANDOMIZED and cfg.seed is None:
            raise ConfigError(f"'{args.command}' is randomized: pass --seed (no wall-clock seeding)")
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    meta = cfg.metadata(args.command)
    try:
        HANDLERS[args.command](cfg, cfg.out, meta)
    except ValueError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
