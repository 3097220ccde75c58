"""Run configuration, micro/macro comparison metrics, mass reports and CSV output."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
import io
import json
import math
import os
import re

import numpy as np

from .green import cdf_from_density
from .riesz import DensityField, total_mass

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "ComparisonReport",
    "compare_micro_macro",
    "MassReport",
    "mass_report",
    "tail_mass",
    "write_csv",
    "read_csv",
]


class ConfigError(ValueError):
    pass


def _float_list(text):
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    return [float(p) for p in parts]


def _in(lo, hi, lo_open=True, hi_open=False):
    def check(v):
        ok_lo = v > lo if lo_open else v >= lo
        ok_hi = v < hi if hi_open else v <= hi
        return ok_lo and ok_hi

    lb = "(" if lo_open else "["
    rb = ")" if hi_open else "]"
    return check, f"outside {lb}{lo:g}, {hi:g}{rb}"


_POS = (lambda v: v > 0, "must be positive")
_NONNEG = (lambda v: v >= 0, "must be non-negative")
_ANY = (lambda v: True, "")
_EVEN = (lambda v: v > 0 and v % 2 == 0, "must be a positive even integer")
_Q = (lambda v: len(v) == 4 and v[1] == v[2] and v[0] > 0 and v[0] * v[3] - v[1] * v[2] > 0,
      "must be 4 numbers q11, q12, q21, q22 of a symmetric positive-definite matrix")
_LIST = (lambda v: True, "")
_METHOD = (lambda v: v in ("direct", "fft"), "must be 'direct' or 'fft'")
_RULE = (lambda v: v in ("rectangle", "trapezoid"), "must be 'rectangle' or 'trapezoid'")
_KIND = (lambda v: v in ("stable", "one-sided", "subgaussian"), "must be stable, one-sided or subgaussian")

# section -> key -> (parser, default, (check, message))
SCHEMA = {
    "global": {
        "seed": (int, None, (lambda v: 0 <= v < 2**64, "must be an unsigned 64-bit integer")),
        "out": (str, ".", _ANY),
    },
    "sample": {
        "kind": (str, "stable", _KIND),
        "alpha": (float, 1.5, _in(0, 2)),
        "beta": (float, 0.0, _in(-1, 1, lo_open=False)),
        "sigma": (float, 1.0, _POS),
        "mu": (float, 0.0, _ANY),
        "n": (int, 1000, _POS),
        "q": (_float_list, [1.0, 0.0, 0.0, 1.0], _Q),
    },
    "ml-eval": {
        "beta": (float, 0.5, _in(0, 2)),
        "derivative": (int, 0, _NONNEG),
        "z_min": (float, -5.0, _ANY),
        "z_max": (float, 0.0, _ANY),
        "points": (int, 101, (lambda v: v >= 2, "must be >= 2")),
    },
    "green": {
        "alpha": (float, 1.5, _in(0, 2)),
        "beta": (float, 1.0, _in(0, 1)),
        "t": (float, 1.0, _POS),
        "x_min": (float, -5.0, _ANY),
        "x_max": (float, 5.0, _ANY),
        "points": (int, 201, (lambda v: v >= 2, "must be >= 2")),
    },
    "solve": {
        "alpha": (float, 1.5, _in(1, 2)),
        "D": (float, 1.0, _POS),
        "a": (float, -3.0, _ANY),
        "b": (float, 3.0, _ANY),
        "M": (int, 300, _EVEN),
        "N": (int, 199, _POS),
        "T": (float, 0.005, _POS),
        "sigma": (float, 0.2, _POS),
        "snapshots": (_float_list, [0.0, 0.00125, 0.0025, 0.005], _LIST),
        "method": (str, "direct", _METHOD),
        "mass_rule": (str, "rectangle", _RULE),
    },
    "agents": {
        "alpha": (float, 1.5, _in(0, 2)),
        "dt": (float, 1e-8, _POS),
        "T": (float, 1e-4, _POS),
        "count": (int, 100, _POS),
        "q": (_float_list, [1.0, 0.0, 0.0, 1.0], _Q),
        "snapshots": (_float_list, [1e-6, 2.5e-5, 5e-5, 1e-4], _LIST),
    },
    "ctrw": {
        "mu": (float, 1.0, _POS),
        "alpha": (float, 1.5, _in(0, 2)),
        "jump_scale": (float, 1.0, _POS),
        "T": (float, 1000.0, _POS),
        "count": (int, 10000, _POS),
    },
    "compare": {
        "alpha": (float, 1.5, _in(1, 2)),
        "count": (int, 20000, _POS),
        "dt": (float, 1e-3, _POS),
        "T": (float, 0.1, _POS),
        "a": (float, -5.0, _ANY),
        "b": (float, 5.0, _ANY),
        "M": (int, 500, _EVEN),
        "N": (int, 400, _POS),
        "bins": (int, 0, _NONNEG),
        "tails": (_float_list, [0.5, 1.0], _LIST),
    },
    "mass-report": {
        "alpha": (float, 1.5, _in(1, 2)),
        "D": (float, 1.0, _POS),
        "a": (float, -3.0, _ANY),
        "b": (float, 3.0, _ANY),
        "M": (int, 300, _EVEN),
        "N": (int, 199, _POS),
        "T": (float, 0.005, _POS),
        "sigma": (float, 0.2, _POS),
        "mass_rule": (str, "rectangle", _RULE),
    },
}


@dataclass
class RunConfig:
    """Validated configuration: ``sections[name][key]`` plus the defaults that were filled in."""

    sections: dict
    defaulted: list = field(default_factory=list)

    @property
    def seed(self):
        return self.sections["global"]["seed"]

    @property
    def out(self):
        return self.sections["global"]["out"]

    def __getitem__(self, section):
        return self.sections[section]

    def metadata(self, command=None) -> dict:
        meta = {"command": command} if command else {}
        keep = ["global"] + ([command] if command else [s for s in self.sections if s != "global"])
        for s in keep:
            for k, v in self.sections[s].items():
                meta[f"{s}.{k}"] = v
        meta["defaulted"] = [d for d in self.defaulted if d.split(".")[0] in keep]
        return meta


def _line_of(text, section, key):
    current = "global"
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"^\[(.+)\]$", s)
        if m:
            current = m.group(1).strip()
            if current == section and not key:
                return n
            continue
        m = re.match(r"^([^=#;]+?)\s*=", s)
        if m and current == section and m.group(1).strip() == key:
            return n
    return None


def parse_config(text: str) -> RunConfig:
    """Parse a ``key = value`` document with ``[section]`` headers and ``#`` comments.

    Keys before the first header belong to ``[global]``. Unknown sections or
    keys, malformed values and out-of-domain values raise :class:`ConfigError`
    naming the key and its line.
    """
    cp = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#",), strict=True
    )
    cp.optionxform = str  # keys are case-sensitive (D, M, N, T)
    body = text if re.match(r"^\s*\[", text) else "[global]\n" + text
    # the synthetic header shifts line numbers by one; _line_of works on the original text
    try:
        cp.read_string(body)
    except configparser.Error as err:
        raise ConfigError(f"malformed config: {err}") from err

    sections = {}
    defaulted = []
    for name in cp.sections():
        if name not in SCHEMA:
            raise ConfigError(f"unknown section [{name}] (line {_line_of(text, name, '') or '?'})")
    for name, schema in SCHEMA.items():
        values = {}
        given = cp[name] if cp.has_section(name) else {}
        for key in given:
            if key not in schema:
                raise ConfigError(f"unknown key '{key}' in [{name}] at line {_line_of(text, name, key)}")
        for key, (conv, default, (check, msg)) in schema.items():
            if key in given:
                raw = given[key]
                line = _line_of(text, name, key)
                try:
                    val = conv(raw)
                except (TypeError, ValueError) as err:
                    raise ConfigError(f"malformed value for '{key}' in [{name}] at line {line}: {raw!r}") from err
                if not check(val):
                    raise ConfigError(f"'{key}' in [{name}] at line {line}: {raw} {msg}")
            else:
                val = default
                defaulted.append(f"{name}.{key}")
            values[key] = val
        sections[name] = values

    for name in ("solve", "mass-report", "compare"):
        if not sections[name]["b"] > sections[name]["a"]:
            raise ConfigError(f"[{name}] needs b > a")
    return RunConfig(sections, defaulted)


def tail_mass(x, density, threshold):
    """Trapezoid mass of a tabulated density on ``|x| > threshold``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    total = 0.0
    # each side starts from the interpolated value exactly at the threshold
    for lo, hi in ((threshold, np.inf), (-np.inf, -threshold)):
        m = (x > lo) & (x < hi)
        if not m.any():
            continue
        edge = lo if np.isfinite(lo) else hi
        if x[0] <= edge <= x[-1]:
            xs = np.sort(np.append(x[m], edge))
            ds = np.interp(xs, x, d)
        else:
            xs, ds = x[m], d[m]
        total += float(np.sum(0.5 * (ds[1:] + ds[:-1]) * np.diff(xs)))
    return total


@dataclass
class ComparisonReport:
    l1_distance: dict
    ks_statistic: dict
    tail_mass_pairs: list
    mass_trace: list = field(default_factory=list)

    def rows(self):
        out = []
        for k, v in self.l1_distance.items():
            out.append((f"l1_{k}", v))
        for k, v in self.ks_statistic.items():
            out.append((f"ks_{k}", v))
        for thr, a, b in self.tail_mass_pairs:
            out.append((f"tail_agents_{thr:g}", a))
            out.append((f"tail_solver_{thr:g}", b))
        for t, m in self.mass_trace:
            out.append((f"mass_t{t:g}", m))
        return out


def _ks_against(samples, x, density):
    """Sup distance between the empirical CDF and a tabulated density's CDF, both conditioned on the grid range."""
    F = cdf_from_density(x, np.maximum(density, 0.0))
    if F[-1] <= 0:
        raise ValueError("density has no mass on its grid")
    F = F / F[-1]
    s = np.sort(samples[(samples >= x[0]) & (samples <= x[-1])])
    n = s.size
    if n == 0:
        raise ValueError("no samples inside the comparison range")
    Fs = np.interp(s, x, F)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - Fs), np.max(Fs - (i - 1) / n)))


def compare_micro_macro(agent_positions, solver_snapshot, oracle_density, bins=None, tails=(1.5,), value_range=None):
    """Quantify agreement of an agent histogram with solver and oracle densities.

    ``solver_snapshot`` and ``oracle_density`` are ``(x, density)`` pairs (a
    :class:`DensityField` is accepted for the solver). The comparison range
    defaults to the solver grid; both tabulations must cover it.
    """
    v = np.asarray(agent_positions, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("empty agent set")
    if isinstance(solver_snapshot, DensityField):
        solver_snapshot = (solver_snapshot.grid.x, solver_snapshot.values)
    xs, ds = (np.asarray(a, dtype=float) for a in solver_snapshot)
    xo, do = (np.asarray(a, dtype=float) for a in oracle_density)
    lo, hi = value_range if value_range is not None else (xs[0], xs[-1])
    tol = 1e-9 * max(1.0, hi - lo)
    for name, x in (("solver", xs), ("oracle", xo)):
        if x[0] > lo + tol or x[-1] < hi - tol:
            raise ValueError(f"{name} grid [{x[0]:g}, {x[-1]:g}] does not cover the range [{lo:g}, {hi:g}]")
    if bins is None or bins == 0:
        bins = int(math.ceil(2 * v.size ** (1.0 / 3.0)))

    width = (hi - lo) / bins
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    hist = counts / (v.size * width)
    centers = 0.5 * (edges[1:] + edges[:-1])

    l1, ks = {}, {}
    for name, x, d in (("solver", xs, ds), ("oracle", xo, do)):
        l1[name] = float(np.sum(np.abs(hist - np.interp(centers, x, d))) * width)
        m = (x >= lo - tol) & (x <= hi + tol)
        ks[name] = _ks_against(v, x[m], d[m])

    tail_pairs = []
    for thr in tails:
        agents = float(np.mean(np.abs(v) > thr))
        tail_pairs.append((float(thr), agents, tail_mass(xs, ds, thr)))
    return ComparisonReport(l1, ks, tail_pairs)


@dataclass
class MassReport:
    trace: list  # (step, time, mass)
    relative_change: float
    monotone: bool


def mass_report(snapshots, rule="rectangle") -> MassReport:
    """Mass per snapshot, relative change ``(M_final - M_0) / M_0`` and a non-increasing flag."""
    if len(snapshots) < 2:
        raise ValueError("mass_report needs at least two snapshots")
    trace = [(f.step_index, f.time, total_mass(f, rule)) for f in snapshots]
    m0, m1 = trace[0][2], trace[-1][2]
    rel = (m1 - m0) / m0 if m0 != 0 else 0.0
    masses = np.array([m for _, _, m in trace])
    monotone = bool(np.all(np.diff(masses) <= 0))
    return MassReport(trace, float(rel), monotone)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, header, rows, metadata=None):
    """Write rows under a commented JSON metadata line; floats use ``repr`` for exact round trips."""
    buf = io.StringIO()
    if metadata is not None:
        buf.write("# " + json.dumps(metadata, sort_keys=True, default=_json_default) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)!r}")


def read_csv(path):
    """Return ``(metadata, header, rows)`` with numeric fields converted to float."""
    meta = None
    with open(path) as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("# "):
        meta = json.loads(lines[0][2:])
        lines = lines[1:]
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = []
        for c in line.split(","):
            try:
                cells.append(float(c))
            except ValueError:
                cells.append(c)
        rows.append(cells)
    return meta, header, rows
