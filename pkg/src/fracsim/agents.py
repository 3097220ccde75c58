"""Microscopic simulators: 2-D fractional SDE ensembles and a 1-D CTRW.

The ensemble follows ``X_{t+dt} = X_t + dt**(1/alpha) * Z`` with ``Z`` drawn
from the elliptical stable law of :func:`fracsim.stable.sample_subgaussian_2d`.
Each agent owns a substream keyed by ``(seed, agent index)``, so its
trajectory does not depend on how agents are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .stable import (
    EllipticalParams,
    RandomStream,
    StableParams,
    sample_stable,
    sample_subgaussian_2d,
)

__all__ = [
    "AgentConfig",
    "AgentEnsemble",
    "AgentSnapshot",
    "fsde_step",
    "run_ensemble",
    "boxplot_stats",
    "ctrw_simulate",
    "marginal_histogram",
]

_BLOCK = 1 << 14


@dataclass(frozen=True)
class AgentConfig:
    alpha: float
    dt: float
    T: float
    count: int
    Q: np.ndarray = field(default_factory=lambda: np.eye(2))
    seed: int = 0
    snapshot_times: tuple = ()

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.T >= self.dt:
            raise ValueError("T must be at least dt")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        # validates alpha and Q
        params = EllipticalParams(self.alpha, self.Q)
        object.__setattr__(self, "Q", params.Q)
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))

    @property
    def params(self) -> EllipticalParams:
        return EllipticalParams(self.alpha, self.Q)

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def step_for_time(self, t: float) -> int:
        n = int(round(t / self.dt))
        if n < 0 or n > self.n_steps:
            raise ValueError(f"snapshot time {t} outside [0, {self.T}]")
        return n


@dataclass
class AgentEnsemble:
    positions: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must have shape (count, 2)")
        if not np.all(np.isfinite(self.positions)):
            raise ValueError("positions must be finite")

    @classmethod
    def at_origin(cls, count: int) -> "AgentEnsemble":
        return cls(np.zeros((count, 2)), 0.0)


@dataclass
class AgentSnapshot:
    requested_time: float
    step: int
    time: float
    positions: np.ndarray


def fsde_step(ensemble: AgentEnsemble, config: AgentConfig, streams) -> AgentEnsemble:
    """Advance every agent by ``dt**(1/alpha) * z_i``.

    ``streams`` is either one generator/:class:`RandomStream` (one vectorized
    draw for the whole ensemble) or a sequence with one generator per agent.
    """
    count = ensemble.positions.shape[0]
    params = config.params
    if isinstance(streams, (RandomStream, np.random.Generator)):
        z = sample_subgaussian_2d(params, streams, count)
    else:
        if len(streams) != count:
            raise ValueError(f"need {count} streams, got {len(streams)}")
        z = np.vstack([sample_subgaussian_2d(params, s, 1) for s in streams])
    scale = config.dt ** (1.0 / config.alpha)
    return AgentEnsemble(ensemble.positions + scale * z, ensemble.time + config.dt)


def _agent_path_points(params, rng, scale, n_steps, steps):
    """Positions of one agent (started at the origin) at the sorted step indices."""
    out = np.empty((len(steps), 2))
    pos = np.zeros(2)
    done = 0
    k = 0
    while k < len(steps) and steps[k] == 0:
        out[k] = pos
        k += 1
    while k < len(steps):
        block = min(_BLOCK, steps[-1] - done)
        incr = scale * sample_subgaussian_2d(params, rng, block)
        path = pos + np.cumsum(incr, axis=0)
        while k < len(steps) and steps[k] <= done + block:
            out[k] = path[steps[k] - done - 1]
            k += 1
        pos = path[-1]
        done += block
    return out


def run_ensemble(config: AgentConfig) -> list[AgentSnapshot]:
    """Simulate ``config.count`` agents from the origin and collect snapshots.

    Snapshot times are rounded to the nearest multiple of ``dt``; the final
    time ``T`` is always included. Agent ``i`` draws from
    ``RandomStream(seed, i)``.
    """
    requested = list(config.snapshot_times) or [config.T]
    if config.T not in requested:
        requested.append(config.T)
    steps_req = [config.step_for_time(t) for t in requested]
    steps = sorted(set(steps_req))
    params = config.params
    scale = config.dt ** (1.0 / config.alpha)
    data = np.empty((len(steps), config.count, 2))
    for i in range(config.count):
        rng = RandomStream(config.seed, i).generator()
        data[:, i, :] = _agent_path_points(params, rng, scale, config.n_steps, steps)
    order = {s: j for j, s in enumerate(steps)}
    snaps = []
    for t, s in sorted(zip(requested, steps_req), key=lambda p: p[1]):
        if any(sn.step == s for sn in snaps):
            continue
        snaps.append(AgentSnapshot(t, s, s * config.dt, data[order[s]]))
    return snaps


def boxplot_stats(values) -> dict:
    """Tukey box-plot summary: linear-interpolated quartiles, 1.5 IQR whiskers."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("boxplot_stats needs at least one value")
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo_fence) & (v <= hi_fence)]
    return {
        "median": float(med),
        "q1": float(q1),
        "q3": float(q3),
        "iqr": float(iqr),
        "whisker_lo": float(inside.min()),
        "whisker_hi": float(inside.max()),
        "outlier_count": int(v.size - inside.size),
    }


def ctrw_simulate(mu, alpha, jump_scale, T, count, stream, return_counts=False):
    """Uncoupled CTRW: exponential(mu) waiting times, symmetric alpha-stable jumps.

    Walker ``i`` uses ``stream.substream(i)``. Returns final positions, and the
    per-walker jump counts when ``return_counts`` is set.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not T > 0:
        raise ValueError("T must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(stream, RandomStream):
        raise TypeError("ctrw_simulate needs a RandomStream to derive walker substreams")
    jumps = StableParams(alpha, 0.0, jump_scale, 0.0)
    # expected arrivals plus a generous margin, so one block usually suffices
    block = int(mu * T + 6 * math.sqrt(mu * T) + 16)
    positions = np.empty(count)
    counts = np.empty(count, dtype=np.int64)
    for i in range(count):
        rng = stream.substream(i).generator()
        n, clock = 0, 0.0
        while True:
            arrivals = clock + np.cumsum(rng.exponential(1.0 / mu, block))
            k = int(np.searchsorted(arrivals, T, side="right"))
            n += k
            if k < block:
                break
            clock = arrivals[-1]
        counts[i] = n
        positions[i] = sample_stable(jumps, rng, n).sum() if n else 0.0
    if return_counts:
        return positions, counts
    return positions


def marginal_histogram(positions, axis=0, bins=10, range=(-1.0, 1.0)):
    """Density histogram of one coordinate on uniform bins over ``range``.

    Bins are ``[lo, e_1], (e_1, e_2], ..., (e_{bins-1}, hi]``: a value on an
    interior edge counts toward the bin on its left. Normalized by the total
    sample count, so it integrates to the in-range fraction.

    Returns ``(edges, density)``.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    lo, hi = float(range[0]), float(range[1])
    if not hi > lo:
        raise ValueError("degenerate histogram range")
    p = np.asarray(positions, dtype=float)
    v = p[:, axis] if p.ndim == 2 else p.ravel()
    if v.size == 0:
        raise ValueError("no positions")
    width = (hi - lo) / bins
    edges = lo + width * np.arange(bins + 1)
    edges[-1] = hi
    keep = (v >= lo) & (v <= hi)
    idx = np.searchsorted(edges, v[keep], side="left") - 1
    idx = np.clip(idx, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return edges, counts / (v.size * width)
