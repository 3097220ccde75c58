"""
Levy-flight agents
==================

Agents step by ``dt**(1/alpha) * z`` with elliptical stable ``z``. Compared
with Brownian agents, the fractional ensemble has many more box-plot
outliers, while the x-marginal matches the stable Green function.
"""

import numpy as np
from scipy import stats

from fracsim import AgentConfig, boxplot_stats, run_ensemble, scaled_cdf

# %%
# Two small runs like the colony experiment: fractional and regular.
frac = AgentConfig(alpha=1.5, dt=1e-8, T=1e-4, count=100, seed=1, snapshot_times=(1e-6, 2.5e-5, 5e-5, 1e-4))
reg = AgentConfig(alpha=2.0, dt=1e-8, T=1e-4, count=100, Q=0.02 * np.eye(2), seed=1)
for name, conf in (("alpha=1.5", frac), ("alpha=2", reg)):
    final = run_ensemble(conf)[-1]
    b = boxplot_stats(final.positions[:, 0])
    print(f"{name}: median {b['median']:.2e}, IQR {b['iqr']:.2e}, outliers {b['outlier_count']}")

# %%
# Spread over time in the fractional run grows like t^(1/alpha).
for snap in run_ensemble(frac):
    print(f"t={snap.time:.1e}: median |x| = {np.median(np.abs(snap.positions[:, 0])):.3e}")

# %%
# A larger ensemble against the macroscopic density.
big = AgentConfig(alpha=1.5, dt=0.01, T=1.0, count=20_000, seed=2)
x = run_ensemble(big)[-1].positions[:, 0]
print("KS vs stable law:", stats.kstest(x, lambda v: scaled_cdf(1.5, v, 1.0)).statistic.round(4))
