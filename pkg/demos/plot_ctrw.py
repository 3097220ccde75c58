"""
Continuous-time random walk and its diffusive limit
===================================================

Exponential waiting times with stable jumps: for long times the rescaled
position ``x / (mu T)^(1/alpha)`` approaches the symmetric stable law.
"""

import numpy as np
from scipy import stats

from fracsim import RandomStream, ctrw_simulate, levy_cdf

mu, alpha = 1.0, 1.5

# %%
# Short times: most walkers have not jumped yet.
pos = ctrw_simulate(mu, alpha, 1.0, 0.1, 5000, RandomStream(3))
print("at origin:", np.mean(pos == 0).round(4), " exp(-mu T):", np.exp(-0.1).round(4))

# %%
# Growing horizons: the KS distance to the limit law shrinks.
for T in (10.0, 100.0, 1000.0):
    pos = ctrw_simulate(mu, alpha, 1.0, T, 5000, RandomStream(4))
    z = pos / (mu * T) ** (1 / alpha)
    print(f"T={T:6g}: KS = {stats.kstest(z, lambda v: levy_cdf(alpha, v)).statistic:.4f}")
