"""
Mittag-Leffler functions and jump-count laws
============================================

``E_beta(z)`` interpolates between the exponential (``beta = 1``) and slower,
power-law relaxation (``beta < 1``). The jump count of a renewal process
with Mittag-Leffler waiting times follows from its derivatives.
"""

import math

import numpy as np

from fracsim import jump_count_pmf, ml

# %%
# Relaxation curves E_beta(-t^beta).
ts = [0.1, 1.0, 5.0, 20.0, 100.0]
for beta in (1.0, 0.8, 0.5, 0.3):
    row = "  ".join(f"{ml(beta, -(t**beta)):.3e}" for t in ts)
    print(f"beta={beta}: {row}")

# %%
# beta = 1/2 has the closed form exp(x^2) erfc(x).
x = 3.0
print("E_1/2(-3):", ml(0.5, -x), " closed form:", math.exp(x * x) * math.erfc(x))

# %%
# Jump-count distribution at t = 2: Poisson for beta = 1, broader for beta < 1.
for beta in (1.0, 0.6):
    p = np.array([jump_count_pmf(beta, 2.0, n) for n in range(12)])
    print(f"beta={beta}: P(0..11) =", np.array2string(p, precision=4), " partial sum", round(p.sum(), 6))
