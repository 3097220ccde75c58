"""
Green functions of fractional diffusion
=======================================

Densities of ``u_t = d^alpha u / d|x|^alpha`` computed by Fourier inversion,
their power-law tails, and the time-fractional case ``beta < 1``.
"""

import warnings

import numpy as np

from fracsim import (
    SlowDecayWarning,
    convolve_initial,
    gaussian_green,
    green_pdf,
    levy_pdf,
    levy_tail_constant,
    scaled_green,
)

x = np.array([0.0, 0.5, 1.0, 2.0, 5.0, 10.0])

# %%
# Stable densities for a few orders, with the heat kernel as reference.
print("x:        ", x)
print("heat      ", gaussian_green(x, 1.0).round(5))
for alpha in (1.9, 1.5, 1.1):
    print(f"alpha={alpha}: ", levy_pdf(alpha, x).round(5))

# %%
# Far out the density approaches c |x|^-(1+alpha).
c = levy_tail_constant(1.5)
for xv in (10.0, 40.0, 160.0):
    print(f"x={xv:5}: ratio to tail law {levy_pdf(1.5, xv) / (c * xv**-2.5):.4f}")

# %%
# Self-similarity: doubling t rescales space by 2^(1/alpha).
print(scaled_green(1.5, 0.0, 2.0), 2 ** (-2 / 3) * scaled_green(1.5, 0.0, 1.0))

# %%
# Time-fractional Green function: sharper peak than the beta = 1 case.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", SlowDecayWarning)
    for beta in (1.0, 0.7):
        print(f"beta={beta}:", green_pdf(1.8, beta, x[:4], 1.0).round(5))

# %%
# Smooth initial data: convolution with the kernel.
grid = np.linspace(-8, 8, 801)
phi0 = np.exp(-grid**2 / (2 * 0.2**2))
u = convolve_initial(1.5, 0.005, grid, phi0)
print("peak before / after:", phi0.max(), u.max().round(5))
