"""Explicit shifted Grünwald-Letnikov scheme for Riesz space-fractional diffusion.

Solves ``u_t = D d^alpha u / d|x|^alpha`` on ``[a, b]`` with the lattice closed
into a circle of ``M + 1`` sites (``x_M`` and ``x_0`` are neighbours). The
update at the midpoint ``M2 = M/2`` is written as one stencil vector of length
``M + 1``; every other site reuses that stencil after a cyclic relabelling of
the state, which makes the update a circulant matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

__all__ = [
    "GridSpec",
    "SchemeKernel",
    "DensityField",
    "InstabilityError",
    "grunwald_coefficients",
    "scheme_weights",
    "build_kernel",
    "identity_kernel",
    "permutation_indices",
    "step",
    "solve",
    "total_mass",
    "amplification_spectrum",
]


class InstabilityError(FloatingPointError):
    """The explicit iteration blew up."""


@dataclass(frozen=True)
class GridSpec:
    a: float
    b: float
    M: int
    N: int
    T: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("need b > a")
        if self.M <= 0 or self.M % 2:
            raise ValueError(f"M must be a positive even integer, got {self.M}")
        if self.N <= 0:
            raise ValueError("N must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.M

    @property
    def tau(self) -> float:
        return self.T / self.N

    @property
    def M2(self) -> int:
        return self.M // 2

    @property
    def x(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.M + 1)

    def step_for_time(self, t: float) -> int:
        """Nearest time index to ``t``."""
        n = int(round(t / self.tau))
        if n < 0 or n > self.N:
            raise ValueError(f"time {t} lies outside [0, {self.T}]")
        return n


@dataclass(frozen=True)
class SchemeKernel:
    alpha: float
    c_alpha: float
    r: float
    g: np.ndarray
    w: np.ndarray
    stencil: np.ndarray

    @property
    def M(self) -> int:
        return self.stencil.size - 1

    @property
    def mass_multiplier(self) -> float:
        """Factor by which one step scales ``sum(U)``."""
        return float(self.stencil.sum())


@dataclass
class DensityField:
    values: np.ndarray
    grid: GridSpec
    step_index: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.M + 1,):
            raise ValueError(f"expected {self.grid.M + 1} values, got shape {self.values.shape}")

    @property
    def time(self) -> float:
        return self.step_index * self.grid.tau


def grunwald_coefficients(alpha: float, count: int) -> np.ndarray:
    """``g_0 .. g_count`` of ``(1 - z)**alpha``.

    Uses ``g_j = g_{j-1} (j - 1 - alpha) / j``, which stays accurate for large
    ``j`` where the Gamma-ratio form overflows.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    g = np.empty(count + 1)
    g[0] = 1.0
    for j in range(1, count + 1):
        g[j] = g[j - 1] * (j - 1 - alpha) / j
    return g


def scheme_weights(alpha: float, count: int) -> np.ndarray:
    """Shifted weights ``w_j = (alpha/2) g_j + ((2 - alpha)/2) g_{j-1}``, ``j = 0 .. count``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    g = grunwald_coefficients(alpha, count)
    w = 0.5 * alpha * g
    w[1:] += 0.5 * (2.0 - alpha) * g[:-1]
    return w


def _stencil(w, r, M2):
    s = np.empty(2 * M2 + 1)
    s[M2] = 1.0 - 2.0 * r * w[1]
    s[M2 + 1] = s[M2 - 1] = -r * (w[0] + w[2])
    d = np.arange(2, M2 + 1)
    s[M2 + d] = -r * w[d + 1]
    s[M2 - d] = -r * w[d + 1]
    return s


def build_kernel(alpha: float, grid: GridSpec, D: float) -> SchemeKernel:
    """Stencil of the explicit scheme, centred at ``M2``.

    Accumulating both one-sided sums at ``i = M2`` gives

    * centre: ``1 - 2 r w_1``
    * offset +-1: ``-r (w_0 + w_2)``
    * offset +-d, ``2 <= d <= M2``: ``-r w_{d+1}``

    with ``r = D tau c_alpha / h**alpha`` and ``c_alpha = 1 / (2 cos(alpha pi / 2))``.
    At ``alpha = 2`` this is the three-point heat stencil.
    """
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    if not D > 0:
        raise ValueError("D must be positive")
    c_alpha = 1.0 / (2.0 * math.cos(alpha * math.pi / 2.0))
    r = D * grid.tau * c_alpha / grid.h ** alpha
    g = grunwald_coefficients(alpha, grid.M2 + 1)
    w = scheme_weights(alpha, grid.M2 + 1)
    return SchemeKernel(alpha, c_alpha, r, g, w, _stencil(w, r, grid.M2))


def identity_kernel(M: int) -> SchemeKernel:
    s = np.zeros(M + 1)
    s[M // 2] = 1.0
    return SchemeKernel(float("nan"), float("nan"), 0.0, np.array([1.0]), np.array([1.0]), s)


def permutation_indices(i: int, M: int) -> np.ndarray:
    """Index map ``p`` with ``(P_{i,M} U)[k] = U[p[k]]``.

    Rotates the cyclic state so that site ``i`` lands on the centre slot
    ``M/2``; ``i = M/2`` gives the identity.
    """
    if M <= 0 or M % 2:
        raise ValueError("M must be a positive even integer")
    if not (0 <= i <= M):
        raise IndexError(f"index {i} outside 0..{M}")
    return (i - M // 2 + np.arange(M + 1)) % (M + 1)


def _gather_matrix(M):
    return (np.arange(M + 1)[:, None] - M // 2 + np.arange(M + 1)[None, :]) % (M + 1)


def _step_values(U, stencil, method, _cache={}):
    if method == "direct":
        M = stencil.size - 1
        idx = _cache.get(M)
        if idx is None:
            idx = _cache.setdefault(M, _gather_matrix(M))
        return U[idx] @ stencil
    if method == "fft":
        # U_new[i] = sum_m c_m U[i + m]: a circular cross-correlation
        L = stencil.size
        kvec = np.roll(stencil, -(L // 2))
        return np.fft.irfft(np.fft.rfft(U) * np.conj(np.fft.rfft(kvec)), n=L)
    raise ValueError(f"unknown method {method!r}")


def step(field: DensityField, kernel: SchemeKernel, method: str = "direct") -> DensityField:
    """One explicit step: ``U_i <- <stencil, P_{i,M} U>`` for every ``i``.

    ``method='direct'`` forms the permuted dot products; ``'fft'`` evaluates
    the same circulant product in ``O(M log M)``.
    """
    if kernel.M != field.grid.M:
        raise ValueError(f"kernel is for M={kernel.M}, field has M={field.grid.M}")
    if not np.all(np.isfinite(field.values)):
        raise FloatingPointError("non-finite values in state")
    new = _step_values(field.values, kernel.stencil, method)
    return DensityField(new, field.grid, field.step_index + 1)


def solve(
    grid: GridSpec,
    alpha: float,
    D: float,
    phi0,
    snapshot_times=(0.0,),
    method: str = "direct",
    kernel: SchemeKernel | None = None,
) -> list[DensityField]:
    """Iterate from ``U^0_i = phi0(x_i)`` for ``N`` steps.

    ``phi0`` may be a callable or an array of ``M + 1`` values. Snapshot times
    are mapped to the nearest step index. Raises :class:`InstabilityError`
    when ``max|U|`` exceeds ``1e6`` times its initial value.
    """
    if kernel is None:
        kernel = build_kernel(alpha, grid, D)
    U0 = phi0(grid.x) if callable(phi0) else phi0
    field = DensityField(np.array(U0, dtype=float), grid, 0)
    wanted = sorted({grid.step_for_time(t) for t in snapshot_times})
    limit = 1e6 * np.abs(field.values).max()
    last = wanted[-1] if wanted else 0
    out = []
    if wanted and wanted[0] == 0:
        out.append(field)
    targets = set(wanted)
    for n in range(1, last + 1):
        field = step(field, kernel, method)
        peak = np.abs(field.values).max()
        if peak > limit:
            raise InstabilityError(
                f"explicit scheme unstable at step {n}: max|U| = {peak:.3g} "
                f"(growth factor per step {amplification_spectrum(kernel).max():.6g})"
            )
        if n in targets:
            out.append(field)
    return out


def total_mass(field: DensityField, rule: str = "rectangle") -> float:
    """``h * sum(U)``; ``rule='trapezoid'`` halves the two end values."""
    U = field.values
    if rule == "rectangle":
        return float(field.grid.h * U.sum())
    if rule == "trapezoid":
        return float(field.grid.h * (U.sum() - 0.5 * (U[0] + U[-1])))
    raise ValueError(f"unknown rule {rule!r}")


def amplification_spectrum(kernel: SchemeKernel) -> np.ndarray:
    """Magnitudes of the ``M + 1`` eigenvalues of the circulant update matrix."""
    L = kernel.stencil.size
    kvec = np.roll(kernel.stencil, -(L // 2))
    return np.abs(np.fft.fft(kvec))
