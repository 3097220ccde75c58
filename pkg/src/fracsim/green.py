"""Reference solutions of the symmetric space-fractional diffusion equation.

All densities are Fourier inversions of even characteristic functions,

    f(x) = (1/pi) int_0^inf cos(k x) chi(k) dk,

evaluated with QUADPACK's oscillatory rules (``weight='cos'``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate, interpolate

from .mittag_leffler import MLEvalConfig, ml, DEFAULT_CONFIG as ML_DEFAULT

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "SlowDecayWarning",
    "AccuracyWarning",
    "gaussian_green",
    "levy_pdf",
    "levy_cdf",
    "levy_tail_constant",
    "scaled_green",
    "scaled_cdf",
    "green_pdf",
    "convolve_initial",
    "cdf_from_density",
]


class QuadratureError(ArithmeticError):
    pass


class SlowDecayWarning(UserWarning):
    """The Fourier integrand decays algebraically; an asymptotic tail was added."""


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    """``k_max=None`` picks the cutoff where ``exp(-k**alpha) < 1e-17``."""

    k_max: float | None = None
    panels: int = 500
    abs_tol: float = 1e-13

    def __post_init__(self):
        if self.k_max is not None and not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if self.panels < 16:
            raise ValueError("panels must be >= 16")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")


DEFAULT_QUAD = QuadratureConfig()


def _check_alpha(alpha):
    if not (0.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")


def _check_t(t):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def gaussian_green(x, t):
    """Heat kernel of ``u_t = u_xx``: ``exp(-x^2 / 4t) / (2 sqrt(pi t))``."""
    _check_t(t)
    x = np.asarray(x, dtype=float)
    out = np.exp(-x * x / (4.0 * t)) / (2.0 * math.sqrt(math.pi * t))
    return out[()] if out.ndim == 0 else out


def _cos_transform(func, x, k_max, cfg):
    if x == 0.0:
        val, err = integrate.quad(func, 0.0, k_max, epsabs=cfg.abs_tol, epsrel=1e-12, limit=cfg.panels)
    else:
        val, err = integrate.quad(
            func, 0.0, k_max, weight="cos", wvar=x, epsabs=cfg.abs_tol, epsrel=1e-12, limit=cfg.panels
        )
    if not err <= max(10 * cfg.abs_tol, 1e-10 * abs(val)):
        raise QuadratureError(f"Fourier inversion did not converge at x={x}: error estimate {err:.3g}")
    return val / math.pi


def _levy_kmax(alpha, cfg):
    if cfg.k_max is not None:
        return cfg.k_max
    return (-math.log(1e-17)) ** (1.0 / alpha)


def _levy_pdf_scalar(alpha, x, cfg):
    return _cos_transform(lambda k: math.exp(-(k ** alpha)), abs(x), _levy_kmax(alpha, cfg), cfg)


def levy_pdf(alpha: float, x, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Symmetric alpha-stable density with characteristic function ``exp(-|k|**alpha)``."""
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    out = np.array([_levy_pdf_scalar(alpha, float(v), cfg) for v in x.ravel()]).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def levy_tail_constant(alpha: float) -> float:
    """``c`` in ``levy_pdf(x) ~ c |x|**-(1 + alpha)`` as ``|x| -> inf``."""
    return math.gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0) / math.pi


def cdf_from_density(x, density, left_mass=0.0):
    """Cumulative trapezoid of a tabulated density, starting from ``left_mass``."""
    x = np.asarray(x, dtype=float)
    density = np.asarray(density, dtype=float)
    steps = 0.5 * (density[1:] + density[:-1]) * np.diff(x)
    return left_mass + np.concatenate([[0.0], np.cumsum(steps)])


@lru_cache(maxsize=16)
def _levy_cdf_table(alpha, half_width, points):
    # sinh-spaced grid on [0, half_width]: fine near the mode, coarse in the tail
    s = 0.5
    u = np.linspace(0.0, math.asinh(half_width / s), points)
    xs = s * np.sinh(u)
    # Simpson in u, where f(x(u)) x'(u) is smooth
    pdf = levy_pdf(alpha, xs)
    F = 0.5 + integrate.cumulative_simpson(pdf * s * np.cosh(u), x=u, initial=0.0)
    # the density is the slope, so Hermite interpolation is cheap and 4th order
    return xs, F, interpolate.CubicHermiteSpline(xs, F, pdf)


def levy_cdf(alpha: float, x, half_width: float = 400.0, points: int = 2001):
    """Distribution function of :func:`levy_pdf`.

    Cumulative Simpson integral of the density on ``[0, half_width]`` (``F(0) = 1/2``
    by symmetry); beyond the table the power-law tail ``c |x|**-alpha / alpha``
    is used.
    """
    _check_alpha(alpha)
    xs, F, spline = _levy_cdf_table(float(alpha), float(half_width), int(points))
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    inside = spline(np.minimum(ax, xs[-1]))
    c = levy_tail_constant(alpha)
    with np.errstate(divide="ignore"):
        tail = 1.0 - c * np.where(ax > 0, ax, 1.0) ** (-alpha) / alpha
    upper = np.where(ax > xs[-1], np.maximum(tail, F[-1]), inside)
    out = np.where(x >= 0, upper, 1.0 - upper)
    return out[()] if out.ndim == 0 else out


def scaled_green(alpha: float, x, t: float, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Green function ``t**(-1/alpha) L_alpha(x t**(-1/alpha))`` of ``u_t = d^alpha u / d|x|^alpha``."""
    _check_alpha(alpha)
    _check_t(t)
    s = t ** (1.0 / alpha)
    return levy_pdf(alpha, np.asarray(x, dtype=float) / s, cfg) / s


def scaled_cdf(alpha: float, x, t: float):
    _check_alpha(alpha)
    _check_t(t)
    return levy_cdf(alpha, np.asarray(x, dtype=float) / t ** (1.0 / alpha))


def _green_tail_at_zero(alpha, beta, t, K, orders=6):
    # int_K^inf E_beta(-k^alpha t^beta) dk with E_beta(-y) ~ sum_j (-1)^(j+1) y^(-j) / Gamma(1 - beta j)
    total = 0.0
    for j in range(1, orders + 1):
        arg = 1.0 - beta * j
        if arg <= 0 and arg == math.floor(arg):
            continue
        p = alpha * j - 1.0
        total += (-1.0) ** (j + 1) * t ** (-beta * j) * K ** (-p) / (p * math.gamma(arg))
    return total


def green_pdf(
    alpha: float,
    beta: float,
    x,
    t: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    ml_cfg: MLEvalConfig = ML_DEFAULT,
):
    """Green function of the space-time fractional equation (symmetric case).

    ``(1/pi) int_0^inf cos(k x) E_beta(-k**alpha t**beta) dk``. For ``beta = 1``
    this is :func:`scaled_green`. For ``beta < 1`` the integrand decays only
    like ``k**-alpha``; at ``x = 0`` the integral is cut at ``k_max`` and the
    asymptotic tail is added (a :class:`SlowDecayWarning` is emitted when that
    tail exceeds ``abs_tol``), at ``x != 0`` QUADPACK's Fourier-integral rule
    handles the infinite range.
    """
    _check_alpha(alpha)
    _check_t(t)
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if beta == 1.0:
        return scaled_green(alpha, x, t, cfg)
    if alpha <= 1.0:
        raise ValueError("green_pdf with beta < 1 needs alpha > 1 for a bounded density")
    tb = t ** beta

    def chi(k):
        return ml(beta, -(k ** alpha) * tb, ml_cfg)

    def one(xv):
        xv = abs(xv)
        if xv == 0.0:
            K = cfg.k_max if cfg.k_max is not None else 50.0 / tb ** (1.0 / alpha)
            head, err = integrate.quad(chi, 0.0, K, epsabs=cfg.abs_tol, epsrel=1e-11, limit=cfg.panels)
            tail = _green_tail_at_zero(alpha, beta, t, K)
            if abs(tail) > cfg.abs_tol:
                warnings.warn(
                    f"algebraic decay: asymptotic tail {tail:.3g} added beyond k={K:.3g}",
                    SlowDecayWarning,
                    stacklevel=3,
                )
            return (head + tail) / math.pi
        with warnings.catch_warnings():
            # QAWF flags slow cycles; the error estimate is checked below instead
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(chi, 0.0, np.inf, weight="cos", wvar=xv, epsabs=cfg.abs_tol, limlst=100)
        if not err <= max(1e3 * cfg.abs_tol, 1e-8 * abs(val)):
            raise QuadratureError(f"Fourier inversion did not converge at x={xv}: error estimate {err:.3g}")
        return val / math.pi

    xa = np.asarray(x, dtype=float)
    out = np.array([one(float(v)) for v in xa.ravel()]).reshape(xa.shape)
    return out[()] if out.ndim == 0 else out


def convolve_initial(alpha: float, t: float, x, phi0, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Solution at time ``t`` for tabulated initial data on a uniform grid.

    ``u(x_i) = sum_j w_j h G(x_i - x_j, t) phi0(x_j)`` with trapezoid weights
    ``w_j`` and ``G`` from :func:`scaled_green`. Data outside the grid is
    treated as zero.
    """
    _check_alpha(alpha)
    _check_t(t)
    x = np.asarray(x, dtype=float)
    phi0 = np.asarray(phi0, dtype=float)
    if x.ndim != 1 or x.shape != phi0.shape or x.size < 2:
        raise ValueError("x and phi0 must be 1-D arrays of equal length >= 2")
    if np.any(phi0 < 0):
        raise ValueError("phi0 must be non-negative")
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ValueError("x must be uniformly spaced")
    if h > t ** (1.0 / alpha):
        warnings.warn(
            f"grid spacing {h:.3g} exceeds the kernel width {t ** (1.0 / alpha):.3g}; result is coarse",
            AccuracyWarning,
            stacklevel=2,
        )
    n = x.size
    offsets = h * np.arange(n)
    g_half = scaled_green(alpha, offsets, t, cfg)
    kernel = np.concatenate([g_half[:0:-1], g_half])  # offsets -(n-1)h .. (n-1)h
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    full = np.convolve(w * phi0, kernel)
    return h * full[n - 1 : 2 * n - 1]
